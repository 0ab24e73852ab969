#include "winmdp/graph.hpp"

#include <algorithm>
#include <deque>

namespace winmdp {

namespace {

// Iterative Tarjan over the support graph induced by `active`. States not
// mentioned in `active` (empty action list) still get a component id of their
// own; callers filter. Ids count up as components complete, so every edge of
// the condensation goes from a higher id to a lower one.
struct TarjanState {
    const Mdp& m;
    const std::vector<std::vector<int>>& active;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int next_index = 0, next_comp = 0;

    TarjanState(const Mdp& mdp, const std::vector<std::vector<int>>& act)
        : m(mdp),
          active(act),
          index(mdp.state_count(), -1),
          low(mdp.state_count(), 0),
          comp(mdp.state_count(), -1),
          on_stack(mdp.state_count(), false) {}

    void run(int root) {
        // Explicit DFS frame: state, action position, support position.
        struct Frame {
            int s;
            size_t ai, ti;
        };
        std::vector<Frame> frames;
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        frames.push_back({root, 0, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            int s = f.s;
            bool descended = false;
            while (f.ai < active[s].size()) {
                const auto& support = m.dist(s, active[s][f.ai]).support;
                if (f.ti >= support.size()) {
                    ++f.ai;
                    f.ti = 0;
                    continue;
                }
                int t = support[f.ti++].first;
                if (index[t] == -1) {
                    index[t] = low[t] = next_index++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    frames.push_back({t, 0, 0});
                    descended = true;
                    break;
                }
                if (on_stack[t]) low[s] = std::min(low[s], index[t]);
            }
            if (descended) continue;
            if (low[s] == index[s]) {
                int t;
                do {
                    t = stack.back();
                    stack.pop_back();
                    on_stack[t] = false;
                    comp[t] = next_comp;
                } while (t != s);
                ++next_comp;
            }
            frames.pop_back();
            if (!frames.empty()) {
                int parent = frames.back().s;
                low[parent] = std::min(low[parent], low[s]);
            }
        }
    }
};

}  // namespace

std::vector<int> scc_ids(const Mdp& m, const std::vector<std::vector<int>>& active,
                         int* component_count) {
    TarjanState t(m, active);
    for (int s = 0; s < m.state_count(); ++s)
        if (t.index[s] == -1) t.run(s);
    if (component_count) *component_count = t.next_comp;
    return t.comp;
}

MecDecomposition mec_decomposition(const Mdp& m) {
    int n = m.state_count();
    std::vector<std::vector<int>> active(n);
    std::vector<bool> alive(n, true);
    for (int s = 0; s < n; ++s) active[s] = m.enabled(s);

    bool changed = true;
    std::vector<int> comp;
    while (changed) {
        changed = false;
        comp = scc_ids(m, active);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            auto& acts = active[s];
            auto keep_end = std::remove_if(acts.begin(), acts.end(), [&](int a) {
                for (const auto& [t, _] : m.dist(s, a).support)
                    if (!alive[t] || comp[t] != comp[s]) return true;
                return false;
            });
            if (keep_end != acts.end()) {
                acts.erase(keep_end, acts.end());
                changed = true;
            }
            if (acts.empty() && alive[s]) {
                alive[s] = false;
                changed = true;
            }
        }
    }

    // Group the surviving states by component; each group is a MEC.
    MecDecomposition out;
    out.membership.assign(n, -1);
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of_comp;
    for (int s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        int c = comp[s];
        if (static_cast<int>(group_of_comp.size()) <= c) group_of_comp.resize(c + 1, -1);
        if (group_of_comp[c] == -1) {
            group_of_comp[c] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[group_of_comp[c]].push_back(s);
    }
    std::sort(groups.begin(), groups.end());
    for (auto& g : groups) {
        Mec mec;
        mec.states = g;
        for (int s : g) {
            out.membership[s] = static_cast<int>(out.mecs.size());
            mec.actions.push_back(active[s]);
        }
        out.mecs.push_back(std::move(mec));
    }
    return out;
}

std::vector<bool> attractor(const GameArena& arena, const std::vector<bool>& target,
                            Player player) {
    const Mdp& m = arena.mdp;
    int n = m.state_count();
    // Reverse adjacency over (state, action position) pairs.
    std::vector<std::vector<std::pair<int, int>>> rev(n);
    std::vector<std::vector<int>> counter(n);
    for (int s = 0; s < n; ++s) {
        counter[s].resize(m.enabled(s).size());
        for (size_t ai = 0; ai < m.enabled(s).size(); ++ai) {
            const auto& support = m.dist(s, m.enabled(s)[ai]).support;
            // Controller: countdown of successors still outside. Adversary:
            // 1 until some successor is inside.
            counter[s][ai] = player == Player::Controller
                                 ? static_cast<int>(support.size())
                                 : 1;
            for (const auto& [t, _] : support) rev[t].emplace_back(s, static_cast<int>(ai));
        }
    }
    std::vector<int> pending(n);
    for (int s = 0; s < n; ++s)
        pending[s] = player == Player::Controller ? 1 : static_cast<int>(m.enabled(s).size());

    std::vector<bool> in(n, false);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (target[s]) {
            in[s] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (auto [s, ai] : rev[t]) {
            if (in[s] || counter[s][ai] == 0) continue;
            if (--counter[s][ai] == 0) {
                if (--pending[s] <= 0 && !in[s]) {
                    in[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
    return in;
}

Prob01 prob01_reach(const Mdp& m, const std::vector<bool>& target) {
    int n = m.state_count();
    Prob01 out;
    out.prob0.assign(n, false);
    out.prob1.assign(n, false);
    out.prob1_action.assign(n, -1);

    // prob0: complement of backward reachability from the target.
    std::vector<std::vector<int>> rev(n);
    for (int s = 0; s < n; ++s)
        for (int a : m.enabled(s))
            for (const auto& [t, _] : m.dist(s, a).support) rev[t].push_back(s);
    std::vector<bool> positive(n, false);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (target[s]) {
            positive[s] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int s : rev[t])
            if (!positive[s]) {
                positive[s] = true;
                queue.push_back(s);
            }
    }
    for (int s = 0; s < n; ++s) out.prob0[s] = !positive[s];

    // prob1: greatest fixpoint over an inner least fixpoint. The inner pass
    // grows level sets from the target using only actions whose full support
    // stays in the current outer set; on the final pass the insertion levels
    // yield an almost-sure witness scheduler.
    std::vector<bool> outer(n, true);
    std::vector<bool> inner(n, false);
    std::vector<int> entry_action(n, -1);
    while (true) {
        std::fill(inner.begin(), inner.end(), false);
        std::fill(entry_action.begin(), entry_action.end(), -1);
        for (int s = 0; s < n; ++s) inner[s] = target[s];
        bool grown = true;
        while (grown) {
            grown = false;
            for (int s = 0; s < n; ++s) {
                if (inner[s]) continue;
                for (int a : m.enabled(s)) {
                    bool stays = true, hits = false;
                    for (const auto& [t, _] : m.dist(s, a).support) {
                        if (!outer[t]) stays = false;
                        if (inner[t]) hits = true;
                    }
                    if (stays && hits) {
                        inner[s] = true;
                        entry_action[s] = a;
                        grown = true;
                        break;
                    }
                }
            }
        }
        if (inner == outer) break;
        outer = inner;
    }
    out.prob1 = outer;
    for (int s = 0; s < n; ++s)
        if (outer[s] && !target[s]) out.prob1_action[s] = entry_action[s];
    return out;
}

}  // namespace winmdp

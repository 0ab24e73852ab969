#include "winmdp/unfolding.hpp"

#include <cassert>
#include <deque>
#include <unordered_map>

namespace winmdp {

namespace {

struct ConfigSpace {
    const Mdp& m;
    LabelKind kind;
    int lambda;
    long long vmin, vmax;  // counter range: [-lambda*W, 0] or [0, d]

    std::unordered_map<uint64_t, int> ids;
    std::vector<int> back;
    std::vector<std::array<long long, 2>> tag;

    uint64_t key(int s, int l, long long v) const {
        uint64_t span = static_cast<uint64_t>(vmax - vmin + 1);
        return (static_cast<uint64_t>(s) * static_cast<uint64_t>(lambda + 1) +
                static_cast<uint64_t>(l)) *
                   span +
               static_cast<uint64_t>(v - vmin);
    }

    int intern(int s, int l, long long v) {
        assert(v >= vmin && v <= vmax && l >= 0 && l <= lambda);
        auto [it, fresh] = ids.emplace(key(s, l, v), static_cast<int>(back.size()));
        if (fresh) {
            back.push_back(s);
            tag.push_back({static_cast<long long>(l), v});
        }
        return it->second;
    }
};

}  // namespace

UnfoldedMdp unfold(const Mdp& m, int lambda, LabelKind kind) {
    if (kind != m.kind())
        throw ModelError(ModelErrorCode::SyntaxError, "unfolding kind does not match the model");
    if (lambda < 1)
        throw ModelError(ModelErrorCode::SyntaxError, "window size must be at least 1");

    bool mp = kind == LabelKind::MeanPayoff;
    long long w_max = mp ? m.max_abs_weight() : 0;
    ConfigSpace cs{m,
                   kind,
                   lambda,
                   mp ? -static_cast<long long>(lambda) * w_max : 0,
                   mp ? 0 : m.max_priority()};

    UnfoldedMdp u;
    u.kind = kind;
    u.lambda = lambda;
    u.initial.resize(m.state_count());

    // Successor config of (s, l, v) via action a into t; deterministic.
    auto step = [&](int l, long long v, int a, int t) -> std::pair<int, long long> {
        if (mp) {
            if (l == lambda) return {0, 0};  // failed window, fresh start
            long long z = v + m.weight(a);
            if (z >= 0) return {0, 0};  // window closed
            return {l + 1, z};
        }
        if (v % 2 == 0) return {0, m.priority(t)};  // closed, fresh window at t
        if (l == lambda - 1) return {0, m.priority(t)};  // failed window
        return {l + 1, std::min(v, static_cast<long long>(m.priority(t)))};
    };

    std::deque<int> queue;
    for (int s = 0; s < m.state_count(); ++s) {
        int c = cs.intern(s, 0, mp ? 0 : m.priority(s));
        u.initial[s] = c;
        if (static_cast<size_t>(c) == cs.back.size() - 1) queue.push_back(c);
    }
    // Transition rows are built per config in discovery order.
    std::vector<std::vector<std::pair<int, Distribution>>> rows;
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        int s = cs.back[c];
        int l = static_cast<int>(cs.tag[c][0]);
        long long v = cs.tag[c][1];
        if (static_cast<int>(rows.size()) <= c) rows.resize(c + 1);
        for (int a : m.enabled(s)) {
            Distribution dist;
            for (const auto& [t, p] : m.dist(s, a).support) {
                auto [nl, nv] = step(l, v, a, t);
                size_t before = cs.back.size();
                int nc = cs.intern(t, nl, nv);
                if (cs.back.size() > before) queue.push_back(nc);
                dist.support.emplace_back(nc, p);
            }
            // Distinct successors of the base action can map to the same
            // config only if they were distinct original states, so config
            // indices here are distinct; sort for the model invariant.
            std::sort(dist.support.begin(), dist.support.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            rows[c].emplace_back(a, std::move(dist));
        }
    }
    rows.resize(cs.back.size());

    std::vector<std::string> names(cs.back.size());
    std::vector<int> priorities(cs.back.size(), -1);
    for (size_t c = 0; c < cs.back.size(); ++c) {
        names[c] = m.state_name(cs.back[c]) + "[" + std::to_string(cs.tag[c][0]) + "," +
                   std::to_string(cs.tag[c][1]) + "]";
        if (!mp) priorities[c] = m.priority(cs.back[c]);
    }
    std::vector<std::string> action_names;
    std::vector<long long> weights;
    for (int a = 0; a < m.action_count(); ++a) {
        action_names.push_back(m.action_name(a));
        weights.push_back(m.weight(a));
    }
    u.mdp = assemble_mdp(kind, std::move(names), std::move(priorities),
                         std::move(action_names), std::move(weights), std::move(rows));
    u.back = std::move(cs.back);
    u.tag = std::move(cs.tag);

    u.bad.assign(u.back.size(), false);
    for (size_t c = 0; c < u.back.size(); ++c) {
        int l = static_cast<int>(u.tag[c][0]);
        long long v = u.tag[c][1];
        u.bad[c] = mp ? l == lambda : (l == lambda - 1 && v % 2 != 0);
    }
    return u;
}

MealyStrategy lift_strategy(const UnfoldedMdp& u, const std::vector<int>& config_action) {
    int configs = u.mdp.state_count();
    if (static_cast<int>(config_action.size()) != configs)
        throw PartialStrategy("config action table size mismatch");

    MealyStrategy out;
    for (int c = 0; c < configs; ++c) out.add_memory(u.mdp.state_name(c));
    for (int s = 0; s < static_cast<int>(u.initial.size()); ++s)
        out.set_initial(s, u.initial[s]);
    for (int c = 0; c < configs; ++c) {
        if (config_action[c] < 0 || !u.mdp.has_action(c, config_action[c]))
            throw PartialStrategy("config " + u.mdp.state_name(c) + " has no chosen action");
        out.set_action(u.back[c], c, config_action[c]);
        // The memory tracks the config exactly: any played action on any
        // entered state has a unique successor config.
        for (int a : u.mdp.enabled(c))
            for (const auto& [nc, _] : u.mdp.dist(c, a).support)
                out.set_update(a, u.back[nc], c, nc);
    }
    return out;
}

Mdp make_absorbing(const Mdp& m, const std::vector<bool>& states) {
    bool mp = m.kind() == LabelKind::MeanPayoff;
    std::vector<std::string> names;
    std::vector<int> priorities;
    std::vector<std::string> action_names;
    std::vector<long long> weights;
    for (int s = 0; s < m.state_count(); ++s) {
        names.push_back(m.state_name(s));
        priorities.push_back(mp ? -1 : m.priority(s));
    }
    for (int a = 0; a < m.action_count(); ++a) {
        action_names.push_back(m.action_name(a));
        weights.push_back(m.weight(a));
    }
    std::vector<std::vector<std::pair<int, Distribution>>> rows(m.state_count());
    for (int s = 0; s < m.state_count(); ++s) {
        if (states[s]) {
            Distribution self;
            self.support.emplace_back(s, Rational(1));
            rows[s].emplace_back(m.enabled(s)[0], std::move(self));
            continue;
        }
        for (int a : m.enabled(s)) rows[s].emplace_back(a, m.dist(s, a));
    }
    return assemble_mdp(m.kind(), std::move(names), std::move(priorities),
                        std::move(action_names), std::move(weights), std::move(rows));
}

}  // namespace winmdp

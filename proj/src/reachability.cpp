#include "winmdp/reachability.hpp"

#include <deque>
#include <limits>

#include "winmdp/linalg.hpp"

namespace winmdp {

ReachResult max_reachability(const Mdp& m, const std::vector<bool>& target) {
    int n = m.state_count();
    Prob01 p01 = prob01_reach(m, target);

    ReachResult out;
    out.values.assign(n, Rational(0));
    out.strategy.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (p01.prob1[s]) out.values[s] = 1;
        if (p01.prob1[s] && !target[s]) out.strategy[s] = p01.prob1_action[s];
    }

    std::vector<int> uncertain;
    std::vector<int> local(n, -1);
    for (int s = 0; s < n; ++s)
        if (!p01.prob0[s] && !p01.prob1[s]) {
            local[s] = static_cast<int>(uncertain.size());
            uncertain.push_back(s);
        }
    if (uncertain.empty()) return out;

    // BFS distance to any decided state over the support graph; the initial
    // policy picks, per state, the smallest action with a strictly closer
    // successor. Such a policy is proper: no recurrent class stays uncertain.
    std::vector<std::vector<int>> rev(n);
    for (int s : uncertain)
        for (int a : m.enabled(s))
            for (const auto& [t, _] : m.dist(s, a).support) rev[t].push_back(s);
    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(n, kInf);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (local[s] == -1) {
            dist[s] = 0;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int s : rev[t])
            if (dist[s] == kInf) {
                dist[s] = dist[t] + 1;
                queue.push_back(s);
            }
    }

    std::vector<int> policy(uncertain.size(), -1);
    for (size_t i = 0; i < uncertain.size(); ++i) {
        int s = uncertain[i];
        for (int a : m.enabled(s)) {
            bool closer = false;
            for (const auto& [t, _] : m.dist(s, a).support)
                if (dist[t] < dist[s]) closer = true;
            if (closer) {
                policy[i] = a;
                break;
            }
        }
        // dist[s] is finite: every state reaches a decided state (states that
        // cannot reach the target at all are prob0, hence decided).
    }

    auto known_value = [&](int t) -> const Rational* {
        static const Rational one(1), zero(0);
        if (local[t] != -1) return nullptr;
        return p01.prob1[t] ? &one : &zero;
    };

    std::vector<Rational> x;
    while (true) {
        // Exact evaluation of the current policy.
        std::vector<SparseRow> rows(uncertain.size());
        std::vector<Rational> c(uncertain.size(), Rational(0));
        for (size_t i = 0; i < uncertain.size(); ++i) {
            int s = uncertain[i];
            for (const auto& [t, p] : m.dist(s, policy[i]).support) {
                if (const Rational* v = known_value(t))
                    c[i] += p * (*v);
                else
                    rows[i].emplace_back(local[t], p);
            }
        }
        x = solve_markov_system(rows, c);

        // Strict improvement, smallest improving action index.
        bool changed = false;
        for (size_t i = 0; i < uncertain.size(); ++i) {
            int s = uncertain[i];
            for (int a : m.enabled(s)) {
                if (a == policy[i]) continue;
                Rational q(0);
                for (const auto& [t, p] : m.dist(s, a).support) {
                    if (const Rational* v = known_value(t))
                        q += p * (*v);
                    else
                        q += p * x[local[t]];
                }
                if (q > x[i]) {
                    policy[i] = a;
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }

    for (size_t i = 0; i < uncertain.size(); ++i) {
        out.values[uncertain[i]] = x[i];
        out.strategy[uncertain[i]] = policy[i];
    }
    return out;
}

}  // namespace winmdp

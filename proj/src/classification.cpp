#include "winmdp/classification.hpp"

#include <algorithm>

#include "winmdp/graph.hpp"
#include "winmdp/reachability.hpp"

namespace winmdp {

namespace {

void check_is_ec(const Mdp& ec) {
    // Closed by construction (an Mdp has no dangling successors); what needs
    // checking is strong connectivity under all enabled actions.
    std::vector<std::vector<int>> active(ec.state_count());
    for (int s = 0; s < ec.state_count(); ++s) active[s] = ec.enabled(s);
    int comps = 0;
    scc_ids(ec, active, &comps);
    if (comps != 1)
        throw NotAnEndComponent("state set is not strongly connected under its actions");
}

// Memoryless safe choices on the unfolding: outside the adversary attractor
// pick the smallest action whose full support stays outside; elsewhere any
// enabled action (smallest) keeps the strategy total.
std::vector<int> safe_config_actions(const UnfoldedMdp& u, const std::vector<bool>& attr) {
    std::vector<int> choice(u.mdp.state_count(), -1);
    for (int c = 0; c < u.mdp.state_count(); ++c) {
        if (!attr[c]) {
            for (int a : u.mdp.enabled(c)) {
                bool safe = true;
                for (const auto& [t, _] : u.mdp.dist(c, a).support)
                    if (attr[t]) safe = false;
                if (safe) {
                    choice[c] = a;
                    break;
                }
            }
            // The attractor fixpoint guarantees a fully safe action here.
        }
        if (choice[c] == -1) choice[c] = u.mdp.enabled(c)[0];
    }
    return choice;
}

}  // namespace

SafeRegion lambda_safe_region(const Mdp& ec, LabelKind kind, int lambda) {
    check_is_ec(ec);
    UnfoldedMdp u = unfold(ec, lambda, kind);
    std::vector<bool> attr = attractor({u.mdp}, u.bad, Player::Adversary);

    SafeRegion out;
    out.region.resize(ec.state_count());
    for (int s = 0; s < ec.state_count(); ++s) out.region[s] = !attr[u.initial[s]];
    out.strategy = lift_strategy(u, safe_config_actions(u, attr));
    return out;
}

EcStatus classify_fixed(const Mdp& ec, LabelKind kind, int lambda) {
    SafeRegion safe = lambda_safe_region(ec, kind, lambda);
    EcStatus out;
    out.kind = kind;
    bool any = std::find(safe.region.begin(), safe.region.end(), true) != safe.region.end();
    if (!any) {
        out.cls = EcClass::NotGood;
        return out;
    }
    out.cls = EcClass::Good;
    out.lambda_star = lambda;
    out.region = std::move(safe.region);
    out.safe_strategy = std::move(safe.strategy);
    return out;
}

long long default_bounded_cap(const Mdp& ec, LabelKind kind) {
    long long n = ec.state_count();
    if (kind == LabelKind::Parity) return 2 * n + 2;
    return n * n * std::max<long long>(ec.max_abs_weight(), 1);
}

EcStatus classify_bounded(const Mdp& ec, LabelKind kind, std::optional<long long> cap_opt) {
    long long cap = cap_opt.value_or(default_bounded_cap(ec, kind));
    if (cap < 1) cap = 1;

    // Larger windows only help: the safe region grows with lambda, so
    // goodness is monotone and doubling plus binary search finds the minimal
    // witness.
    long long good_lambda = -1, last_bad = 0;
    for (long long probe = 1;; probe *= 2) {
        if (probe > cap) probe = cap;
        EcStatus status = classify_fixed(ec, kind, static_cast<int>(probe));
        if (status.cls == EcClass::Good) {
            good_lambda = probe;
            break;
        }
        last_bad = probe;
        if (probe == cap) break;
    }

    EcStatus out;
    out.kind = kind;
    out.cap = cap;
    if (good_lambda == -1) {
        bool certain =
            kind == LabelKind::Parity && cap >= 2 * static_cast<long long>(ec.state_count()) + 2;
        out.cls = certain ? EcClass::NotGood : EcClass::NotGoodWithinCap;
        return out;
    }

    long long lo = last_bad + 1, hi = good_lambda;
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        EcStatus status = classify_fixed(ec, kind, static_cast<int>(mid));
        if (status.cls == EcClass::Good)
            hi = mid;
        else
            lo = mid + 1;
    }
    out = classify_fixed(ec, kind, static_cast<int>(lo));
    out.cap = cap;
    return out;
}

MealyStrategy build_good_strategy(const Mdp& ec, const EcStatus& status) {
    if (status.cls != EcClass::Good)
        throw NotAnEndComponent("good strategy requested for a component that is not good");

    std::vector<bool> target(status.region.begin(), status.region.end());
    ReachResult reach = max_reachability(ec, target);
    for (int s = 0; s < ec.state_count(); ++s)
        if (reach.values[s] != 1)
            throw NotAnEndComponent("safe region not almost surely reachable inside the EC");

    const MealyStrategy& safe = status.safe_strategy;
    MealyStrategy out;
    int reach_mem = out.add_memory("reach");
    int offset = out.memory_count();
    for (int q = 0; q < safe.memory_count(); ++q) out.add_memory(safe.memory_name(q));

    for (int s = 0; s < ec.state_count(); ++s)
        out.set_initial(s, status.region[s] ? offset + safe.initial_memory(s) : reach_mem);

    auto switch_target = [&](int t) {
        return status.region[t] ? offset + safe.initial_memory(t) : reach_mem;
    };
    for (int s = 0; s < ec.state_count(); ++s) {
        int a = reach.strategy[s];
        if (a < 0) a = ec.enabled(s)[0];
        out.set_action(s, reach_mem, a);
        for (const auto& [t, _] : ec.dist(s, a).support)
            out.set_update(a, t, reach_mem, switch_target(t));
    }
    for (const auto& e : safe.action_entries())
        out.set_action(e.state, offset + e.memory, e.action);
    for (const auto& e : safe.update_entries())
        out.set_update(e.action, e.state, offset + e.memory, offset + e.to);
    return out;
}

}  // namespace winmdp

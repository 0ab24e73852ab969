#include "winmdp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "winmdp/graph.hpp"
#include "winmdp/reachability.hpp"
#include "winmdp/unfolding.hpp"

namespace winmdp {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::DFW: return "dfw";
        case Variant::FW: return "fw";
        default: return "bw";
    }
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::Yes: return "yes";
        case Decision::No: return "no";
        default: return "inconclusive";
    }
}

namespace {

int worker_budget() {
    if (const char* env = std::getenv("WINMDP_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(0..count-1) with bounded fan-out, collecting results in index order.
template <typename F>
auto run_indexed(int count, F&& f) {
    using R = decltype(f(0));
    std::vector<R> out(count);
    int budget = std::min(worker_budget(), count);
    if (budget <= 1) {
        for (int i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) out[i] = f(i);
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < budget; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

struct ClassifiedMec {
    Mec mec;
    Mdp sub;
    EcStatus status;
};

Verdict assemble_prefix_independent(const Mdp& m, LabelKind kind, WindowSpec spec,
                                    std::vector<ClassifiedMec> classified) {
    Verdict v;
    v.kind = kind;
    v.spec = spec;

    std::vector<bool> target(m.state_count(), false);
    for (const auto& cm : classified) {
        MecVerdict report;
        report.states = cm.mec.states;
        report.cls = cm.status.cls;
        report.lambda_star = cm.status.lambda_star;
        report.cap = cm.status.cap;
        if (cm.status.cls == EcClass::Good) {
            for (size_t i = 0; i < cm.mec.states.size(); ++i) {
                target[cm.mec.states[i]] = true;
                if (cm.status.region[i]) report.region.push_back(cm.mec.states[i]);
            }
        }
        if (cm.status.cls == EcClass::NotGoodWithinCap) v.confidence = Confidence::BoundedByCap;
        v.mecs.push_back(std::move(report));
    }

    ReachResult reach = max_reachability(m, target);
    v.values = reach.values;

    // Phase memory: one reach cell, then one block per good MEC whose cells
    // are the composed (reach safe region, then play safe) strategy of that
    // MEC translated to parent state indices.
    MealyStrategy& out = v.strategy;
    int reach_mem = out.add_memory("reach");
    std::vector<int> block(classified.size(), -1);
    std::vector<int> mec_of_state(m.state_count(), -1);
    std::vector<int> local_of_state(m.state_count(), -1);
    std::vector<MealyStrategy> good;
    good.reserve(classified.size());
    for (size_t k = 0; k < classified.size(); ++k) {
        const auto& cm = classified[k];
        if (cm.status.cls != EcClass::Good) {
            good.emplace_back();
            continue;
        }
        MealyStrategy g = build_good_strategy(cm.sub, cm.status);
        block[k] = out.memory_count();
        std::string prefix = "mec" + std::to_string(k) + ":";
        for (int q = 0; q < g.memory_count(); ++q) out.add_memory(prefix + g.memory_name(q));
        for (size_t i = 0; i < cm.mec.states.size(); ++i) {
            mec_of_state[cm.mec.states[i]] = static_cast<int>(k);
            local_of_state[cm.mec.states[i]] = static_cast<int>(i);
        }
        good.push_back(std::move(g));
    }

    auto entry_memory = [&](int t) {
        int k = mec_of_state[t];
        if (k == -1) return reach_mem;
        return block[k] + good[k].initial_memory(local_of_state[t]);
    };

    for (int s = 0; s < m.state_count(); ++s) out.set_initial(s, entry_memory(s));
    for (int s = 0; s < m.state_count(); ++s) {
        int a = reach.strategy[s];
        if (a < 0) a = m.enabled(s)[0];
        out.set_action(s, reach_mem, a);
        for (const auto& [t, _] : m.dist(s, a).support)
            out.set_update(a, t, reach_mem, entry_memory(t));
    }
    for (size_t k = 0; k < classified.size(); ++k) {
        if (block[k] == -1) continue;
        const auto& states = classified[k].mec.states;
        for (const auto& e : good[k].action_entries())
            out.set_action(states[e.state], block[k] + e.memory, e.action);
        for (const auto& e : good[k].update_entries())
            out.set_update(e.action, states[e.state], block[k] + e.memory, block[k] + e.to);
    }
    return v;
}

}  // namespace

Verdict solve_dfw(const Mdp& m, int lambda) {
    UnfoldedMdp u = unfold(m, lambda, m.kind());
    std::vector<bool> attr = attractor({u.mdp}, u.bad, Player::Adversary);

    Mdp frozen = make_absorbing(u.mdp, u.bad);
    std::vector<bool> surely_safe(u.mdp.state_count());
    for (int c = 0; c < u.mdp.state_count(); ++c) surely_safe[c] = !attr[c];
    ReachResult reach = max_reachability(frozen, surely_safe);

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
        } else if (!u.bad[c] && reach.strategy[c] >= 0) {
            choice[c] = reach.strategy[c];
        }
        if (choice[c] == -1) choice[c] = u.mdp.enabled(c)[0];
    }

    Verdict v;
    v.kind = m.kind();
    v.spec = {Variant::DFW, lambda};
    v.values.reserve(m.state_count());
    for (int s = 0; s < m.state_count(); ++s) v.values.push_back(reach.values[u.initial[s]]);
    v.strategy = lift_strategy(u, choice);
    return v;
}

Verdict solve_fw(const Mdp& m, int lambda) {
    MecDecomposition dec = mec_decomposition(m);
    auto classified = run_indexed(static_cast<int>(dec.mecs.size()), [&](int k) {
        ClassifiedMec cm;
        cm.mec = dec.mecs[k];
        cm.sub = restrict(m, cm.mec.states, cm.mec.actions);
        cm.status = classify_fixed(cm.sub, m.kind(), lambda);
        return cm;
    });
    return assemble_prefix_independent(m, m.kind(), {Variant::FW, lambda},
                                       std::move(classified));
}

Verdict solve_bw(const Mdp& m, std::optional<long long> cap) {
    MecDecomposition dec = mec_decomposition(m);
    auto classified = run_indexed(static_cast<int>(dec.mecs.size()), [&](int k) {
        ClassifiedMec cm;
        cm.mec = dec.mecs[k];
        cm.sub = restrict(m, cm.mec.states, cm.mec.actions);
        cm.status = classify_bounded(cm.sub, m.kind(), cap);
        return cm;
    });
    return assemble_prefix_independent(m, m.kind(), {Variant::BW, std::nullopt},
                                       std::move(classified));
}

Verdict solve(const Mdp& m, const WindowSpec& spec, std::optional<long long> cap) {
    switch (spec.variant) {
        case Variant::DFW: return solve_dfw(m, spec.lambda.value());
        case Variant::FW: return solve_fw(m, spec.lambda.value());
        default: return solve_bw(m, cap);
    }
}

Decision decide_threshold(const Verdict& v, int state, const Rational& alpha) {
    if (v.values[state] >= alpha) return Decision::Yes;
    if (v.confidence == Confidence::BoundedByCap) return Decision::Inconclusive;
    return Decision::No;
}

}  // namespace winmdp

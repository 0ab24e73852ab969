#include "winmdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "winmdp/classification.hpp"
#include "winmdp/linalg.hpp"
#include "winmdp/unfolding.hpp"

namespace winmdp {

namespace {

// A finite Markov chain with per-node payload used by the evaluators.
struct Chain {
    std::vector<SparseRow> rows;
    std::vector<int> base;    // node -> base state (config or original state)
    std::vector<bool> bad;    // node carries a failed window marker
};

// P[reach target] per node, exact. Nodes that cannot reach the target get 0;
// target nodes 1; the rest solve x = Px + c on the reaching fragment.
std::vector<Rational> chain_reach(const std::vector<SparseRow>& rows,
                                  const std::vector<bool>& target) {
    int n = static_cast<int>(rows.size());
    std::vector<std::vector<int>> rev(n);
    for (int v = 0; v < n; ++v)
        for (const auto& [t, _] : rows[v]) rev[t].push_back(v);
    std::vector<bool> reaches(n, false);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (target[v]) {
            reaches[v] = true;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int v : rev[t])
            if (!reaches[v]) {
                reaches[v] = true;
                queue.push_back(v);
            }
    }

    std::vector<int> local(n, -1);
    std::vector<int> unknowns;
    for (int v = 0; v < n; ++v)
        if (reaches[v] && !target[v]) {
            local[v] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    std::vector<SparseRow> p(unknowns.size());
    std::vector<Rational> c(unknowns.size(), Rational(0));
    for (size_t i = 0; i < unknowns.size(); ++i) {
        for (const auto& [t, prob] : rows[unknowns[i]]) {
            if (target[t])
                c[i] += prob;
            else if (local[t] != -1)
                p[i].emplace_back(local[t], prob);
        }
    }
    std::vector<Rational> x = solve_markov_system(p, c);
    std::vector<Rational> out(n, Rational(0));
    for (int v = 0; v < n; ++v) {
        if (target[v])
            out[v] = 1;
        else if (local[v] != -1)
            out[v] = x[local[v]];
    }
    return out;
}

// SCC ids for chain support edges plus a bottom flag per component.
std::vector<int> chain_sccs(const std::vector<SparseRow>& rows, std::vector<bool>& bottom) {
    int n = static_cast<int>(rows.size());
    std::vector<int> index(n, -1), low(n), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int next_index = 0, next_comp = 0;
    struct Frame {
        int v;
        size_t ei;
    };
    std::vector<Frame> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            int v = f.v;
            bool descended = false;
            while (f.ei < rows[v].size()) {
                int w = rows[v][f.ei++].first;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != v);
                ++next_comp;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    bottom.assign(next_comp, true);
    for (int v = 0; v < n; ++v)
        for (const auto& [t, _] : rows[v])
            if (comp[t] != comp[v]) bottom[comp[v]] = false;
    return comp;
}

// Does some window opened inside this chain fragment stay open forever with
// positive probability? Exact, cap free: walk the open-window graph over
// (node, running weight sum) resp. (node, running minimal priority). A lasso
// of open nodes, or a mean-payoff sum falling below -|C|*W (which forces a
// reachable negative cycle), certifies a never-closing window.
bool fragment_window_bad(const Chain& chain, const std::vector<int>& nodes, const Mdp& m,
                         const std::vector<int>& weight_of_node) {
    bool mp = m.kind() == LabelKind::MeanPayoff;
    long long w_max = mp ? m.max_abs_weight() : 0;
    long long cut = static_cast<long long>(nodes.size()) * std::max<long long>(w_max, 1);

    // Open-window nodes keyed by (node, value).
    long long vmin = mp ? -cut : 0;
    long long vmax = mp ? -1 : m.max_priority();
    uint64_t span = static_cast<uint64_t>(vmax - vmin + 1);
    std::unordered_map<uint64_t, int> ids;
    std::vector<std::pair<int, long long>> open;
    auto intern = [&](int v, long long val) {
        uint64_t key = static_cast<uint64_t>(v) * span + static_cast<uint64_t>(val - vmin);
        auto [it, fresh] = ids.emplace(key, static_cast<int>(open.size()));
        if (fresh) open.emplace_back(v, val);
        return std::make_pair(it->second, fresh);
    };

    std::vector<std::vector<int>> adj;
    std::deque<int> queue;
    bool deep = false;
    auto push_edge = [&](int from, int v, long long val) {
        auto [id, fresh] = intern(v, val);
        if (fresh) {
            adj.emplace_back();
            queue.push_back(id);
        }
        if (from >= 0) adj[from].push_back(id);
    };

    // Every position in the fragment anchors a window. Expand the first step
    // of each anchor, then saturate.
    for (int v : nodes) {
        if (mp) {
            long long w = weight_of_node[v];
            for (const auto& [t, _] : chain.rows[v]) {
                if (w >= 0) continue;  // closed at the anchor's first step
                if (w <= -cut - 1) {
                    deep = true;
                    continue;
                }
                push_edge(-1, t, w);
            }
        } else {
            long long c0 = m.priority(chain.base[v]);
            if (c0 % 2 == 0) continue;  // closed immediately
            push_edge(-1, v, c0);
        }
    }
    while (!queue.empty() && !deep) {
        int id = queue.front();
        queue.pop_front();
        auto [v, val] = open[id];
        if (mp) {
            long long w = weight_of_node[v];
            for (const auto& [t, _] : chain.rows[v]) {
                long long nv = val + w;
                if (nv >= 0) continue;
                if (nv <= -cut - 1) {
                    deep = true;
                    break;
                }
                push_edge(id, t, nv);
            }
        } else {
            for (const auto& [t, _] : chain.rows[v]) {
                long long nv = std::min(val, static_cast<long long>(m.priority(chain.base[t])));
                if (nv % 2 == 0) continue;
                push_edge(id, t, nv);
            }
        }
    }
    if (deep) return true;

    // Any cycle among open nodes means some window never closes. Iterative
    // three-color DFS.
    std::vector<int> color(open.size(), 0);
    std::vector<std::pair<int, size_t>> stack;
    for (size_t root = 0; root < open.size(); ++root) {
        if (color[root] != 0) continue;
        stack.emplace_back(static_cast<int>(root), 0);
        color[root] = 1;
        while (!stack.empty()) {
            auto& [v, ei] = stack.back();
            if (ei < adj[v].size()) {
                int t = adj[v][ei++];
                if (color[t] == 1) return true;
                if (color[t] == 0) {
                    color[t] = 1;
                    stack.emplace_back(t, 0);
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

// Mean-payoff open-window walk in parity models never mixes: dispatch helper
// classifying every bottom SCC of the chain as winning or losing for BW.
std::vector<bool> bw_good_nodes(const Chain& chain, const Mdp& m,
                                const std::vector<int>& weight_of_node) {
    std::vector<bool> bottom;
    std::vector<int> comp = chain_sccs(chain.rows, bottom);
    std::vector<std::vector<int>> members(bottom.size());
    for (int v = 0; v < static_cast<int>(chain.rows.size()); ++v)
        members[comp[v]].push_back(v);

    std::vector<bool> good(chain.rows.size(), false);
    for (size_t cid = 0; cid < bottom.size(); ++cid) {
        if (!bottom[cid]) continue;
        // Restrict the chain to this BSCC (it is closed, so rows are safe).
        if (!fragment_window_bad(chain, members[cid], m, weight_of_node))
            for (int v : members[cid]) good[v] = true;
    }
    return good;
}

struct Product {
    Chain chain;
    std::vector<int> memory_of_node;
    std::vector<int> start;  // original state -> node, -1 when undefined
    std::vector<int> action_of_node;
};

// Product of a base MDP (original or unfolding) with the strategy. base_of
// maps a base-MDP state to the original state the strategy observes.
Product build_product(const Mdp& base, const std::vector<int>& base_of,
                      const MealyStrategy& sigma, const std::vector<int>& entry_points) {
    Product prod;
    std::unordered_map<uint64_t, int> ids;
    auto intern = [&](int c, int q) {
        uint64_t key = (static_cast<uint64_t>(q) << 28) | static_cast<uint64_t>(c);
        auto [it, fresh] = ids.emplace(key, static_cast<int>(prod.chain.base.size()));
        if (fresh) {
            prod.chain.base.push_back(c);
            prod.memory_of_node.push_back(q);
        }
        return std::make_pair(it->second, fresh);
    };

    std::deque<int> queue;
    prod.start.assign(entry_points.size(), -1);
    for (size_t s = 0; s < entry_points.size(); ++s) {
        if (!sigma.has_initial(static_cast<int>(s))) continue;
        auto [node, fresh] = intern(entry_points[s], sigma.initial_memory(static_cast<int>(s)));
        prod.start[s] = node;
        if (fresh) queue.push_back(node);
    }
    while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        int c = prod.chain.base[node];
        int q = prod.memory_of_node[node];
        int a = sigma.next_action(base_of[c], q);
        if (!base.has_action(c, a))
            throw PartialStrategy("strategy picks disabled action '" + base.action_name(a) +
                                  "' at state '" + base.state_name(c) + "'");
        if (static_cast<int>(prod.chain.rows.size()) <= node) {
            prod.chain.rows.resize(node + 1);
            prod.action_of_node.resize(node + 1, -1);
        }
        prod.action_of_node[node] = a;
        for (const auto& [t, p] : base.dist(c, a).support) {
            int nq = sigma.update(a, base_of[t], q);
            auto [next, fresh] = intern(t, nq);
            if (fresh) queue.push_back(next);
            prod.chain.rows[node].emplace_back(next, p);
        }
    }
    prod.chain.rows.resize(prod.chain.base.size());
    prod.action_of_node.resize(prod.chain.base.size(), -1);
    return prod;
}

std::vector<Rational> eval_unfolding_product(const Mdp& m, const MealyStrategy& sigma,
                                             const WindowSpec& spec) {
    UnfoldedMdp u = unfold(m, spec.lambda.value(), m.kind());
    Product prod = build_product(u.mdp, u.back, sigma, u.initial);
    prod.chain.bad.assign(prod.chain.base.size(), false);
    for (size_t v = 0; v < prod.chain.base.size(); ++v)
        prod.chain.bad[v] = u.bad[prod.chain.base[v]];

    std::vector<Rational> node_value;
    if (spec.variant == Variant::DFW) {
        std::vector<Rational> hit = chain_reach(prod.chain.rows, prod.chain.bad);
        node_value.resize(hit.size());
        for (size_t v = 0; v < hit.size(); ++v) node_value[v] = 1 - hit[v];
    } else {
        // FW holds almost surely in a bottom SCC without bad configs and
        // almost never in one with them.
        std::vector<bool> bottom;
        std::vector<int> comp = chain_sccs(prod.chain.rows, bottom);
        std::vector<bool> comp_bad(bottom.size(), false);
        for (size_t v = 0; v < prod.chain.base.size(); ++v)
            if (prod.chain.bad[v]) comp_bad[comp[v]] = true;
        std::vector<bool> target(prod.chain.base.size(), false);
        for (size_t v = 0; v < prod.chain.base.size(); ++v)
            target[v] = bottom[comp[v]] && !comp_bad[comp[v]];
        node_value = chain_reach(prod.chain.rows, target);
    }

    std::vector<Rational> out(m.state_count(), Rational(0));
    for (int s = 0; s < m.state_count(); ++s)
        if (prod.start[s] != -1) out[s] = node_value[prod.start[s]];
    return out;
}

std::vector<Rational> eval_bw_product(const Mdp& m, const MealyStrategy& sigma) {
    std::vector<int> identity(m.state_count());
    for (int s = 0; s < m.state_count(); ++s) identity[s] = s;
    Product prod = build_product(m, identity, sigma, identity);

    std::vector<int> weight_of_node(prod.chain.base.size(), 0);
    if (m.kind() == LabelKind::MeanPayoff)
        for (size_t v = 0; v < prod.chain.base.size(); ++v)
            weight_of_node[v] = static_cast<int>(m.weight(prod.action_of_node[v]));

    std::vector<bool> good = bw_good_nodes(prod.chain, m, weight_of_node);
    std::vector<Rational> node_value = chain_reach(prod.chain.rows, good);
    std::vector<Rational> out(m.state_count(), Rational(0));
    for (int s = 0; s < m.state_count(); ++s)
        if (prod.start[s] != -1) out[s] = node_value[prod.start[s]];
    return out;
}

}  // namespace

std::vector<Rational> eval_strategy_exact_all(const Mdp& m, const MealyStrategy& sigma,
                                              const WindowSpec& spec) {
    if (spec.variant == Variant::BW) return eval_bw_product(m, sigma);
    return eval_unfolding_product(m, sigma, spec);
}

Rational eval_strategy_exact(const Mdp& m, const MealyStrategy& sigma, const WindowSpec& spec,
                             int state) {
    if (!sigma.has_initial(state))
        throw PartialStrategy("strategy has no initial memory for state '" +
                              m.state_name(state) + "'");
    return eval_strategy_exact_all(m, sigma, spec)[state];
}

std::vector<Rational> brute_force_value(const Mdp& m, const WindowSpec& spec, long long guard) {
    if (spec.variant == Variant::BW)
        throw OracleTooLarge("brute force enumeration needs a fixed window size");
    UnfoldedMdp u = unfold(m, spec.lambda.value(), m.kind());
    int configs = u.mdp.state_count();

    long long candidates = 1;
    for (int c = 0; c < configs; ++c) {
        candidates *= static_cast<long long>(u.mdp.enabled(c).size());
        if (candidates > guard)
            throw OracleTooLarge("strategy space exceeds " + std::to_string(guard) +
                                 " candidates");
    }

    std::vector<int> pick(configs, 0);
    std::vector<Rational> best(m.state_count(), Rational(0));
    bool more = true;
    while (more) {
        std::vector<SparseRow> rows(configs);
        for (int c = 0; c < configs; ++c) {
            int a = u.mdp.enabled(c)[pick[c]];
            for (const auto& [t, p] : u.mdp.dist(c, a).support) rows[c].emplace_back(t, p);
        }
        std::vector<Rational> value;
        if (spec.variant == Variant::DFW) {
            std::vector<Rational> hit = chain_reach(rows, u.bad);
            value.resize(hit.size());
            for (size_t v = 0; v < hit.size(); ++v) value[v] = 1 - hit[v];
        } else {
            std::vector<bool> bottom;
            std::vector<int> comp = chain_sccs(rows, bottom);
            std::vector<bool> comp_bad(bottom.size(), false);
            for (int c = 0; c < configs; ++c)
                if (u.bad[c]) comp_bad[comp[c]] = true;
            std::vector<bool> target(configs, false);
            for (int c = 0; c < configs; ++c) target[c] = bottom[comp[c]] && !comp_bad[comp[c]];
            value = chain_reach(rows, target);
        }
        for (int s = 0; s < m.state_count(); ++s)
            best[s] = std::max(best[s], value[u.initial[s]]);

        // Mixed-radix increment over per-config choices.
        more = false;
        for (int c = 0; c < configs; ++c) {
            if (pick[c] + 1 < static_cast<int>(u.mdp.enabled(c).size())) {
                ++pick[c];
                std::fill(pick.begin(), pick.begin() + c, 0);
                more = true;
                break;
            }
        }
    }
    return best;
}

namespace {

// Counter-based generator: every run derives its own stream from (seed, run),
// so sampling is reproducible and order independent.
struct SplitMix64 {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Unbiased uniform draw in [0, bound) by modulo rejection.
uint64_t uniform_below(SplitMix64& rng, uint64_t bound) {
    uint64_t threshold = (-bound) % bound;
    for (;;) {
        uint64_t x = rng.next();
        if (x >= threshold) return x % bound;
    }
}

// Exact categorical sampling: lift the distribution to a common denominator
// and draw an integer below it. Denominators beyond 64 bits fall back to a
// big-integer rejection loop.
struct Sampler {
    const Mdp& m;
    struct Table {
        bool narrow;
        uint64_t total64;
        std::vector<uint64_t> cum64;  // inclusive prefix sums of numerators
        mpz_class total;
        std::vector<mpz_class> cum;
    };
    std::unordered_map<uint64_t, Table> tables;

    explicit Sampler(const Mdp& mdp) : m(mdp) {}

    const Table& table_for(int s, int a) {
        uint64_t key = (static_cast<uint64_t>(s) << 20) | static_cast<uint64_t>(a);
        auto it = tables.find(key);
        if (it != tables.end()) return it->second;
        const auto& support = m.dist(s, a).support;
        mpz_class lcm = 1;
        for (const auto& [t, p] : support) {
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), p.get_den().get_mpz_t());
            lcm = l;
        }
        Table table;
        table.total = lcm;
        mpz_class acc = 0;
        for (const auto& [t, p] : support) {
            acc += p.get_num() * (lcm / p.get_den());
            table.cum.push_back(acc);
        }
        table.narrow = mpz_sizeinbase(lcm.get_mpz_t(), 2) <= 63;
        if (table.narrow) {
            table.total64 = mpz_get_ui(lcm.get_mpz_t());
            for (const auto& c : table.cum)
                table.cum64.push_back(mpz_get_ui(c.get_mpz_t()));
        }
        return tables.emplace(key, std::move(table)).first->second;
    }

    int draw(int s, int a, SplitMix64& rng) {
        const Table& table = table_for(s, a);
        const auto& support = m.dist(s, a).support;
        if (table.narrow) {
            uint64_t u = uniform_below(rng, table.total64);
            for (size_t i = 0; i < table.cum64.size(); ++i)
                if (u < table.cum64[i]) return support[i].first;
        } else {
            size_t bits = mpz_sizeinbase(table.total.get_mpz_t(), 2);
            size_t words = (bits + 63) / 64;
            for (;;) {
                mpz_class u = 0;
                for (size_t k = 0; k < words; ++k) {
                    u <<= 64;
                    u += mpz_class(static_cast<unsigned long>(rng.next()));
                }
                u >>= words * 64 - bits;
                if (u >= table.total) continue;
                for (size_t i = 0; i < table.cum.size(); ++i)
                    if (u < table.cum[i]) return support[i].first;
            }
        }
        return support.back().first;
    }
};

// True when the window anchored at position i of the trace fails to close
// within lambda steps. Assumes i + lambda <= number of actions in the trace.
bool anchor_violated(const Mdp& m, const std::vector<int>& states,
                     const std::vector<int>& actions, int i, int lambda) {
    if (m.kind() == LabelKind::MeanPayoff) {
        long long sum = 0;
        for (int l = 1; l <= lambda; ++l) {
            sum += m.weight(actions[i + l - 1]);
            if (sum >= 0) return false;
        }
        return true;
    }
    int cmin = m.priority(states[i]);
    if (cmin % 2 == 0) return false;
    for (int l = 1; l <= lambda - 1; ++l) {
        cmin = std::min(cmin, m.priority(states[i + l]));
        if (cmin % 2 == 0) return false;
    }
    return true;
}

}  // namespace

Estimate monte_carlo(const Mdp& m, const MealyStrategy& sigma, const WindowSpec& spec,
                     int state, long long samples, int horizon, uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("sample count must be positive");
    int lambda;
    std::string convention;
    if (spec.variant == Variant::BW) {
        long long probe =
            std::min<long long>(default_bounded_cap(m, m.kind()), std::max(1, horizon / 2));
        lambda = static_cast<int>(probe);
        convention = "bw sampled as fw with probe lambda " + std::to_string(lambda);
    } else {
        lambda = spec.lambda.value();
        convention = spec.variant == Variant::DFW
                         ? "dfw checked exactly on anchors up to horizon-lambda"
                         : "fw success iff no violated anchor in the second half";
    }
    if (horizon < lambda) throw std::invalid_argument("horizon shorter than the window size");

    int first_anchor = spec.variant == Variant::DFW ? 0 : (horizon + 1) / 2;
    int last_anchor = horizon - lambda;

    long long successes = 0;
    Sampler sampler(m);
    std::vector<int> states(horizon + 1), actions(horizon);
    for (long long run = 0; run < samples; ++run) {
        SplitMix64 rng{mix64(seed) ^ mix64(0x51ed2701ULL + static_cast<uint64_t>(run))};
        int s = state, q = sigma.initial_memory(state);
        states[0] = s;
        for (int step = 0; step < horizon; ++step) {
            int a = sigma.next_action(s, q);
            if (!m.has_action(s, a))
                throw PartialStrategy("strategy picks disabled action at '" + m.state_name(s) +
                                      "'");
            int t = sampler.draw(s, a, rng);
            q = sigma.update(a, t, q);
            actions[step] = a;
            states[step + 1] = t;
            s = t;
        }
        bool violated = false;
        for (int i = first_anchor; i <= last_anchor && !violated; ++i)
            violated = anchor_violated(m, states, actions, i, lambda);
        if (!violated) ++successes;
    }

    Estimate est;
    est.samples = samples;
    est.successes = successes;
    est.horizon = horizon;
    est.convention = convention;
    est.value = static_cast<double>(successes) / static_cast<double>(samples);
    // 99% Hoeffding bound: P(|est - p| >= t) <= 2 exp(-2 n t^2).
    est.half_width = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(samples)));
    return est;
}

}  // namespace winmdp

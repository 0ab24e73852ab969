#include "testutil.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "winmdp/parser.hpp"
#include "winmdp/unfolding.hpp"

namespace testutil {

using winmdp::Distribution;
using winmdp::LabelKind;
using winmdp::Mdp;
using winmdp::MdpBuilder;
using winmdp::Rational;
using winmdp::SparseRow;

Mdp cycle3(LabelKind kind) {
    bool mp = kind == LabelKind::MeanPayoff;
    MdpBuilder b(kind);
    b.add_state("s1", mp ? -1 : 1);
    b.add_state("s2", mp ? -1 : 2);
    b.add_state("s3", mp ? -1 : 0);
    auto w = [&](long long v) {
        return mp ? std::optional<long long>(v) : std::optional<long long>();
    };
    b.add_action("s1", "a", w(-1));
    b.add_successor("s1", "a", "s2", Rational(1));
    b.add_action("s2", "b", w(0));
    b.add_successor("s2", "b", "s2", Rational(1, 2));
    b.add_successor("s2", "b", "s3", Rational(1, 2));
    b.add_action("s3", "c", w(1));
    b.add_successor("s3", "c", "s1", Rational(1));
    return std::move(b).build();
}

Mdp restart_coin() {
    MdpBuilder b(LabelKind::Parity);
    b.add_state("s", 1);
    b.add_state("t", 0);
    b.add_action("s", "a", std::nullopt);
    b.add_successor("s", "a", "s", Rational(1, 2));
    b.add_successor("s", "a", "t", Rational(1, 2));
    b.add_action("t", "b", std::nullopt);
    b.add_successor("t", "b", "t", Rational(1));
    return std::move(b).build();
}

Mdp memory3() {
    MdpBuilder b(LabelKind::Parity);
    const int prio[] = {6, 5, 3, 1, 6, 6, 6, 6, 4, 6, 6, 2, 6, 0};
    for (int i = 1; i <= 14; ++i) b.add_state("s" + std::to_string(i), prio[i - 1]);
    auto arc = [&](const std::string& from, const std::string& act, const std::string& to) {
        b.add_action(from, act, std::nullopt);
        b.add_successor(from, act, to, Rational(1));
    };
    b.add_action("s1", "a", std::nullopt);
    b.add_successor("s1", "a", "s2", Rational(1, 3));
    b.add_successor("s1", "a", "s3", Rational(1, 3));
    b.add_successor("s1", "a", "s4", Rational(1, 3));
    arc("s2", "a", "s5");
    arc("s3", "a", "s6");
    arc("s4", "a", "s8");
    arc("s5", "a", "s7");
    arc("s6", "a", "s8");
    arc("s7", "a", "s8");
    arc("s8", "b", "s9");
    arc("s8", "c", "s10");
    arc("s8", "d", "s11");
    arc("s9", "a", "s1");
    arc("s10", "a", "s12");
    arc("s11", "a", "s13");
    arc("s12", "a", "s1");
    arc("s13", "a", "s14");
    arc("s14", "a", "s1");
    return std::move(b).build();
}

Mdp two_color() {
    MdpBuilder b(LabelKind::Parity);
    b.add_state("g", 0);
    b.add_state("r", 1);
    b.add_action("g", "a", std::nullopt);
    b.add_successor("g", "a", "g", Rational(1));
    b.add_action("g", "b", std::nullopt);
    b.add_successor("g", "b", "r", Rational(1));
    b.add_action("r", "c", std::nullopt);
    b.add_successor("r", "c", "g", Rational(1, 2));
    b.add_successor("r", "c", "r", Rational(1, 2));
    return std::move(b).build();
}

Mdp read_model(const std::string& name) {
    std::string path = std::string(WINMDP_MODELS_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return winmdp::parse_model(buf.str());
}

namespace {

// Build one candidate instance; returns the unfolding strategy count so the
// caller can reject oversized draws.
RandomInstance draw(std::mt19937_64& rng, LabelKind kind, long long* candidates) {
    auto pick = [&](uint64_t n) { return static_cast<int>(rng() % n); };
    bool mp = kind == LabelKind::MeanPayoff;

    int n = 2 + pick(4);
    int lambda = 1 + pick(3);
    std::vector<int> extra(n, 0);
    int roll = pick(10);
    int multi = roll < 5 ? 0 : (roll < 9 ? 1 : 2);
    for (int k = 0; k < multi; ++k) extra[pick(n)] = 1 + pick(2);

    MdpBuilder b(kind);
    for (int s = 0; s < n; ++s)
        b.add_state("s" + std::to_string(s), mp ? -1 : pick(4));
    int next_action = 0;
    for (int s = 0; s < n; ++s) {
        std::string state = "s" + std::to_string(s);
        for (int j = 0; j <= extra[s]; ++j) {
            std::string act = "a" + std::to_string(next_action++);
            std::optional<long long> weight;
            if (mp) weight = pick(5) - 2;
            b.add_action(state, act, weight);
            int deg = 1 + pick(std::min(n, 3));
            std::vector<int> order(n);
            for (int i = 0; i < n; ++i) order[i] = i;
            for (int i = 0; i < deg; ++i) std::swap(order[i], order[i + pick(n - i)]);
            int total = 0;
            std::vector<int> mass(deg);
            for (int i = 0; i < deg; ++i) total += mass[i] = 1 + pick(3);
            for (int i = 0; i < deg; ++i) {
                Rational p(mass[i], total);
                p.canonicalize();
                b.add_successor(state, act, "s" + std::to_string(order[i]), p);
            }
        }
    }

    RandomInstance inst{std::move(b).build(), lambda};
    winmdp::UnfoldedMdp u = winmdp::unfold(inst.mdp, lambda, kind);
    *candidates = 1;
    for (int c = 0; c < u.mdp.state_count() && *candidates >= 0; ++c) {
        *candidates *= static_cast<long long>(u.mdp.enabled(c).size());
        if (*candidates > (1LL << 40)) *candidates = -1;
    }
    return inst;
}

}  // namespace

RandomInstance random_instance(uint64_t seed, LabelKind kind, long long max_candidates) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL);
    for (int attempt = 0; attempt < 500; ++attempt) {
        long long candidates = 0;
        RandomInstance inst = draw(rng, kind, &candidates);
        if (candidates >= 1 && candidates <= max_candidates) return inst;
    }
    throw std::runtime_error("no instance under the candidate bound after 500 draws");
}

Mdp big_layered(int layers, int width, int clusters, int cluster_size, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](uint64_t n) { return static_cast<int>(rng() % n); };

    int transient = layers * width;
    int total = transient + clusters * cluster_size;
    std::vector<std::string> names(total);
    std::vector<int> prio(total, 0);
    for (int i = 0; i < total; ++i) names[i] = "n" + std::to_string(i);
    for (int k = 0; k < clusters; ++k)
        for (int j = 0; j < cluster_size; ++j) prio[transient + k * cluster_size + j] = k % 2;

    std::vector<std::string> actions = {"a", "b", "c"};
    std::vector<long long> weights;  // parity labeling, unused
    std::vector<std::vector<std::pair<int, Distribution>>> rows(total);

    auto coin = [&](int u, int v) {
        Distribution d;
        if (u == v) {
            d.support = {{u, Rational(1)}};
        } else {
            d.support = {{std::min(u, v), Rational(1, 2)}, {std::max(u, v), Rational(1, 2)}};
        }
        return d;
    };

    for (int layer = 0; layer < layers; ++layer) {
        bool last = layer == layers - 1;
        for (int j = 0; j < width; ++j) {
            int s = layer * width + j;
            for (int a = 0; a < 3; ++a) {
                int u, v;
                if (last) {
                    u = transient + pick(clusters) * cluster_size;
                    v = transient + pick(clusters) * cluster_size;
                } else {
                    u = (layer + 1) * width + pick(width);
                    v = (layer + 1) * width + pick(width);
                }
                rows[s].emplace_back(a, coin(u, v));
            }
        }
    }
    for (int k = 0; k < clusters; ++k) {
        int base = transient + k * cluster_size;
        for (int j = 0; j < cluster_size; ++j) {
            int s = base + j;
            int succ1 = base + (j + 1) % cluster_size;
            int succ2 = base + (j + 2) % cluster_size;
            Distribution d0, d1;
            d0.support = {{succ1, Rational(1)}};
            d1.support = {{succ2, Rational(1)}};
            rows[s].emplace_back(0, d0);
            rows[s].emplace_back(1, d1);
            rows[s].emplace_back(2, coin(s, succ1));
        }
    }
    return winmdp::assemble_mdp(LabelKind::Parity, std::move(names), std::move(prio),
                                std::move(actions), std::move(weights), std::move(rows));
}

std::vector<Rational> chain_reach(const std::vector<SparseRow>& rows,
                                  const std::vector<bool>& target) {
    int n = static_cast<int>(rows.size());
    std::vector<std::vector<int>> pred(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, p] : rows[i]) pred[j].push_back(i);
    std::vector<bool> reaches(n, false);
    std::vector<int> queue;
    for (int i = 0; i < n; ++i)
        if (target[i]) {
            reaches[i] = true;
            queue.push_back(i);
        }
    for (size_t h = 0; h < queue.size(); ++h)
        for (int p : pred[queue[h]])
            if (!reaches[p]) {
                reaches[p] = true;
                queue.push_back(p);
            }

    std::vector<int> var(n, -1);
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
        if (reaches[i] && !target[i]) {
            var[i] = static_cast<int>(order.size());
            order.push_back(i);
        }
    std::vector<SparseRow> sys(order.size());
    std::vector<Rational> rhs(order.size(), Rational(0));
    for (size_t k = 0; k < order.size(); ++k) {
        for (const auto& [j, p] : rows[order[k]]) {
            if (target[j])
                rhs[k] += p;
            else if (var[j] >= 0)
                sys[k].emplace_back(var[j], p);
        }
    }
    std::vector<Rational> sol = winmdp::solve_markov_system(sys, rhs);
    std::vector<Rational> out(n, Rational(0));
    for (int i = 0; i < n; ++i) {
        if (target[i])
            out[i] = Rational(1);
        else if (var[i] >= 0)
            out[i] = sol[var[i]];
    }
    return out;
}

}  // namespace testutil

#include <doctest.h>

#include <cstdlib>

#include "testutil.hpp"
#include "winmdp/graph.hpp"
#include "winmdp/oracle.hpp"
#include "winmdp/solver.hpp"

using namespace winmdp;

namespace {

Rational two_pow_neg(int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r /= 2;
    return r;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("restart_coin closed forms") {
    Mdp m = testutil::restart_coin();
    int s = m.state_index("s"), t = m.state_index("t");
    for (int lambda = 1; lambda <= 6; ++lambda) {
        Verdict v = solve_dfw(m, lambda);
        CHECK(v.values[s] == Rational(1) - two_pow_neg(lambda - 1));
        CHECK(v.values[t] == Rational(1));
        CHECK(v.confidence == Confidence::Exact);
    }
    Verdict fw = solve_fw(m, 1);
    CHECK(fw.values[s] == Rational(1));
    CHECK(fw.values[t] == Rational(1));
    Verdict bw = solve_bw(m);
    CHECK(bw.values[s] == Rational(1));
    CHECK(bw.confidence == Confidence::Exact);
    REQUIRE(bw.mecs.size() == 1);
    CHECK(bw.mecs[0].cls == EcClass::Good);
    CHECK(bw.mecs[0].lambda_star == 1);
}

TEST_CASE("memory3 flips between window sizes four and five") {
    Mdp m = testutil::memory3();
    Verdict five = solve_dfw(m, 5);
    Verdict four = solve_dfw(m, 4);
    for (int s = 0; s < m.state_count(); ++s) {
        CHECK(five.values[s] == Rational(1));
        CHECK(four.values[s] == Rational(0));
    }
    Verdict fw = solve_fw(m, 5);
    for (int s = 0; s < m.state_count(); ++s) CHECK(fw.values[s] == Rational(1));
}

TEST_CASE("memory3 is lost by every memoryless controller") {
    // the solver needs memory: all three stationary choices at s8 give zero
    Mdp m = testutil::memory3();
    int s1 = m.state_index("s1");
    for (const char* act : {"b", "c", "d"}) {
        std::vector<int> pick(m.state_count());
        for (int s = 0; s < m.state_count(); ++s) pick[s] = m.enabled(s)[0];
        pick[m.state_index("s8")] = m.action_index(act);
        MealyStrategy sigma = MealyStrategy::memoryless(pick);
        CHECK(eval_strategy_exact(m, sigma, {Variant::DFW, 5}, s1) == Rational(0));
    }
    CHECK(solve_dfw(m, 5).values[s1] == Rational(1));
}

TEST_CASE("two_color separates direct and prefix-independent values") {
    Mdp m = testutil::two_color();
    int g = m.state_index("g"), r = m.state_index("r");
    Verdict dfw = solve_dfw(m, 1);
    CHECK(dfw.values[g] == Rational(1));
    CHECK(dfw.values[r] == Rational(0));
    Verdict fw = solve_fw(m, 1);
    CHECK(fw.values[g] == Rational(1));
    CHECK(fw.values[r] == Rational(1));
    REQUIRE(fw.mecs.size() == 1);
    CHECK(fw.mecs[0].region == std::vector<int>{g});
}

TEST_CASE("cycle3 has value zero for every variant and labeling") {
    for (LabelKind kind : {LabelKind::Parity, LabelKind::MeanPayoff}) {
        Mdp m = testutil::cycle3(kind);
        for (int lambda = 1; lambda <= 8; ++lambda) {
            WindowSpec spec{Variant::DFW, lambda};
            for (Variant variant : {Variant::DFW, Variant::FW}) {
                spec.variant = variant;
                Verdict v = solve(m, spec);
                for (int s = 0; s < 3; ++s) CHECK(v.values[s] == Rational(0));
            }
        }
        Verdict bw = solve_bw(m);
        for (int s = 0; s < 3; ++s) CHECK(bw.values[s] == Rational(0));
    }
}

TEST_CASE("bounded verdict confidence depends on the labeling") {
    CHECK(solve_bw(testutil::cycle3(LabelKind::Parity)).confidence == Confidence::Exact);
    CHECK(solve_bw(testutil::cycle3(LabelKind::MeanPayoff)).confidence ==
          Confidence::BoundedByCap);
}

TEST_CASE("values are monotone in the window size and variant") {
    for (uint64_t seed = 800; seed < 830; ++seed) {
        LabelKind kind = seed % 2 ? LabelKind::Parity : LabelKind::MeanPayoff;
        Mdp m = testutil::random_instance(seed, kind).mdp;
        CAPTURE(seed);
        Verdict bw = solve_bw(m);
        std::vector<Rational> prev_dfw;
        for (int lambda = 1; lambda <= 3; ++lambda) {
            Verdict dfw = solve_dfw(m, lambda);
            Verdict fw = solve_fw(m, lambda);
            for (int s = 0; s < m.state_count(); ++s) {
                if (!prev_dfw.empty()) CHECK(prev_dfw[s] <= dfw.values[s]);
                CHECK(dfw.values[s] <= fw.values[s]);
                CHECK(fw.values[s] <= bw.values[s]);
            }
            prev_dfw = dfw.values;
        }
    }
}

TEST_CASE("per-MEC values obey the zero-one law") {
    for (uint64_t seed = 900; seed < 930; ++seed) {
        LabelKind kind = seed % 2 ? LabelKind::Parity : LabelKind::MeanPayoff;
        auto [m, lambda] = testutil::random_instance(seed, kind);
        MecDecomposition dec = mec_decomposition(m);
        for (const Mec& mec : dec.mecs) {
            Mdp ec = restrict(m, mec.states, mec.actions);
            Verdict v = solve_fw(ec, lambda);
            bool good = classify_fixed(ec, kind, lambda).cls == EcClass::Good;
            for (int s = 0; s < ec.state_count(); ++s) {
                CAPTURE(seed);
                CHECK(v.values[s] == (good ? Rational(1) : Rational(0)));
            }
        }
    }
}

TEST_CASE("solver strategies attain the solver values") {
    for (uint64_t seed = 1000; seed < 1030; ++seed) {
        LabelKind kind = seed % 2 ? LabelKind::Parity : LabelKind::MeanPayoff;
        auto [m, lambda] = testutil::random_instance(seed, kind);
        WindowSpec dspec{Variant::DFW, lambda};
        WindowSpec fspec{Variant::FW, lambda};
        CAPTURE(seed);
        Verdict dfw = solve(m, dspec);
        CHECK(eval_strategy_exact_all(m, dfw.strategy, dspec) == dfw.values);
        Verdict fw = solve(m, fspec);
        CHECK(eval_strategy_exact_all(m, fw.strategy, fspec) == fw.values);
        Verdict bw = solve_bw(m);
        if (bw.confidence == Confidence::Exact)
            CHECK(eval_strategy_exact_all(m, bw.strategy, {Variant::BW, std::nullopt}) ==
                  bw.values);
    }
}

TEST_CASE("decide_threshold covers all three outcomes") {
    Mdp m = testutil::restart_coin();
    int s = m.state_index("s");
    Verdict v = solve_dfw(m, 2);
    CHECK(decide_threshold(v, s, Rational(1, 2)) == Decision::Yes);
    CHECK(decide_threshold(v, s, Rational(2, 3)) == Decision::No);

    Verdict capped = solve_bw(testutil::cycle3(LabelKind::MeanPayoff));
    CHECK(capped.confidence == Confidence::BoundedByCap);
    CHECK(decide_threshold(capped, 0, Rational(1, 2)) == Decision::Inconclusive);
    CHECK(decide_threshold(capped, 0, Rational(0)) == Decision::Yes);
}

TEST_CASE("thread cap does not change results") {
    Mdp m = testutil::memory3();
    Verdict wide = solve_fw(m, 5);
    setenv("WINMDP_THREADS", "1", 1);
    Verdict narrow = solve_fw(m, 5);
    unsetenv("WINMDP_THREADS");
    CHECK(wide.values == narrow.values);
}

TEST_CASE("variant and decision names") {
    CHECK(to_string(Variant::DFW) == "dfw");
    CHECK(to_string(Variant::FW) == "fw");
    CHECK(to_string(Variant::BW) == "bw");
    CHECK(to_string(Decision::Yes) == "yes");
    CHECK(to_string(Decision::No) == "no");
    CHECK(to_string(Decision::Inconclusive) == "inconclusive");
}

}  // TEST_SUITE

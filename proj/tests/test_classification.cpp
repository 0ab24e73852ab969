#include <doctest.h>

#include "testutil.hpp"
#include "winmdp/classification.hpp"
#include "winmdp/graph.hpp"
#include "winmdp/oracle.hpp"
#include "winmdp/solver.hpp"

using namespace winmdp;

namespace {

// First MEC of m restricted to a standalone model.
Mdp main_mec(const Mdp& m) {
    MecDecomposition dec = mec_decomposition(m);
    REQUIRE(dec.mecs.size() >= 1);
    return restrict(m, dec.mecs[0].states, dec.mecs[0].actions);
}

}  // namespace

TEST_SUITE("classification") {

TEST_CASE("two_color: the one-safe region is exactly g") {
    Mdp ec = main_mec(testutil::two_color());
    SafeRegion sr = lambda_safe_region(ec, LabelKind::Parity, 1);
    CHECK(sr.region[ec.state_index("g")]);
    CHECK_FALSE(sr.region[ec.state_index("r")]);

    EcStatus st = classify_fixed(ec, LabelKind::Parity, 1);
    CHECK(st.cls == EcClass::Good);
    CHECK(st.lambda_star == 1);

    // composed strategy wins almost surely from both states
    MealyStrategy sigma = build_good_strategy(ec, st);
    std::vector<Rational> val =
        eval_strategy_exact_all(ec, sigma, {Variant::FW, 1});
    CHECK(val[ec.state_index("g")] == Rational(1));
    CHECK(val[ec.state_index("r")] == Rational(1));
}

TEST_CASE("memory3: safe exactly from window size five") {
    Mdp ec = main_mec(testutil::memory3());
    REQUIRE(ec.state_count() == 14);

    EcStatus four = classify_fixed(ec, LabelKind::Parity, 4);
    CHECK(four.cls == EcClass::NotGood);

    EcStatus five = classify_fixed(ec, LabelKind::Parity, 5);
    CHECK(five.cls == EcClass::Good);
    for (int s = 0; s < 14; ++s) CHECK(five.region[s]);

    EcStatus bounded = classify_bounded(ec, LabelKind::Parity);
    CHECK(bounded.cls == EcClass::Good);
    CHECK(bounded.lambda_star == 5);
    CHECK(bounded.cap == 30);
}

TEST_CASE("restart_coin: the sink is immediately safe") {
    Mdp ec = main_mec(testutil::restart_coin());
    REQUIRE(ec.state_count() == 1);
    EcStatus st = classify_fixed(ec, LabelKind::Parity, 1);
    CHECK(st.cls == EcClass::Good);
    CHECK(st.region[0]);
}

TEST_CASE("cycle3 parity is never good, certified within 2n+2") {
    Mdp ec = main_mec(testutil::cycle3(LabelKind::Parity));
    for (int lambda = 1; lambda <= 6; ++lambda)
        CHECK(classify_fixed(ec, LabelKind::Parity, lambda).cls == EcClass::NotGood);
    EcStatus st = classify_bounded(ec, LabelKind::Parity);
    CHECK(st.cls == EcClass::NotGood);
    CHECK(st.cap == 8);
}

TEST_CASE("cycle3 mean-payoff exhausts the cap without a certificate") {
    Mdp ec = main_mec(testutil::cycle3(LabelKind::MeanPayoff));
    EcStatus st = classify_bounded(ec, LabelKind::MeanPayoff);
    CHECK(st.cls == EcClass::NotGoodWithinCap);
    CHECK(st.cap == 9);
    CHECK(default_bounded_cap(ec, LabelKind::MeanPayoff) == 9);

    // a user-provided cap overrides the default
    EcStatus tight = classify_bounded(ec, LabelKind::MeanPayoff, 3);
    CHECK(tight.cls == EcClass::NotGoodWithinCap);
    CHECK(tight.cap == 3);
}

TEST_CASE("a positive mean-payoff loop is good with window two") {
    MdpBuilder b(LabelKind::MeanPayoff);
    b.add_state("u");
    b.add_state("v");
    b.add_action("u", "down", -1);
    b.add_successor("u", "down", "v", Rational(1));
    b.add_action("v", "up", 1);
    b.add_successor("v", "up", "u", Rational(1));
    Mdp ec = std::move(b).build();

    CHECK(classify_fixed(ec, LabelKind::MeanPayoff, 1).cls == EcClass::NotGood);
    EcStatus st = classify_bounded(ec, LabelKind::MeanPayoff);
    CHECK(st.cls == EcClass::Good);
    CHECK(st.lambda_star == 2);
    for (int s = 0; s < 2; ++s) CHECK(st.region[s]);
}

TEST_CASE("safe regions grow with the window size") {
    for (uint64_t seed = 600; seed < 640; ++seed) {
        LabelKind kind = seed % 2 ? LabelKind::Parity : LabelKind::MeanPayoff;
        Mdp m = testutil::random_instance(seed, kind).mdp;
        MecDecomposition dec = mec_decomposition(m);
        for (const Mec& mec : dec.mecs) {
            Mdp ec = restrict(m, mec.states, mec.actions);
            SafeRegion prev = lambda_safe_region(ec, kind, 1);
            for (int lambda = 2; lambda <= 4; ++lambda) {
                SafeRegion next = lambda_safe_region(ec, kind, lambda);
                for (int s = 0; s < ec.state_count(); ++s) {
                    CAPTURE(seed);
                    if (prev.region[s]) CHECK(next.region[s]);
                }
                prev = std::move(next);
            }
        }
    }
}

TEST_CASE("bounded classification finds the minimal window size") {
    for (uint64_t seed = 700; seed < 740; ++seed) {
        LabelKind kind = seed % 2 ? LabelKind::Parity : LabelKind::MeanPayoff;
        Mdp m = testutil::random_instance(seed, kind).mdp;
        MecDecomposition dec = mec_decomposition(m);
        for (const Mec& mec : dec.mecs) {
            Mdp ec = restrict(m, mec.states, mec.actions);
            EcStatus st = classify_bounded(ec, kind);
            CAPTURE(seed);
            if (st.cls == EcClass::Good) {
                CHECK(classify_fixed(ec, kind, st.lambda_star).cls == EcClass::Good);
                if (st.lambda_star > 1)
                    CHECK(classify_fixed(ec, kind, st.lambda_star - 1).cls ==
                          EcClass::NotGood);
            } else {
                CHECK(classify_fixed(ec, kind, static_cast<int>(st.cap)).cls ==
                      EcClass::NotGood);
            }
        }
    }
}

TEST_CASE("non end components are rejected") {
    Mdp m = testutil::restart_coin();
    CHECK_THROWS_AS(lambda_safe_region(m, LabelKind::Parity, 2), NotAnEndComponent);
    CHECK_THROWS_AS(classify_fixed(m, LabelKind::Parity, 2), NotAnEndComponent);
}

}  // TEST_SUITE

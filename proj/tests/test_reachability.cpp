#include <doctest.h>

#include "testutil.hpp"
#include "winmdp/reachability.hpp"

using namespace winmdp;

namespace {

// Value of a fixed memoryless policy: induced chain plus absorption solve.
std::vector<Rational> policy_value(const Mdp& m, const std::vector<int>& pick,
                                   const std::vector<bool>& target) {
    std::vector<SparseRow> rows(m.state_count());
    for (int s = 0; s < m.state_count(); ++s)
        for (const auto& [t, p] : m.dist(s, pick[s]).support) rows[s].emplace_back(t, p);
    return testutil::chain_reach(rows, target);
}

// Optimal values by enumerating every memoryless policy. Memoryless policies
// are enough for maximal reachability, so this is a complete reference.
std::vector<Rational> enumerate_optimum(const Mdp& m, const std::vector<bool>& target) {
    std::vector<int> pick(m.state_count(), 0);
    std::vector<Rational> best(m.state_count(), Rational(0));
    bool more = true;
    while (more) {
        std::vector<int> actions(m.state_count());
        for (int s = 0; s < m.state_count(); ++s) actions[s] = m.enabled(s)[pick[s]];
        std::vector<Rational> val = policy_value(m, actions, target);
        for (int s = 0; s < m.state_count(); ++s)
            if (val[s] > best[s]) best[s] = val[s];
        more = false;
        for (int s = 0; s < m.state_count(); ++s) {
            if (++pick[s] < static_cast<int>(m.enabled(s).size())) {
                more = true;
                break;
            }
            pick[s] = 0;
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("reachability") {

TEST_CASE("coin flip to the sink") {
    Mdp m = testutil::restart_coin();
    std::vector<bool> target(2, false);
    target[m.state_index("t")] = true;
    ReachResult r = max_reachability(m, target);
    CHECK(r.values[m.state_index("s")] == Rational(1));
    CHECK(r.values[m.state_index("t")] == Rational(1));
    CHECK(r.strategy[m.state_index("t")] == -1);
}

TEST_CASE("choice between a trap and the target") {
    MdpBuilder b(LabelKind::Parity);
    b.add_state("s", 0);
    b.add_state("trap", 0);
    b.add_state("goal", 0);
    b.add_action("s", "bad", std::nullopt);
    b.add_successor("s", "bad", "trap", Rational(1));
    b.add_action("s", "good", std::nullopt);
    b.add_successor("s", "good", "goal", Rational(1));
    b.add_action("trap", "stay", std::nullopt);
    b.add_successor("trap", "stay", "trap", Rational(1));
    b.add_action("goal", "stay", std::nullopt);
    b.add_successor("goal", "stay", "goal", Rational(1));
    Mdp m = std::move(b).build();

    std::vector<bool> target(3, false);
    target[m.state_index("goal")] = true;
    ReachResult r = max_reachability(m, target);
    CHECK(r.values[m.state_index("s")] == Rational(1));
    CHECK(r.values[m.state_index("trap")] == Rational(0));
    CHECK(r.strategy[m.state_index("s")] == m.action_index("good"));
    CHECK(r.strategy[m.state_index("trap")] == -1);
}

TEST_CASE("gamblers walk midpoint") {
    MdpBuilder b(LabelKind::Parity);
    for (int i = 0; i <= 4; ++i) b.add_state("v" + std::to_string(i), 0);
    for (int i = 0; i <= 4; ++i) {
        std::string s = "v" + std::to_string(i);
        b.add_action(s, "m", std::nullopt);
        if (i == 0 || i == 4) {
            b.add_successor(s, "m", s, Rational(1));
        } else {
            b.add_successor(s, "m", "v" + std::to_string(i - 1), Rational(1, 2));
            b.add_successor(s, "m", "v" + std::to_string(i + 1), Rational(1, 2));
        }
    }
    Mdp m = std::move(b).build();
    std::vector<bool> target(5, false);
    target[4] = true;
    ReachResult r = max_reachability(m, target);
    for (int i = 0; i <= 4; ++i) {
        Rational expect(i, 4);
        expect.canonicalize();
        CHECK(r.values[i] == expect);
    }
}

TEST_CASE("values match policy enumeration on random instances") {
    for (uint64_t seed = 300; seed < 360; ++seed) {
        Mdp m = testutil::random_instance(seed, LabelKind::Parity).mdp;
        std::vector<bool> target(m.state_count(), false);
        target[seed % m.state_count()] = true;
        if (m.state_count() > 1) target[(seed / 3) % m.state_count()] = true;

        ReachResult r = max_reachability(m, target);
        std::vector<Rational> expect = enumerate_optimum(m, target);
        CAPTURE(seed);
        CHECK(r.values == expect);
    }
}

TEST_CASE("the returned strategy attains the returned values") {
    for (uint64_t seed = 400; seed < 440; ++seed) {
        Mdp m = testutil::random_instance(seed, LabelKind::MeanPayoff).mdp;
        std::vector<bool> target(m.state_count(), false);
        target[seed % m.state_count()] = true;

        ReachResult r = max_reachability(m, target);
        std::vector<int> pick(m.state_count());
        for (int s = 0; s < m.state_count(); ++s)
            pick[s] = r.strategy[s] >= 0 ? r.strategy[s] : m.enabled(s)[0];
        std::vector<Rational> attained = policy_value(m, pick, target);
        CAPTURE(seed);
        CHECK(attained == r.values);
    }
}

}  // TEST_SUITE

#pragma once

// Shared fixtures for the test binaries: hand-built models with values that
// were worked out on paper, a seeded generator of small instances whose
// unfolding strategy space stays enumerable, a large layered instance for the
// scale smoke test, and an independent absorption solver for cross-checks.

#include <cstdint>
#include <string>
#include <vector>

#include "winmdp/linalg.hpp"
#include "winmdp/model.hpp"

namespace testutil {

// Three-state loop s1 -> s2 -> s3 -> s1 where s2 holds a fair coin. Every
// cycle opens a window (odd priority / weight -1 at s1) that only the jump to
// s3 can close, so for every window size all window values are exactly 0.
winmdp::Mdp cycle3(winmdp::LabelKind kind);

// Odd state s flips a fair coin between staying odd and escaping to the even
// sink t. Direct fixed window value from s is 1 - 2^(1-lambda); the
// prefix-independent and bounded variants are 1.
winmdp::Mdp restart_coin();

// Fourteen-state loop where a three-way random branch at s1 must be answered
// four steps later at s8: b after s2, c after s3, d after s4. Window size 5
// is won surely, window size 4 is lost surely, and winning needs three
// memory cells across the gap.
winmdp::Mdp memory3();

// Two states: g (even) can stay put forever, r (odd) resolves by coin. The
// 1-safe region is exactly {g}.
winmdp::Mdp two_color();

// Parses a file from the models/ directory of the source tree.
winmdp::Mdp read_model(const std::string& name);

struct RandomInstance {
    winmdp::Mdp mdp;
    int lambda = 1;
};

// Deterministic small instance: 2..5 states, at most 3 actions per state,
// |w| <= 2 or priorities <= 3, lambda in 1..3. Mostly single-action states;
// draws are rejected until the unfolding strategy count fits max_candidates,
// so brute force enumeration is always feasible on the result.
RandomInstance random_instance(uint64_t seed, winmdp::LabelKind kind,
                               long long max_candidates = 4096);

// Parity model with `layers` x `width` transient states wired layer to layer
// by fair coins (three choices per state) and `clusters` closed cycles of
// `cluster_size` states at the bottom. Even-numbered clusters have priority
// 0 everywhere, odd-numbered priority 1, so exactly the even ones are good.
winmdp::Mdp big_layered(int layers, int width, int clusters, int cluster_size,
                        uint64_t seed);

// Absorption probabilities of an explicit Markov chain into `target`,
// computed here from scratch (backward reachability plus the exact linear
// solver) so solver and oracle results can be checked against a third path.
std::vector<winmdp::Rational> chain_reach(const std::vector<winmdp::SparseRow>& rows,
                                          const std::vector<bool>& target);

}  // namespace testutil

#pragma once

#include <optional>
#include <vector>

#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"
#include "winmdp/unfolding.hpp"

namespace winmdp {

class NotAnEndComponent : public std::runtime_error {
public:
    explicit NotAnEndComponent(const std::string& what) : std::runtime_error(what) {}
};

struct SafeRegion {
    // Per EC state: the controller surely keeps every window within lambda
    // steps when starting there (two-player reading, adversary resolves the
    // probabilities).
    std::vector<bool> region;
    // Total Mealy strategy over the EC; winning from every region state.
    MealyStrategy strategy;
};

// Safety game on the lambda-unfolding of the EC: the safe region is the
// complement of the adversary attractor of the bad configs, projected to
// initial configs. Throws NotAnEndComponent if ec is not closed and strongly
// connected under its enabled actions.
SafeRegion lambda_safe_region(const Mdp& ec, LabelKind kind, int lambda);

enum class EcClass { Good, NotGood, NotGoodWithinCap };

struct EcStatus {
    EcClass cls = EcClass::NotGood;
    LabelKind kind = LabelKind::MeanPayoff;
    // Good: the (minimal, for bounded classification) witness window size.
    int lambda_star = -1;
    long long cap = -1;  // bounded search cap that was in force, -1 for fixed
    std::vector<bool> region;
    MealyStrategy safe_strategy;
};

// Fixed window size: the EC is good iff some state is lambda-safe.
EcStatus classify_fixed(const Mdp& ec, LabelKind kind, int lambda);

// Bounded windows: searches window sizes 1,2,4,... capped, then binary
// searches the minimal good lambda. Defaults: 2*|S|+2 for parity (large
// enough to be conclusive, so exhaustion certifies NotGood), |S|^2*max(W,1)
// for mean-payoff (exhaustion yields NotGoodWithinCap, never a certified no).
EcStatus classify_bounded(const Mdp& ec, LabelKind kind,
                          std::optional<long long> cap = std::nullopt);

long long default_bounded_cap(const Mdp& ec, LabelKind kind);

// Strategy winning the prefix-independent window objective almost surely from
// every EC state: reach the safe region (memoryless, probability 1 inside an
// EC), then switch to the region's safe strategy. status must be Good.
MealyStrategy build_good_strategy(const Mdp& ec, const EcStatus& status);

}  // namespace winmdp

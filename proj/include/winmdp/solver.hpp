#pragma once

#include <optional>
#include <string>
#include <vector>

#include "winmdp/classification.hpp"
#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"

namespace winmdp {

enum class Variant { DFW, FW, BW };

std::string to_string(Variant v);

// Window objective: variant plus window size (absent exactly for BW).
struct WindowSpec {
    Variant variant = Variant::DFW;
    std::optional<int> lambda;
};

enum class Confidence { Exact, BoundedByCap };

struct MecVerdict {
    std::vector<int> states;  // parent state indices, ascending
    EcClass cls;
    int lambda_star;          // good witness window size, -1 otherwise
    long long cap;            // bounded-search cap, -1 for fixed lambda
    std::vector<int> region;  // lambda_star-safe states (parent indices)
};

struct Verdict {
    LabelKind kind;
    WindowSpec spec;
    std::vector<Rational> values;  // per state, exact
    MealyStrategy strategy;        // attains the values, total where value > 0
    Confidence confidence = Confidence::Exact;
    std::vector<MecVerdict> mecs;  // empty for DFW
};

// Direct fixed window: safety game on the unfolding of the whole MDP, then
// maximal reachability of the surely-safe configs with bad configs frozen.
Verdict solve_dfw(const Mdp& m, int lambda);

// Prefix-independent fixed window: classify every MEC, then maximal
// reachability of the union of good MECs; the strategy plays the reach phase
// and switches to the per-MEC good strategy on arrival.
Verdict solve_fw(const Mdp& m, int lambda);

// Bounded window: like solve_fw with per-MEC bounded classification. With a
// mean-payoff labeling an exhausted cap downgrades confidence to
// BoundedByCap (the reported values are then lower bounds).
Verdict solve_bw(const Mdp& m, std::optional<long long> cap = std::nullopt);

Verdict solve(const Mdp& m, const WindowSpec& spec,
              std::optional<long long> cap = std::nullopt);

enum class Decision { Yes, No, Inconclusive };

std::string to_string(Decision d);

// Threshold test value(state) >= alpha. BoundedByCap verdicts only certify
// the yes direction; otherwise the answer is inconclusive.
Decision decide_threshold(const Verdict& v, int state, const Rational& alpha);

}  // namespace winmdp

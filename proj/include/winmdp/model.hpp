#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "winmdp/rational.hpp"

namespace winmdp {

enum class LabelKind { MeanPayoff, Parity };

std::string to_string(LabelKind kind);

enum class ModelErrorCode {
    DuplicateState,
    DuplicateAction,
    UnknownState,
    EmptyModel,
    Deadlock,
    EmptySupport,
    DuplicateSuccessor,
    NonPositiveProbability,
    DistributionSum,
    MissingWeight,
    UnexpectedWeight,
    NegativePriority,
    SyntaxError,
};

// Validation and parse failures carry a code, a human message and, when the
// model came from text, the 1-based source line.
class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrorCode code, std::string message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          code_(code),
          line_(line) {}

    ModelErrorCode code() const { return code_; }
    int line() const { return line_; }

private:
    ModelErrorCode code_;
    int line_;
};

struct Distribution {
    // Successor/probability pairs, ascending state index, probabilities
    // positive and summing to exactly 1.
    std::vector<std::pair<int, Rational>> support;
};

// Finite MDP with either integer action weights (mean-payoff labeling) or
// natural state priorities (parity labeling). States and actions are interned
// strings; indices follow first appearance. Every state has at least one
// enabled action, so the model is deadlock free by construction.
class Mdp {
public:
    int state_count() const { return static_cast<int>(state_names_.size()); }
    int action_count() const { return static_cast<int>(action_names_.size()); }

    const std::string& state_name(int s) const { return state_names_[s]; }
    const std::string& action_name(int a) const { return action_names_[a]; }
    // -1 when the name is unknown.
    int state_index(const std::string& name) const;
    int action_index(const std::string& name) const;

    LabelKind kind() const { return kind_; }

    // Mean-payoff labeling only.
    long long weight(int a) const { return weights_[a]; }
    long long max_abs_weight() const;

    // Parity labeling only.
    int priority(int s) const { return priorities_[s]; }
    int max_priority() const;

    // Enabled action indices of s, ascending.
    const std::vector<int>& enabled(int s) const { return enabled_[s]; }
    bool has_action(int s, int a) const;
    const Distribution& dist(int s, int a) const;

    // Structural warnings found during validation (model still usable).
    const std::vector<std::string>& warnings() const { return warnings_; }

    int transition_count() const;

private:
    friend class MdpBuilder;
    friend Mdp assemble_mdp(LabelKind, std::vector<std::string>, std::vector<int>,
                            std::vector<std::string>, std::vector<long long>,
                            std::vector<std::vector<std::pair<int, Distribution>>>);
    friend Mdp restrict(const Mdp&, const std::vector<int>&,
                        const std::vector<std::vector<int>>&);

    std::vector<std::string> state_names_;
    std::vector<std::string> action_names_;
    LabelKind kind_ = LabelKind::MeanPayoff;
    std::vector<long long> weights_;
    std::vector<int> priorities_;
    std::vector<std::vector<int>> enabled_;
    // Parallel to enabled_[s].
    std::vector<std::vector<Distribution>> dists_;
    std::vector<std::string> warnings_;
};

// Accumulates states and transitions in appearance order, then validates the
// whole model in build(). Line numbers are optional provenance for errors.
class MdpBuilder {
public:
    explicit MdpBuilder(LabelKind kind) : kind_(kind) {}

    // Parity models give each state a priority; mean-payoff models pass -1.
    int add_state(const std::string& name, int priority = -1, int line = 0);
    // Returns the global action index. Weight is required exactly when the
    // model is mean-payoff labeled.
    int add_action(const std::string& state, const std::string& action,
                   std::optional<long long> weight, int line = 0);
    void add_successor(const std::string& state, const std::string& action,
                       const std::string& successor, const Rational& prob, int line = 0);

    // Validates and produces the immutable model. Throws ModelError.
    Mdp build() &&;

private:
    struct PendingAction {
        std::string name;
        std::optional<long long> weight;
        int line;
        std::vector<std::tuple<std::string, Rational, int>> successors;
    };
    struct PendingState {
        std::string name;
        int priority;
        int line;
        std::vector<PendingAction> actions;
    };

    PendingState* find_state(const std::string& name);

    LabelKind kind_;
    std::vector<PendingState> states_;
    std::unordered_map<std::string, int> state_ids_;
};

// Re-validates every structural invariant of an already-built model. Used by
// tests and by operations that construct models programmatically.
void validate_mdp(const Mdp& m);

// Direct assembly for index-based construction (unfoldings, generated
// models). rows[s] holds (action, distribution) pairs sorted by action.
// Validates the result; priorities ignored for mean-payoff, weights for
// parity.
Mdp assemble_mdp(LabelKind kind, std::vector<std::string> state_names,
                 std::vector<int> priorities, std::vector<std::string> action_names,
                 std::vector<long long> weights,
                 std::vector<std::vector<std::pair<int, Distribution>>> rows);

// Sub-MDP induced by keep_states and, per kept state, the subset of its
// enabled actions listed in keep_actions (parallel to keep_states). State
// names survive; state indices are renumbered in ascending original order.
// The action alphabet (and action indices) of the parent is preserved.
// Throws ModelError if any kept action leaves the kept state set or any kept
// state ends up with no action.
Mdp restrict(const Mdp& m, const std::vector<int>& keep_states,
             const std::vector<std::vector<int>>& keep_actions);

// Convenience: keep all enabled actions whose support stays inside the set.
Mdp restrict_states(const Mdp& m, const std::vector<int>& keep_states);

}  // namespace winmdp

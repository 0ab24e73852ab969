#pragma once

#include <vector>

#include "winmdp/model.hpp"

namespace winmdp {

// Strongly connected components of the support graph restricted to the given
// active actions (active[s] lists enabled action indices of s to consider).
// Returns component ids per state, numbered in reverse topological order
// (component 0 has no outgoing edges into other components... id order is
// only guaranteed to be a valid topological numbering of the condensation,
// edges go from higher ids to lower ids).
std::vector<int> scc_ids(const Mdp& m, const std::vector<std::vector<int>>& active,
                         int* component_count = nullptr);

struct Mec {
    std::vector<int> states;                // ascending
    std::vector<std::vector<int>> actions;  // parallel to states, ascending
};

struct MecDecomposition {
    std::vector<Mec> mecs;
    std::vector<int> membership;  // state -> mec index, -1 outside every MEC
};

// Maximal end components via iterated SCC pruning: drop actions whose support
// leaves the current component, drop states with no actions left, repeat.
// MECs are reported ordered by their smallest state index.
MecDecomposition mec_decomposition(const Mdp& m);

// Two-player reading of an MDP: the controller picks an enabled action, the
// adversary resolves the distribution to any support successor.
struct GameArena {
    const Mdp& mdp;
};

enum class Player { Controller, Adversary };

// Classical alternating attractor. Controller: from s some action keeps all
// mass in the attractor. Adversary: every action has some successor in it.
// Linear-time counter based worklist; the fixpoint is order independent.
std::vector<bool> attractor(const GameArena& arena, const std::vector<bool>& target,
                            Player player);

struct Prob01 {
    std::vector<bool> prob0;  // max reachability is exactly 0
    std::vector<bool> prob1;  // max reachability is exactly 1
    // For states with max reachability 1 and outside the target: an action
    // witnessing almost-sure reachability (-1 elsewhere).
    std::vector<int> prob1_action;
};

// Qualitative precomputation for max reachability of `target`.
Prob01 prob01_reach(const Mdp& m, const std::vector<bool>& target);

}  // namespace winmdp

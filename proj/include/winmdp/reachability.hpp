#pragma once

#include <vector>

#include "winmdp/graph.hpp"
#include "winmdp/model.hpp"

namespace winmdp {

struct ReachResult {
    std::vector<Rational> values;
    // Memoryless witness: an optimal action per state with positive value
    // outside the target, -1 on target states and value-zero states.
    std::vector<int> strategy;
};

// Exact maximal reachability probabilities. Qualitative states come from
// prob01_reach; the remaining fragment is solved by policy iteration with
// exact policy evaluation (value iteration would not terminate exactly).
// The initial policy descends a BFS distance toward decided states, so it is
// proper; improvement keeps the current action unless a strictly better one
// exists and then takes the smallest improving action index.
ReachResult max_reachability(const Mdp& m, const std::vector<bool>& target);

}  // namespace winmdp

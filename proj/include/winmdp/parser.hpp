#pragma once

#include <string>
#include <string_view>

#include "winmdp/model.hpp"

namespace winmdp {

// Text model format. '#' starts a comment, blank lines are skipped.
//
//   mdp par                      header: labeling kind (mp | par)
//   state s1 priority 1          parity states carry a natural priority
//   state s2 priority 0
//   action s1 go                 mean-payoff actions carry "weight <int>"
//     s1 1/2                     indented lines: successor and probability
//     s2 1/2
//
// Throws ModelError with the offending line number.
Mdp parse_model(std::string_view text);

// Canonical printer; parse_model(print_model(m)) reproduces m exactly.
std::string print_model(const Mdp& m);

// FNV-1a-64 over the canonical text, as fixed-width hex.
std::string model_hash(const Mdp& m);

}  // namespace winmdp

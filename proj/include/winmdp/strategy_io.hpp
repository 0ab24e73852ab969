#pragma once

#include <stdexcept>
#include <string>

#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"

namespace winmdp {

class StrategyFormatError : public std::runtime_error {
public:
    explicit StrategyFormatError(const std::string& what) : std::runtime_error(what) {}
};

// JSON strategy document: memory cell names, per-state initial cell, action
// table rows (state, memory -> action) and update rows (action, entered
// state, memory -> memory). State and action names refer to `m`; memory cell
// names must be unique. export/import round-trip exactly.
std::string export_strategy(const Mdp& m, const MealyStrategy& sigma);
MealyStrategy import_strategy(const Mdp& m, const std::string& text);

}  // namespace winmdp

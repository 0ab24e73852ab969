#pragma once

#include <json.hpp>

#include "winmdp/model.hpp"
#include "winmdp/oracle.hpp"
#include "winmdp/solver.hpp"

namespace winmdp {

// Structured result fragments shared by the CLI and the python module.
// Probabilities are always "num/den" strings in lowest terms.

nlohmann::json model_document(const Mdp& m);
nlohmann::json verdict_document(const Mdp& m, const Verdict& v);
nlohmann::json estimate_document(const Estimate& e);

std::string ec_class_name(EcClass cls);

}  // namespace winmdp

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "winmdp/mealy.hpp"
#include "winmdp/model.hpp"
#include "winmdp/solver.hpp"

namespace winmdp {

class OracleTooLarge : public std::runtime_error {
public:
    explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Exact value of a fixed pure finite-memory strategy, independent of the
// solver pipeline. DFW/FW build the product of the window unfolding with the
// strategy and analyse the resulting Markov chain (absorption probabilities,
// BSCC classification). BW builds the product with the original MDP and
// classifies each BSCC by walking its open-window graph, with no window cap.
// Throws PartialStrategy when sigma is not total on the reachable product.
Rational eval_strategy_exact(const Mdp& m, const MealyStrategy& sigma, const WindowSpec& spec,
                             int state);

// Same, for every state with an initial memory cell.
std::vector<Rational> eval_strategy_exact_all(const Mdp& m, const MealyStrategy& sigma,
                                              const WindowSpec& spec);

// Reference values by exhaustive enumeration of the pure memoryless
// strategies of the unfolding (those suffice for DFW and FW). Guarded:
// throws OracleTooLarge when the candidate count exceeds `guard`.
std::vector<Rational> brute_force_value(const Mdp& m, const WindowSpec& spec,
                                        long long guard = 10000);

struct Estimate {
    double value = 0.0;
    double half_width = 0.0;  // 99% Hoeffding confidence half width
    long long successes = 0;
    long long samples = 0;
    int horizon = 0;
    // How finite-horizon censoring was resolved for this variant.
    std::string convention;
};

// Monte Carlo estimation of the objective's probability under sigma from
// `state`. Runs are sampled on the original MDP with a counter-based splittable
// generator, so run i is reproducible from (seed, i) alone. Horizon rules:
// DFW checks every window anchor i <= horizon - lambda exactly; FW treats a
// run as success iff no anchor at or after horizon/2 is violated; BW is
// sampled as FW with probe lambda = min(default classification cap,
// horizon/2).
Estimate monte_carlo(const Mdp& m, const MealyStrategy& sigma, const WindowSpec& spec,
                     int state, long long samples, int horizon, uint64_t seed);

}  // namespace winmdp

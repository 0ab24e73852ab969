#pragma once

#include <stdexcept>
#include <vector>

#include "winmdp/rational.hpp"

namespace winmdp {

class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix() : std::runtime_error("singular linear system") {}
};

// Solves A x = b exactly. Dense fraction-free Bareiss elimination over a
// common-denominator integer lift; pivoting takes the first row (lowest
// index) with a nonzero entry in the pivot column. Throws SingularMatrix.
std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a,
                                          std::vector<Rational> b);

// Sparse row of a substochastic matrix: (column, coefficient) pairs.
using SparseRow = std::vector<std::pair<int, Rational>>;

// Solves x = P x + c for a substochastic P whose every recurrent behavior
// leaks out of the system (spectral radius < 1), e.g. the uncertain part of
// an absorbing Markov chain. Exact, via condensation of the support graph of
// P and dense Bareiss per component in topological order.
std::vector<Rational> solve_markov_system(const std::vector<SparseRow>& p,
                                          const std::vector<Rational>& c);

}  // namespace winmdp

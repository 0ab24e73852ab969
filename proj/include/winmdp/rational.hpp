#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace winmdp {

// Exact rational arithmetic. mpq_class keeps values in lowest terms with a
// positive denominator as long as assignments go through mpq_class (compound
// gmp expressions are canonicalized on materialization).
using Rational = mpq_class;

// Canonical text form "num/den", denominator always explicit: "3/4", "0/1".
inline std::string rat_str(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "num/den" or a plain integer "num". Denominator must be positive
// after sign normalization; returns nullopt on any malformed input.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace winmdp

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace koman {

using Rational = mpq_class;

// Strict probability grammar: "0", "1" or "p/q" with 0 <= p <= q, gcd(p,q) = 1.
Rational parse_probability(std::string_view text);

// Any non-negative fraction in lowest terms; used where range is checked later.
Rational parse_nonnegative_rational(std::string_view text);

// Canonical text: "0", "1", "p/q".
std::string to_string(const Rational& value);

inline bool is_probability(const Rational& value) { return value >= 0 && value <= 1; }

inline Rational half() { return Rational(1, 2); }

}  // namespace koman

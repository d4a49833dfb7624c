#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace bnmap {

// All CPT entries are stored exactly as rationals; numeric engines convert
// to their working type on demand.
using Rational = mpq_class;

// Parses "num/den" or a decimal literal ("0.25", "1", ".5") into an exact
// rational. Returns nullopt on malformed input or den == 0.
std::optional<Rational> parse_prob_token(const std::string& token);

// Canonical "num/den" form ("0" and integers keep the explicit "/1").
std::string rational_token(const Rational& q);

Rational rational_pow(const Rational& base, unsigned long exp);

// Working-type adaptor used by the templated engines.
template <class Num>
Num from_rational(const Rational& q);

template <>
inline double from_rational<double>(const Rational& q) {
  return q.get_d();
}

template <>
inline Rational from_rational<Rational>(const Rational& q) {
  return q;
}

}  // namespace bnmap

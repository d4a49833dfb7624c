#pragma once

#include <utility>

#include "bnmap/rational.hpp"

namespace bnmap {

// Nonnegative value numerator / 2^frac_bits.
struct DyadicRational {
  mpz_class numerator;
  int frac_bits = 0;

  Rational to_rational() const;
};

// Smallest multiple of 2^{-frac_bits} that is >= 2^{-v}, for rational
// v in [0,2]. Exact: reduces to an integer root. Throws std::domain_error
// if v is outside [0,2] or frac_bits < 1.
DyadicRational dyadic_pow2_up(const Rational& v, int frac_bits);

// Enclosure of 2^e for a dyadic exponent e (denominator a power of two),
// tight to about `precision_bits` fractional bits. Exact (low == up) when
// e is an integer. Computed by repeated directed square roots of 2 in
// fixed point; never uses floating point.
std::pair<Rational, Rational> pow2_interval(const Rational& e,
                                            int precision_bits);

// Smallest multiple of 2^{-frac_bits} that is >= 2^e, for dyadic e.
// Refines the interval until both endpoints round to the same grid point.
DyadicRational pow2_up_dyadic_exp(const Rational& e, int frac_bits);

// True if q is a power of two (including 1).
bool is_power_of_two(const mpz_class& q);

}  // namespace bnmap

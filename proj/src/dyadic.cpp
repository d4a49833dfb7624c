#include "bnmap/dyadic.hpp"

#include <stdexcept>

namespace bnmap {

namespace {

mpz_class pow2z(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

// ceil(r * 2^k) for nonnegative rational r
mpz_class ceil_shifted(const Rational& r, int k) {
  mpz_class num(mpq_numref(r.get_mpq_t()));
  mpz_class den(mpq_denref(r.get_mpq_t()));
  num *= pow2z(static_cast<unsigned long>(k));
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// fixed-point helpers: an integer V stands for V / 2^prec
mpz_class fp_sqrt_down(const mpz_class& v, int prec) {
  mpz_class shifted = v << prec;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
  return root;
}

mpz_class fp_sqrt_up(const mpz_class& v, int prec) {
  mpz_class shifted = v << prec;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
  if (root * root < shifted) ++root;
  return root;
}

mpz_class fp_mul_down(const mpz_class& a, const mpz_class& b, int prec) {
  return (a * b) >> prec;
}

mpz_class fp_mul_up(const mpz_class& a, const mpz_class& b, int prec) {
  mpz_class p = a * b;
  mpz_class q = p >> prec;
  if ((q << prec) != p) ++q;
  return q;
}

}  // namespace

Rational DyadicRational::to_rational() const {
  Rational r(numerator, pow2z(static_cast<unsigned long>(frac_bits)));
  r.canonicalize();
  return r;
}

bool is_power_of_two(const mpz_class& q) {
  return q > 0 && mpz_popcount(q.get_mpz_t()) == 1;
}

DyadicRational dyadic_pow2_up(const Rational& v, int frac_bits) {
  if (v < 0 || v > 2) throw std::domain_error("dyadic_pow2_up: v outside [0,2]");
  if (frac_bits < 1) throw std::domain_error("dyadic_pow2_up: frac_bits < 1");
  mpz_class p(mpq_numref(v.get_mpq_t()));
  mpz_class q(mpq_denref(v.get_mpq_t()));
  // smallest N with (N/2^k)^q >= 2^{kq-p}
  mpz_class e = frac_bits * q - p;
  DyadicRational out;
  out.frac_bits = frac_bits;
  if (e <= 0) {
    out.numerator = 1;  // 2^{e/q} <= 1, and the target is > 0
    return out;
  }
  mpz_class val;
  mpz_ui_pow_ui(val.get_mpz_t(), 2, e.get_ui());
  mpz_class root;
  int exact = mpz_root(root.get_mpz_t(), val.get_mpz_t(), q.get_ui());
  if (!exact) ++root;
  out.numerator = root;
  return out;
}

std::pair<Rational, Rational> pow2_interval(const Rational& e,
                                            int precision_bits) {
  mpz_class n(mpq_numref(e.get_mpq_t()));
  mpz_class d(mpq_denref(e.get_mpq_t()));
  if (!is_power_of_two(d))
    throw std::domain_error("pow2_interval: exponent must be dyadic");
  const int f = static_cast<int>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1;
  // e = ipart + c/2^f with 0 <= c < 2^f
  mpz_class ipart, c;
  mpz_fdiv_qr(ipart.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());

  const int prec = precision_bits;
  const mpz_class one = pow2z(static_cast<unsigned long>(prec));
  mpz_class lo = one, hi = one;        // running product, starts at 1
  mpz_class rt_lo = 2 * one, rt_hi = 2 * one;  // 2^{2^{-j}}, j = 0 first
  for (int j = 1; j <= f; ++j) {
    rt_lo = fp_sqrt_down(rt_lo, prec);
    rt_hi = fp_sqrt_up(rt_hi, prec);
    if (mpz_tstbit(c.get_mpz_t(), f - j)) {
      lo = fp_mul_down(lo, rt_lo, prec);
      hi = fp_mul_up(hi, rt_hi, prec);
    }
  }

  Rational rlo(lo, one), rhi(hi, one);
  rlo.canonicalize();
  rhi.canonicalize();
  Rational scale = (ipart >= 0)
      ? Rational(pow2z(ipart.get_ui()))
      : Rational(1, pow2z(mpz_class(-ipart).get_ui()));
  scale.canonicalize();
  return {rlo * scale, rhi * scale};
}

DyadicRational pow2_up_dyadic_exp(const Rational& e, int frac_bits) {
  if (frac_bits < 1)
    throw std::domain_error("pow2_up_dyadic_exp: frac_bits < 1");
  for (int prec = frac_bits + 32;; prec *= 2) {
    auto [lo, hi] = pow2_interval(e, prec);
    mpz_class clo = ceil_shifted(lo, frac_bits);
    mpz_class chi = ceil_shifted(hi, frac_bits);
    if (clo == chi) {
      DyadicRational out;
      out.numerator = clo;
      out.frac_bits = frac_bits;
      return out;
    }
    if (prec > (frac_bits + 64) * 64)
      throw std::runtime_error("pow2_up_dyadic_exp failed to converge");
  }
}

}  // namespace bnmap

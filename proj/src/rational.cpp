#include "bnmap/rational.hpp"

#include <cctype>

namespace bnmap {

std::optional<Rational> parse_prob_token(const std::string& token) {
  if (token.empty()) return std::nullopt;
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '.')
      return std::nullopt;
  }
  auto slash = token.find('/');
  if (slash != std::string::npos) {
    if (token.find('.') != std::string::npos) return std::nullopt;
    std::string num = token.substr(0, slash);
    std::string den = token.substr(slash + 1);
    if (num.empty() || den.empty() || den.find('/') != std::string::npos)
      return std::nullopt;
    mpz_class n(num), d(den);
    if (d == 0) return std::nullopt;
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  auto dot = token.find('.');
  if (dot == std::string::npos) {
    return Rational(mpz_class(token));
  }
  std::string intpart = token.substr(0, dot);
  std::string fracpart = token.substr(dot + 1);
  if (fracpart.find('.') != std::string::npos) return std::nullopt;
  if (intpart.empty() && fracpart.empty()) return std::nullopt;
  mpz_class num = intpart.empty() ? mpz_class(0) : mpz_class(intpart);
  mpz_class scale = 1;
  for (char c : fracpart) {
    num = num * 10 + (c - '0');
    scale *= 10;
  }
  Rational q(num, scale);
  q.canonicalize();
  return q;
}

std::string rational_token(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_pow(const Rational& base, unsigned long exp) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), mpq_numref(base.get_mpq_t()), exp);
  mpz_pow_ui(d.get_mpz_t(), mpq_denref(base.get_mpq_t()), exp);
  Rational out(n, d);
  out.canonicalize();
  return out;
}

}  // namespace bnmap

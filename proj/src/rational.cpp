#include "ovpack/rational.hpp"

#include <cctype>

namespace ovp {

Rational Rational::pow2(int e) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p, 1);
  return Rational(1, p);
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  auto bad = [&]() -> std::invalid_argument {
    return std::invalid_argument("Rational::parse: bad number '" + text + "'");
  };
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0) throw bad();
    if (den.set_str(text.substr(slash + 1), 10) != 0) throw bad();
    if (den == 0) throw bad();
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpz_class num;
    if (num.set_str(text, 10) != 0) throw bad();
    return Rational(num, mpz_class(1));
  }
  const std::string frac = text.substr(dot + 1);
  std::string digits = text.substr(0, dot) + frac;
  if (digits.empty() || digits == "-" || digits == "+") throw bad();
  for (size_t i = 0; i < frac.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(frac[i]))) throw bad();
  }
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw bad();
  mpz_class den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Rational(num, den);
}

std::string Rational::str() const {
  if (den() == 1) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

std::optional<Rational> exact_sqrt(const Rational& v) {
  if (v.sign() < 0) return std::nullopt;
  const mpz_class& n = v.num();
  const mpz_class& d = v.den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

Rational sqrt_upper(const Rational& v, const Rational& tol) {
  if (v.sign() < 0) throw std::domain_error("sqrt_upper: negative argument");
  if (tol.sign() <= 0) throw std::domain_error("sqrt_upper: tolerance must be positive");
  if (auto exact = exact_sqrt(v)) return *exact;
  // Bracket: for v <= 1, v <= sqrt(v) <= 1; for v > 1, 1 <= sqrt(v) <= v.
  Rational lo = v <= Rational(1) ? v : Rational(1);
  Rational hi = v <= Rational(1) ? Rational(1) : v;
  const Rational half(1, 2);
  while (hi - lo >= tol) {
    Rational mid = (lo + hi) * half;
    if (mid * mid >= v) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace ovp

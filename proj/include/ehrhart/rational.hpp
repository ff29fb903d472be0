#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "ehrhart/error.hpp"

namespace ehrhart {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds a reduced a/b.
inline Rational make_rational(const Integer& num, const Integer& den = 1) {
  if (den == 0) fail(Errc::bad_args, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "a/b", or "a" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Accepts "a", "-a", "a/b" with optional surrounding blanks.
inline Rational parse_rational(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) trimmed.remove_prefix(1);
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.remove_suffix(1);
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = trimmed.find('/');
  std::string num(trimmed.substr(0, slash));
  std::string den = slash == std::string_view::npos ? std::string("1") : std::string(trimmed.substr(slash + 1));
  if (!num.empty() && num.front() == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-')
    fail(Errc::parse_error, "not a rational: '" + std::string(text) + "'");
  Integer n(num), d(den);
  if (d == 0) fail(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
  return make_rational(n, d);
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return c;
}

inline Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline Rational pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return out;  // already reduced: gcd(num^e, den^e) = 1
}

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace ehrhart

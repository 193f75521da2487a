#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bwg {

/// Exact rational scalar used for payoffs, probabilities and certificates.
using Rational = mpq_class;

/// Parses "3", "-1/2" or a plain decimal such as "0.25" / "-1.5e-3" into an
/// exact rational. Decimal literals are read digit by digit, never via double.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  mpz_class mantissa = 0;
  long exponent = 0;
  bool any_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) --exponent;
      any_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("bad number '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("bad number '" + s + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + s + "'");
    }
    if (pos + 1 + used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    exponent += e;
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

/// Exact conversion of a finite double.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  return Rational(x);
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Canonical text form: "p" or "p/q".
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Smallest-denominator rational inside the closed interval [lo, hi]
/// (Stern-Brocot descent). Used to report short rational approximations.
inline Rational simplest_between(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return Rational(0);
  bool negative = hi < 0;
  if (negative) {
    Rational t = -lo;
    lo = -hi;
    hi = t;
  }
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  Rational result;
  if (Rational(fl) == lo) {
    result = Rational(fl);
  } else if (Rational(fl + 1) <= hi) {
    result = Rational(fl + 1);
  } else {
    Rational frac_lo = lo - fl, frac_hi = hi - fl;
    // 1/x maps (frac_lo, frac_hi] to [1/frac_hi, 1/frac_lo).
    Rational inner = simplest_between(Rational(1) / frac_hi, Rational(1) / frac_lo);
    result = Rational(fl) + Rational(1) / inner;
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace bwg

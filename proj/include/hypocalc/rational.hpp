#ifndef HYPOCALC_RATIONAL_HPP
#define HYPOCALC_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hypocalc {

/// Exact rational scalar. GMP handles canonicalization and arbitrary size.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Every IEEE double is a binary rational; the conversion is lossless.
inline Rational rat_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// Accepts "p", "p/q" and decimal literals like "-1.25".
Rational rat_from_string(const std::string& s);

/// "p/q", or just "p" when the denominator is 1.
std::string rat_to_string(const Rational& q);

/// Gaussian rational a + b*i, the scalar field of principal symbols.
struct CRational {
  Rational re{0};
  Rational im{0};

  CRational() = default;
  CRational(Rational r) : re(std::move(r)) {}
  CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }

  friend CRational operator+(const CRational& a, const CRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CRational operator-(const CRational& a, const CRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  CRational& operator+=(const CRational& o) { *this = *this + o; return *this; }
  CRational& operator*=(const CRational& o) { *this = *this * o; return *this; }
};

std::string crat_to_string(const CRational& c);

}  // namespace hypocalc

#endif

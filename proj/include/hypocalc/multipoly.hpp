#ifndef HYPOCALC_MULTIPOLY_HPP
#define HYPOCALC_MULTIPOLY_HPP

#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hypocalc/rational.hpp"

namespace hypocalc {

using Exponents = std::vector<int>;

/// Graded lexicographic order: total degree first, then lex.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Multivariate polynomial with exact rational coefficients in canonical form:
/// zero coefficients are never stored and terms are kept in grlex order, so
/// structural equality is semantic equality.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexLess>;

  MultiPoly() : num_vars_(0) {}
  explicit MultiPoly(int num_vars) : num_vars_(num_vars) {}

  static MultiPoly constant(int num_vars, const Rational& c);
  static MultiPoly variable(int num_vars, int index);
  static MultiPoly monomial(int num_vars, const Exponents& e, const Rational& c);

  int num_vars() const { return num_vars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Total degree; -1 for the zero polynomial.
  int degree() const;

  /// Coefficient of the given exponent (0 if absent).
  Rational coeff(const Exponents& e) const;
  /// Constant term.
  Rational constant_term() const;

  void add_term(const Exponents& e, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { a += b; return a; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { a -= b; return a; }
  friend MultiPoly operator-(const MultiPoly& a);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const Rational& c);
  friend MultiPoly operator*(const Rational& c, const MultiPoly& a) { return a * c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  MultiPoly pow(int k) const;
  MultiPoly derivative(int var) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Substitute x_i = p_i + u_i; the result lives in the centred variables u.
  MultiPoly shift(std::span<const Rational> p) const;
  /// Drop terms of total degree > K.
  MultiPoly truncate_degree(int K) const;
  /// Drop terms whose exponent in `var` exceeds `maxdeg`.
  MultiPoly truncate_var_degree(int var, int maxdeg) const;
  /// Substitute variable `var` by a polynomial in the same ring.
  MultiPoly substitute(int var, const MultiPoly& value) const;
  /// Coefficient polynomial of var^k (the var-exponent is removed).
  MultiPoly coeff_of_var_power(int var, int k) const;
  /// Reinterpret over a different variable count; trailing exponents must be 0
  /// when shrinking.
  MultiPoly with_num_vars(int new_nv) const;
  /// Substitute s_var -> -s_var.
  MultiPoly flip_var(int var) const;

  std::string to_string(const std::vector<std::string>& var_names) const;
  std::string to_string() const;  // default names

 private:
  int num_vars_;
  TermMap terms_;
};

/// Default variable names: x,y,z for up to 3 variables, else x1..xm.
std::vector<std::string> default_var_names(int num_vars);

/// Parse a polynomial expression: identifiers, integer/rational literals,
/// + - * ^ and parentheses. `var_names` supplies the admissible identifiers;
/// aliases x/y/z are accepted for x1/x2/x3 when num_vars <= 3.
MultiPoly parse_poly(const std::string& text, int num_vars);

}  // namespace hypocalc

#endif

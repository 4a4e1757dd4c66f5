#ifndef HYPOCALC_DIFFOP_HPP
#define HYPOCALC_DIFFOP_HPP

#include <map>
#include <string>
#include <vector>

#include "hypocalc/multipoly.hpp"

namespace hypocalc {

/// Polynomial with exact Gaussian-rational coefficients (re + i*im).
struct CPoly {
  MultiPoly re;
  MultiPoly im;

  CPoly() = default;
  explicit CPoly(int num_vars) : re(num_vars), im(num_vars) {}
  CPoly(MultiPoly r, MultiPoly i) : re(std::move(r)), im(std::move(i)) {}
  static CPoly constant(int num_vars, const CRational& c);

  int num_vars() const { return re.num_vars(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  CPoly conj() const { return {re, -im}; }

  friend CPoly operator+(const CPoly& a, const CPoly& b) { return {a.re + b.re, a.im + b.im}; }
  friend CPoly operator-(const CPoly& a, const CPoly& b) { return {a.re - b.re, a.im - b.im}; }
  friend CPoly operator-(const CPoly& a) { return {-a.re, -a.im}; }
  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const CPoly& a, const CPoly& b) { return a.re == b.re && a.im == b.im; }
  CPoly derivative(int var) const { return {re.derivative(var), im.derivative(var)}; }
};

/// Differential operator sum_alpha c_alpha(y) d^alpha on R^q with exact
/// complex polynomial coefficients; canonical form (coefficients to the left
/// of the derivatives, zero terms dropped).
class DiffOp {
 public:
  using Multi = std::vector<int>;

  DiffOp() : q_(0) {}
  explicit DiffOp(int q) : q_(q) {}

  static DiffOp zero(int q) { return DiffOp(q); }
  static DiffOp identity(int q);
  static DiffOp position(int q, int var);    // multiplication by y_var
  static DiffOp derivative_op(int q, int var);  // d/dy_var
  static DiffOp scalar(int q, const CRational& c);

  int q() const { return q_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Multi, CPoly>& terms() const { return terms_; }
  int max_order() const;
  int max_coeff_degree() const;

  void add_term(const Multi& alpha, const CPoly& c);

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator*(const CRational& c, const DiffOp& a);
  friend DiffOp operator*(const CPoly& f, const DiffOp& a);
  /// Operator composition (noncommutative; Leibniz on coefficients).
  friend DiffOp compose(const DiffOp& a, const DiffOp& b);
  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.q_ == b.q_ && a.terms_ == b.terms_;
  }

  /// Formal adjoint on L^2(R^q): sum (-1)^{|alpha|} d^alpha o conj(c_alpha).
  DiffOp formal_adjoint() const;
  bool is_formally_symmetric() const { return formal_adjoint() == *this; }

  /// Canonical text form "sum of c(y)*D^alpha".
  std::string to_string() const;

 private:
  int q_;
  std::map<Multi, CPoly> terms_;
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);

}  // namespace hypocalc

#endif

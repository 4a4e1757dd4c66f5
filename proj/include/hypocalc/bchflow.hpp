#ifndef HYPOCALC_BCHFLOW_HPP
#define HYPOCALC_BCHFLOW_HPP

#include <optional>
#include <span>
#include <vector>

#include "hypocalc/lie.hpp"
#include "hypocalc/polyfield.hpp"

namespace hypocalc {

/// Formal series sum_i t^i X_i with polynomial vector field coefficients,
/// truncated at a fixed order.
struct FormalSeriesField {
  int dim = 0;
  std::vector<PolyVectorField> coeffs;  // index i-1 holds X_i

  FormalSeriesField() = default;
  FormalSeriesField(int m, int order) : dim(m), coeffs(order, PolyVectorField(m)) {}

  int order() const { return static_cast<int>(coeffs.size()); }
  /// The truncation X_n(t) as a concrete vector field for a fixed t.
  PolyVectorField at(double t) const;
  PolyVectorField at(const Rational& t) const;
  bool is_zero() const;
};

FormalSeriesField series_bracket(const FormalSeriesField& A, const FormalSeriesField& B,
                                 int order);

/// Formal BCH in t X_c(M)[[t]] with the flow-composition convention,
/// collecting t-coefficients up to the given order, exactly.
FormalSeriesField bch_series(const FormalSeriesField& X, const FormalSeriesField& Y,
                             int order);

struct OrderFit {
  std::vector<double> t_grid;
  std::vector<double> errors;
  std::vector<bool> used;      // points entering the fit (floor/fail points drop)
  double slope = 0;
  double fit_residual = 0;     // rms residual of the log-log fit
  bool exactly_zero = false;   // all errors at machine floor
  bool inconclusive = false;   // fewer than 5 usable points
  int n = 0;
};

struct OrderTestOptions {
  double tol_factor = 1e-3;      // integrator tol = tol_factor * t_min^{n+2}
  double tol_floor = 1e-14;      // never push the integrator below this
  double error_floor = 5e-13;    // errors below count as machine floor
  std::vector<double> t_grid;    // default: 2^-3 .. 2^-10
};

/// Quantifies exp(X_n(t)) (exp(Y_n(t)) x) = exp(BCH(X,Y)_n(t)) x + o(t^n) by a
/// log-log slope fit; the polynomial examples realize O(t^{n+1}).
OrderFit flow_order_test(const FormalSeriesField& X, const FormalSeriesField& Y,
                         std::span<const double> x, int n,
                         const OrderTestOptions& opts = {});

/// Graded Lie basis data: an abstract graded nilpotent algebra together with
/// realizing fields, with natural(v) = sum v_i B_i a Lie homomorphism on the
/// nose up to the depth.
struct GradedLieBasis {
  GradedLieAlgebra algebra;
  std::vector<PolyVectorField> fields;

  /// Checks [B_i,B_j] = sum c_ijk B_k exactly for w_i + w_j <= depth.
  void verify() const;

  PolyVectorField natural(std::span<const double> v) const;
};

struct NewtonOptions {
  double residual_tol = 1e-10;
  int max_iterations = 50;
  double flow_tol = 1e-13;
};

struct OutsideDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Local inverse of v -> exp(natural(v)) . x near the diagonal: damped Newton
/// seeded at v0, updates restricted to the orthogonal complement of
/// ker(v -> natural(v)(x)) so the seed's kernel component is preserved.
std::vector<double> local_inverse_k(const GradedLieBasis& basis, std::span<const double> v0,
                                    std::span<const double> y, std::span<const double> x,
                                    const NewtonOptions& opts = {});

/// First component of the interpolation map: for t > 0
/// alpha_{1/t}( k( BCH(alpha_t Y, alpha_t X), exp(nat(alpha_t Y)).(exp(nat(alpha_t X)).x), x) ),
/// and BCH(Y, X) at t = 0.
std::vector<double> phi_map(const GradedLieBasis& basis, std::span<const double> Y,
                            std::span<const double> X, std::span<const double> x, double t,
                            const NewtonOptions& opts = {});

}  // namespace hypocalc

#endif

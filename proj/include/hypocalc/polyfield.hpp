#ifndef HYPOCALC_POLYFIELD_HPP
#define HYPOCALC_POLYFIELD_HPP

#include <span>
#include <string>
#include <vector>

#include "hypocalc/multipoly.hpp"

namespace hypocalc {

/// Vector field on R^m with exact polynomial coefficients.
struct PolyVectorField {
  int dim = 0;
  std::vector<MultiPoly> components;  // size dim, each in dim variables

  PolyVectorField() = default;
  explicit PolyVectorField(int m) : dim(m), components(m, MultiPoly(m)) {}

  bool is_zero() const;
  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
    return a.dim == b.dim && a.components == b.components;
  }
};

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator*(const Rational& c, const PolyVectorField& a);
PolyVectorField operator*(const MultiPoly& f, const PolyVectorField& a);

/// Lie bracket [X,Y]_j = sum_i X_i dY_j/dx_i - Y_i dX_j/dx_i, exact.
PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y);

std::vector<Rational> evaluate(const PolyVectorField& X, std::span<const Rational> p);
std::vector<double> evaluate(const PolyVectorField& X, std::span<const double> p);

/// Taylor jet of a field: components recentred at the base point and truncated.
struct Jet {
  std::vector<Rational> base_point;
  int order = 0;
  std::vector<MultiPoly> components;  // polynomials in the centred variables

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.base_point == b.base_point && a.order == b.order &&
           a.components == b.components;
  }
};

Jet jet_at(const PolyVectorField& X, std::span<const Rational> p, int K);

struct FlowOptions {
  double tol = 1e-12;          // local error per unit step
  double divergence_bound = 1e9;
  int max_steps = 2'000'000;
};

/// Thrown when the trajectory norm exceeds the divergence bound, signalling an
/// incomplete flow.
struct FlowEscapedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time-one flow of X from p via an adaptive Dormand-Prince 5(4) pair.
/// Deterministic for fixed inputs.
std::vector<double> flow_time_one(const PolyVectorField& X, std::span<const double> p,
                                  const FlowOptions& opts = {});

/// Plain-text expression grammar: variables x1..xm (x,y,z for m<=3), rational
/// literals, + - * ^, and basis symbols d/dx1..d/dxm (dx,dy,dz aliases).
/// Round trip is bit exact: parse_field(to_string(X), X.dim) == X.
PolyVectorField parse_field(const std::string& text, int dim);
std::string to_string(const PolyVectorField& X);

}  // namespace hypocalc

#endif

#ifndef HYPOCALC_NCPOLY_HPP
#define HYPOCALC_NCPOLY_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hypocalc/multipoly.hpp"
#include "hypocalc/qlinalg.hpp"

namespace hypocalc {

/// One monomial alpha(x) * X_{l1} ... X_{lk} of a noncommutative operator
/// polynomial; the scalar carries the exact complex part.
struct NCMonomial {
  CRational scalar{Rational(1)};
  MultiPoly coeff;                // polynomial in the base coordinates
  std::vector<int> letters;       // generator indices, composition order
};

/// Noncommutative polynomial presenting a differential operator
/// D = P(X_1,...,X_n) over weighted generators.
struct NCPolynomial {
  int num_gens = 0;
  int base_dim = 0;
  std::vector<NCMonomial> monomials;

  int weighted_degree(const NCMonomial& mono, const std::vector<int>& weights) const;
};

/// Max weighted degree over monomials with nonzero coefficient; nullopt for
/// the empty polynomial.
std::optional<int> weighted_order(const NCPolynomial& P, const std::vector<int>& weights);

/// Maximal weighted-homogeneous part with coefficients evaluated at p.
struct PrincipalPart {
  int order = 0;
  struct Mono {
    CRational value;
    std::vector<int> letters;
  };
  std::vector<Mono> monomials;
  bool is_zero() const { return monomials.empty(); }
};

PrincipalPart principal_part(const NCPolynomial& P, const std::vector<int>& weights,
                             std::span<const Rational> p);
/// Principal part padded to a prescribed order (monomials of lower weighted
/// degree drop out; the paper's presentation comparisons need this).
PrincipalPart principal_part_at_order(const NCPolynomial& P, const std::vector<int>& weights,
                                      std::span<const Rational> p, int order);

/// Character evaluation: letter l maps to i<xi, class(l)>; monomials multiply
/// as scalars. `letter_classes[l]` is the coordinate vector of [X_l]_p in the
/// osculating basis (zero class drops the monomial).
std::complex<double> symbol_character(const PrincipalPart& PP,
                                      const std::vector<std::vector<double>>& letter_classes,
                                      std::span<const double> xi);

/// Exact variant over the Gaussian rationals.
CRational symbol_character_exact(const PrincipalPart& PP,
                                 const std::vector<QVector>& letter_classes,
                                 const QVector& xi);

/// Parse "X1*X1 - (x)*X2 + 3i*X3^2": generator tokens X1..Xn, coefficients as
/// polynomial expressions in the base coordinates, juxtaposition or '*' for
/// composition, '^' for letter powers, 'i' for the imaginary unit.
NCPolynomial parse_ncpoly(const std::string& text, int num_gens, int base_dim);
std::string to_string(const NCPolynomial& P);

}  // namespace hypocalc

#endif

#ifndef HYPOCALC_REPR_HPP
#define HYPOCALC_REPR_HPP

#include <string>
#include <vector>

#include "hypocalc/diffop.hpp"
#include "hypocalc/lie.hpp"
#include "hypocalc/ncpoly.hpp"

namespace hypocalc {

/// First-order descriptor sum_j a_j(y) d/dy_j + i b(y) with real polynomial
/// coefficients; the differentiated-representation image of a basis vector.
struct FirstOrderOp {
  std::vector<MultiPoly> a;  // size q, polynomials in q variables
  MultiPoly b;

  DiffOp as_diffop() const;
};

/// Irreducible unitary representation attached to a linear functional by the
/// orbit method, realized on Schwartz functions of q = dim(orbit)/2 variables.
/// The construction is verified before returning: commutator identities and
/// formal skew-adjointness hold symbolically.
struct InducedRep {
  int q = 0;
  QVector ell;
  std::vector<QVector> polarization;  // basis of the polarizing subalgebra
  std::vector<int> complement;        // coexponential directions e_{complement[j]}
  std::vector<FirstOrderOp> actions;  // action of each basis vector

  DiffOp action_of(const QVector& coords) const;
};

/// Vergne polarization through the flag of ideals obtained by sorting the
/// basis by decreasing weight; fully algorithmic for graded nilpotent
/// algebras.
InducedRep induce_representation(const GradedLieAlgebra& g, const QVector& ell);

struct SymbolRealization {
  DiffOp op;
  std::vector<int> dropped_monomials;  // indices with zero fiber class
};

/// Realize a principal part as a differential operator: each letter maps to
/// its fiber class, classes act through the representation, monomials compose.
SymbolRealization realize_symbol(const PrincipalPart& PP, const InducedRep& rep,
                                 const std::vector<QVector>& letter_classes);

}  // namespace hypocalc

#endif

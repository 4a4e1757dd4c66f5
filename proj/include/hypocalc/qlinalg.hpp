#ifndef HYPOCALC_QLINALG_HPP
#define HYPOCALC_QLINALG_HPP

#include <optional>
#include <span>
#include <vector>

#include "hypocalc/rational.hpp"

namespace hypocalc {

using QVector = std::vector<Rational>;

/// Incremental row space over Q kept in reduced echelon form. Supports exact
/// rank, membership and dimension queries at desk scale.
class QRowSpace {
 public:
  explicit QRowSpace(int ncols) : ncols_(ncols) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<QVector>& rows() const { return rows_; }

  /// Reduce v against the current rows; returns the remainder.
  QVector reduce(QVector v) const;

  /// Add a vector; returns true if it enlarged the space.
  bool add(const QVector& v);

  bool contains(const QVector& v) const;

 private:
  int ncols_;
  std::vector<QVector> rows_;   // echelon rows, each normalized to pivot 1
  std::vector<int> pivots_;     // pivot column per row
};

/// Solve sum_k c_k * cols[k] = target exactly. Returns c, or nullopt if the
/// system is inconsistent. When the columns are dependent one solution is
/// returned (free coefficients set to zero).
std::optional<QVector> solve_combination(const std::vector<QVector>& cols,
                                         const QVector& target);

/// Nullspace basis of the matrix with the given rows (acting on the right:
/// vectors v with rows . v = 0).
std::vector<QVector> nullspace(const std::vector<QVector>& rows, int ncols);

/// Exact inverse of a square matrix; nullopt when singular.
std::optional<std::vector<QVector>> invert(const std::vector<QVector>& m);

}  // namespace hypocalc

#endif

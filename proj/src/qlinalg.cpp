#include "hypocalc/qlinalg.hpp"

#include <stdexcept>

namespace hypocalc {

QVector QRowSpace::reduce(QVector v) const {
  if (static_cast<int>(v.size()) != ncols_)
    throw std::invalid_argument("QRowSpace: arity mismatch");
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational& c = v[pivots_[r]];
    if (c == 0) continue;
    Rational f = c;  // rows are pivot-normalized
    for (int j = 0; j < ncols_; ++j)
      if (rows_[r][j] != 0) v[j] -= f * rows_[r][j];
  }
  return v;
}

bool QRowSpace::add(const QVector& v) {
  QVector w = reduce(v);
  int p = -1;
  for (int j = 0; j < ncols_; ++j)
    if (w[j] != 0) { p = j; break; }
  if (p < 0) return false;
  Rational inv = w[p];
  for (int j = 0; j < ncols_; ++j) w[j] /= inv;
  // back-substitute into existing rows to keep reduced form
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rational& c = rows_[r][p];
    if (c == 0) continue;
    Rational f = c;
    for (int j = 0; j < ncols_; ++j)
      if (w[j] != 0) rows_[r][j] -= f * w[j];
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  return true;
}

bool QRowSpace::contains(const QVector& v) const {
  QVector w = reduce(v);
  for (const auto& x : w)
    if (x != 0) return false;
  return true;
}

std::optional<QVector> solve_combination(const std::vector<QVector>& cols,
                                         const QVector& target) {
  const int n = static_cast<int>(target.size());
  const int k = static_cast<int>(cols.size());
  for (const auto& c : cols)
    if (static_cast<int>(c.size()) != n)
      throw std::invalid_argument("solve_combination: arity mismatch");

  // Gaussian elimination on the n x (k+1) augmented matrix.
  std::vector<QVector> m(n, QVector(k + 1, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) m[i][j] = cols[j][i];
    m[i][k] = target[i];
  }
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < k && row < n; ++col) {
    int pr = -1;
    for (int i = row; i < n; ++i)
      if (m[i][col] != 0) { pr = i; break; }
    if (pr < 0) continue;
    std::swap(m[row], m[pr]);
    Rational inv = m[row][col];
    for (int j = col; j <= k; ++j) m[row][j] /= inv;
    for (int i = 0; i < n; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (int j = col; j <= k; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  // inconsistency: a zero row with nonzero rhs
  for (int i = row; i < n; ++i)
    if (m[i][k] != 0) return std::nullopt;

  QVector c(k, Rational(0));
  for (int r = 0; r < row; ++r) c[pivot_col_of_row[r]] = m[r][k];
  return c;
}

std::vector<QVector> nullspace(const std::vector<QVector>& rows, int ncols) {
  std::vector<QVector> m = rows;
  const int nrows = static_cast<int>(m.size());
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int pr = -1;
    for (int i = row; i < nrows; ++i)
      if (m[i][col] != 0) { pr = i; break; }
    if (pr < 0) continue;
    std::swap(m[row], m[pr]);
    Rational inv = m[row][col];
    for (int j = col; j < ncols; ++j) m[row][j] /= inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (int j = col; j < ncols; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;

  std::vector<QVector> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(ncols, Rational(0));
    v[free] = 1;
    for (int r = 0; r < row; ++r) v[pivot_col_of_row[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<QVector>> invert(const std::vector<QVector>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<QVector> a = m;
  std::vector<QVector> inv(n, QVector(n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n)
      throw std::invalid_argument("invert: matrix not square");
    inv[i][i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int pr = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col] != 0) { pr = i; break; }
    if (pr < 0) return std::nullopt;
    std::swap(a[col], a[pr]);
    std::swap(inv[col], inv[pr]);
    Rational p = a[col][col];
    for (int j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (int j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace hypocalc

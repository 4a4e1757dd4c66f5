#ifndef HYPOCALC_LIE_HPP
#define HYPOCALC_LIE_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypocalc/multipoly.hpp"
#include "hypocalc/qlinalg.hpp"

namespace hypocalc {

/// Scalar-by-rational scaling for the ring parameters used in bracket and
/// BCH evaluation (Rational, double, MultiPoly).
inline Rational scale_rat(const Rational& x, const Rational& c) { return x * c; }
inline double scale_rat(double x, const Rational& c) { return x * to_double(c); }
inline MultiPoly scale_rat(const MultiPoly& x, const Rational& c) { return x * c; }

/// Graded nilpotent Lie algebra given by exact structure constants
/// [e_i,e_j] = sum_k c[i][j][k] e_k, with c[i][j][k] = 0 unless
/// w_k = w_i + w_j. Doubles as the simply connected group via truncated BCH.
class GradedLieAlgebra {
 public:
  struct Entry {
    int k;
    Rational c;
  };

  GradedLieAlgebra(int dim, std::vector<int> weights, int depth);

  /// Set [e_i,e_j] = sum over (k, c); fills the antisymmetric counterpart.
  void set_bracket(int i, int j, const std::vector<Entry>& entries);

  /// Validates antisymmetry, the weight grading and the Jacobi identity
  /// exactly; throws on violation.
  void validate() const;

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<Entry>& bracket_entries(int i, int j) const;

  bool is_abelian() const;

  /// Coordinates of [x, y], bilinear over any commutative ring scalar that
  /// supports S+S, S*S and S*Rational (Rational, double, MultiPoly).
  template <class S>
  std::vector<S> bracket_coords(std::span<const S> x, std::span<const S> y,
                                const S& zero) const {
    std::vector<S> out(dim_, zero);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        if (i == j) continue;
        auto it = sc_.find(key(i, j));
        if (it == sc_.end()) continue;
        S prod = x[i] * y[j];
        for (const auto& [k, c] : it->second) out[k] = out[k] + scale_rat(prod, c);
      }
    return out;
  }

 private:
  static long key(int i, int j) { return static_cast<long>(i) * 100000 + j; }
  int dim_;
  std::vector<int> weights_;
  int depth_;
  std::map<long, std::vector<Entry>> sc_;
  std::vector<Entry> empty_;
};

/// One summand of the truncated BCH series: a word in two letters (0 = first
/// argument, 1 = second) evaluated as a right-nested bracket, with its
/// rational coefficient.
struct BchTerm {
  std::vector<int> letters;
  Rational coeff;
};

/// Truncated BCH table for the flow composition convention, i.e. the Z with
/// exp(Z) = exp(X) after exp(Y) as time-one flows of vector fields:
///   Z = X + Y - 1/2 [X,Y] + 1/12 [X,[X,Y]] + 1/12 [Y,[Y,X]] + ...
/// Terms of total degree <= max_degree; letter 0 stands for X, letter 1 for Y.
const std::vector<BchTerm>& bch_table(int max_degree);

/// BCH product in a graded nilpotent algebra (exact for rational coords).
template <class S>
std::vector<S> bch(const GradedLieAlgebra& g, std::span<const S> X, std::span<const S> Y,
                   const S& zero) {
  const auto& table = bch_table(g.depth());
  std::vector<S> acc(g.dim(), zero);
  for (const auto& term : table) {
    // right-nested: [l0, [l1, ... [l_{p-2}, l_{p-1}] ...]]
    std::vector<S> cur = (term.letters.back() == 0)
                             ? std::vector<S>(X.begin(), X.end())
                             : std::vector<S>(Y.begin(), Y.end());
    for (int i = static_cast<int>(term.letters.size()) - 2; i >= 0; --i) {
      std::span<const S> left = term.letters[i] == 0 ? X : Y;
      cur = g.bracket_coords(left, std::span<const S>(cur), zero);
    }
    for (int k = 0; k < g.dim(); ++k) acc[k] = acc[k] + scale_rat(cur[k], term.coeff);
  }
  return acc;
}

QVector bch(const GradedLieAlgebra& g, const QVector& X, const QVector& Y);
std::vector<double> bch(const GradedLieAlgebra& g, const std::vector<double>& X,
                        const std::vector<double>& Y);

/// Graded dilation: coordinate i scales by lambda^{w_i}. The dual action uses
/// the same exponents so that <dilate_dual(l,xi), X> = <xi, dilate(l,X)>.
QVector dilate(const GradedLieAlgebra& g, const Rational& lambda, const QVector& X);
std::vector<double> dilate(const GradedLieAlgebra& g, double lambda,
                           const std::vector<double>& X);
std::vector<double> dilate_dual(const GradedLieAlgebra& g, double lambda,
                                const std::vector<double>& xi);
QVector dilate_dual(const GradedLieAlgebra& g, const Rational& lambda, const QVector& xi);

/// ad(a) as a dim x dim matrix (column k = [a, e_k]).
std::vector<QVector> ad_matrix(const GradedLieAlgebra& g, const QVector& a);
/// Ad(exp a) = exp(ad a), a finite sum for nilpotent algebras.
std::vector<QVector> Ad_exp(const GradedLieAlgebra& g, const QVector& a);

/// Coadjoint action Ad*(exp a) xi = xi o Ad(exp a)^{-1}, exact.
QVector coadjoint(const GradedLieAlgebra& g, const QVector& a, const QVector& xi);
std::vector<double> coadjoint(const GradedLieAlgebra& g, const std::vector<double>& a,
                              const std::vector<double>& xi);

/// Free graded nilpotent Lie algebra on weighted generators, truncated at
/// weighted degree <= depth, with Hall-basis labels.
struct FreeNilpotent {
  GradedLieAlgebra algebra;
  std::vector<std::string> labels;               // bracket-word label per basis element
  std::vector<std::vector<int>> generator_words; // foliated letters per basis element
};

FreeNilpotent free_nilpotent(const std::vector<int>& generator_weights, int depth,
                             int dim_cap = 500);

}  // namespace hypocalc

#endif

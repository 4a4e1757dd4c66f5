#include "hypocalc/lie.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hypocalc {

GradedLieAlgebra::GradedLieAlgebra(int dim, std::vector<int> weights, int depth)
    : dim_(dim), weights_(std::move(weights)), depth_(depth) {
  if (static_cast<int>(weights_.size()) != dim_)
    throw std::invalid_argument("weights size must equal dim");
  for (int w : weights_)
    if (w < 1 || w > depth_) throw std::invalid_argument("weights must lie in [1, depth]");
}

void GradedLieAlgebra::set_bracket(int i, int j, const std::vector<Entry>& entries) {
  if (i == j) throw std::invalid_argument("set_bracket: i == j");
  std::vector<Entry> cleaned;
  for (const auto& e : entries) {
    if (e.c == 0) continue;
    if (weights_[e.k] != weights_[i] + weights_[j])
      throw std::invalid_argument("structure constant violates the grading");
    cleaned.push_back(e);
  }
  std::vector<Entry> flipped;
  for (const auto& e : cleaned) flipped.push_back({e.k, -e.c});
  if (cleaned.empty()) {
    sc_.erase(key(i, j));
    sc_.erase(key(j, i));
  } else {
    sc_[key(i, j)] = cleaned;
    sc_[key(j, i)] = flipped;
  }
}

const std::vector<GradedLieAlgebra::Entry>& GradedLieAlgebra::bracket_entries(int i,
                                                                              int j) const {
  auto it = sc_.find(key(i, j));
  return it == sc_.end() ? empty_ : it->second;
}

bool GradedLieAlgebra::is_abelian() const { return sc_.empty(); }

void GradedLieAlgebra::validate() const {
  const Rational zero(0);
  auto basis = [&](int i) {
    QVector v(dim_, zero);
    v[i] = 1;
    return v;
  };
  // antisymmetry is enforced structurally; check Jacobi exactly
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        QVector ei = basis(i), ej = basis(j), ek = basis(k);
        auto br = [&](const QVector& a, const QVector& b) {
          return bracket_coords<Rational>(a, b, zero);
        };
        QVector s = br(ei, br(ej, ek));
        QVector t = br(ej, br(ek, ei));
        QVector u = br(ek, br(ei, ej));
        for (int l = 0; l < dim_; ++l)
          if (s[l] + t[l] + u[l] != 0)
            throw std::logic_error("Jacobi identity fails for structure constants");
      }
}

namespace {

// Dynkin's formula for the standard convention log(exp A exp B); the flow
// composition convention is obtained by swapping the arguments.
std::map<std::vector<int>, Rational> dynkin_words(int max_degree) {
  std::map<std::vector<int>, Rational> acc;
  // blocks (r_i, s_i) with r_i + s_i >= 1
  std::vector<std::pair<int, int>> blocks;
  std::vector<std::pair<int, int>> all_blocks;
  for (int r = 0; r <= max_degree; ++r)
    for (int s = 0; s <= max_degree - r; ++s)
      if (r + s >= 1) all_blocks.push_back({r, s});

  mpz_class factorial[16];
  factorial[0] = 1;
  for (int i = 1; i < 16; ++i) factorial[i] = factorial[i - 1] * i;

  std::function<void(int)> rec = [&](int degree_left) {
    if (!blocks.empty()) {
      const int k = static_cast<int>(blocks.size());
      auto [rk, sk] = blocks.back();
      // the word [A^{r1}B^{s1}...A^{rk}B^{sk}] vanishes unless s_k <= 1, and
      // when s_k = 0 unless r_k = 1
      if (sk <= 1 && !(sk == 0 && rk != 1)) {
        int n = 0;
        mpz_class denom_fact = 1;
        for (auto [r, s] : blocks) {
          n += r + s;
          denom_fact *= factorial[r] * factorial[s];
        }
        std::vector<int> letters;
        for (int b = 0; b < k; ++b) {
          auto [r, s] = blocks[b];
          int s_eff = (b == k - 1 && sk == 1) ? 0 : s;
          int r_eff = r;
          if (b == k - 1 && sk == 0) r_eff = 0;  // lone final A
          for (int t = 0; t < r_eff; ++t) letters.push_back(0);
          for (int t = 0; t < s_eff; ++t) letters.push_back(1);
        }
        letters.push_back(sk == 1 ? 1 : 0);
        // degree-1 words contribute A or B directly; nested brackets with a
        // repeated final pair [X,X] are handled by evaluation (nonzero here).
        Rational coeff(((k - 1) % 2 == 0) ? 1 : -1, k);
        coeff /= Rational(n);
        coeff /= Rational(denom_fact);
        coeff.canonicalize();
        auto [it, inserted] = acc.emplace(letters, coeff);
        if (!inserted) it->second += coeff;
      }
    }
    for (auto [r, s] : all_blocks) {
      if (r + s > degree_left) continue;
      blocks.push_back({r, s});
      rec(degree_left - r - s);
      blocks.pop_back();
    }
  };

  rec(max_degree);

  // prune exact zeros
  for (auto it = acc.begin(); it != acc.end();) {
    if (it->second == 0) it = acc.erase(it);
    else ++it;
  }
  return acc;
}

}  // namespace

const std::vector<BchTerm>& bch_table(int max_degree) {
  static std::mutex mu;
  static std::map<int, std::vector<BchTerm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_degree);
  if (it != cache.end()) return it->second;

  auto words = dynkin_words(max_degree);
  std::vector<BchTerm> table;
  for (auto& [letters, coeff] : words) {
    // flow convention = standard Dynkin with swapped arguments: a letter A in
    // log(exp A exp B) becomes Y, letter B becomes X.
    std::vector<int> swapped;
    swapped.reserve(letters.size());
    for (int l : letters) swapped.push_back(l == 0 ? 1 : 0);
    table.push_back({std::move(swapped), coeff});
  }
  return cache.emplace(max_degree, std::move(table)).first->second;
}

QVector bch(const GradedLieAlgebra& g, const QVector& X, const QVector& Y) {
  return bch<Rational>(g, X, Y, Rational(0));
}

std::vector<double> bch(const GradedLieAlgebra& g, const std::vector<double>& X,
                        const std::vector<double>& Y) {
  return bch<double>(g, X, Y, 0.0);
}

QVector dilate(const GradedLieAlgebra& g, const Rational& lambda, const QVector& X) {
  QVector out(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    Rational f = 1;
    for (int k = 0; k < g.weights()[i]; ++k) f *= lambda;
    out[i] = f * X[i];
  }
  return out;
}

std::vector<double> dilate(const GradedLieAlgebra& g, double lambda,
                           const std::vector<double>& X) {
  std::vector<double> out(g.dim());
  for (int i = 0; i < g.dim(); ++i) out[i] = std::pow(lambda, g.weights()[i]) * X[i];
  return out;
}

std::vector<double> dilate_dual(const GradedLieAlgebra& g, double lambda,
                                const std::vector<double>& xi) {
  return dilate(g, lambda, xi);
}

QVector dilate_dual(const GradedLieAlgebra& g, const Rational& lambda, const QVector& xi) {
  return dilate(g, lambda, xi);
}

std::vector<QVector> ad_matrix(const GradedLieAlgebra& g, const QVector& a) {
  const int d = g.dim();
  std::vector<QVector> m(d, QVector(d, Rational(0)));
  for (int k = 0; k < d; ++k) {
    QVector ek(d, Rational(0));
    ek[k] = 1;
    QVector col = g.bracket_coords<Rational>(a, ek, Rational(0));
    for (int i = 0; i < d; ++i) m[i][k] = col[i];
  }
  return m;
}

namespace {

std::vector<QVector> mat_mul(const std::vector<QVector>& a, const std::vector<QVector>& b) {
  const int n = static_cast<int>(a.size());
  std::vector<QVector> r(n, QVector(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < n; ++j)
        if (b[k][j] != 0) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

}  // namespace

std::vector<QVector> Ad_exp(const GradedLieAlgebra& g, const QVector& a) {
  const int d = g.dim();
  std::vector<QVector> result(d, QVector(d, Rational(0)));
  for (int i = 0; i < d; ++i) result[i][i] = 1;
  std::vector<QVector> power = result;
  auto ad = ad_matrix(g, a);
  Rational fact = 1;
  for (int k = 1; k <= g.depth(); ++k) {
    power = mat_mul(power, ad);
    fact *= k;
    bool all_zero = true;
    for (int i = 0; i < d && all_zero; ++i)
      for (int j = 0; j < d; ++j)
        if (power[i][j] != 0) { all_zero = false; break; }
    if (all_zero) break;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (power[i][j] != 0) result[i][j] += power[i][j] / fact;
  }
  return result;
}

QVector coadjoint(const GradedLieAlgebra& g, const QVector& a, const QVector& xi) {
  // <Ad*(exp a) xi, Z> = <xi, Ad(exp a)^{-1} Z> = <xi, exp(-ad a) Z>
  QVector neg(a.size());
  for (size_t i = 0; i < a.size(); ++i) neg[i] = -a[i];
  auto m = Ad_exp(g, neg);
  const int d = g.dim();
  QVector out(d, Rational(0));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      if (m[j][k] != 0) out[k] += xi[j] * m[j][k];
  return out;
}

std::vector<double> coadjoint(const GradedLieAlgebra& g, const std::vector<double>& a,
                              const std::vector<double>& xi) {
  QVector aq(a.size()), xq(xi.size());
  for (size_t i = 0; i < a.size(); ++i) aq[i] = rat_from_double(a[i]);
  for (size_t i = 0; i < xi.size(); ++i) xq[i] = rat_from_double(xi[i]);
  QVector out = coadjoint(g, aq, xq);
  std::vector<double> od(out.size());
  for (size_t i = 0; i < out.size(); ++i) od[i] = to_double(out[i]);
  return od;
}

// ---------------------------------------------------------------------------
// Free nilpotent Lie algebra via a Hall set.
// Convention: a tree [u,v] is a Hall element iff u < v (order: degree, then
// creation index) and, when v = [v1,v2], v1 <= u. With generators a < b this
// yields a, b, [a,b], [a,[a,b]], [b,[a,b]], ...
// ---------------------------------------------------------------------------

namespace {

struct HallTree {
  int left = -1, right = -1;  // -1 for generators
  int gen = -1;
  int degree = 1;   // number of letters
  int weight = 1;   // weighted degree
};

struct HallBuilder {
  std::vector<int> gen_weights;
  int depth;
  int cap;
  std::vector<HallTree> elems;
  // product expansions in the Hall basis, memoized
  std::map<std::pair<int, int>, std::map<int, Rational>> memo;

  bool is_hall_pair(int u, int v) const {
    if (!(u < v)) return false;
    const auto& tv = elems[v];
    if (tv.gen >= 0) return true;
    return tv.left <= u;
  }

  void build() {
    for (size_t i = 0; i < gen_weights.size(); ++i) {
      HallTree t;
      t.gen = static_cast<int>(i);
      t.degree = 1;
      t.weight = gen_weights[i];
      if (t.weight <= depth) elems.push_back(t);
    }
    // generate degree by degree; ordering is by creation, degrees ascending
    for (int d = 2; d <= depth; ++d) {
      size_t count_before = elems.size();
      for (size_t v = 0; v < count_before; ++v) {
        for (size_t u = 0; u < count_before; ++u) {
          if (elems[u].degree + elems[v].degree != d) continue;
          if (!is_hall_pair(static_cast<int>(u), static_cast<int>(v))) continue;
          int w = elems[u].weight + elems[v].weight;
          if (w > depth) continue;
          HallTree t;
          t.left = static_cast<int>(u);
          t.right = static_cast<int>(v);
          t.degree = d;
          t.weight = w;
          elems.push_back(t);
          if (static_cast<int>(elems.size()) > cap)
            throw std::runtime_error("free algebra too large (dimension cap exceeded)");
        }
      }
    }
  }

  std::map<int, Rational> scale(const std::map<int, Rational>& e, const Rational& c) {
    std::map<int, Rational> r;
    for (auto& [k, v] : e) {
      Rational p = v * c;
      if (p != 0) r[k] = p;
    }
    return r;
  }

  void accumulate(std::map<int, Rational>& into, const std::map<int, Rational>& from,
                  const Rational& c) {
    for (auto& [k, v] : from) {
      Rational p = v * c;
      if (p == 0) continue;
      auto [it, ins] = into.emplace(k, p);
      if (!ins) {
        it->second += p;
        if (it->second == 0) into.erase(it);
      }
    }
  }

  // expansion of [B_u, B_v] in the Hall basis
  std::map<int, Rational> product(int u, int v) {
    if (u == v) return {};
    if (u > v) return scale(product(v, u), Rational(-1));
    auto it = memo.find({u, v});
    if (it != memo.end()) return it->second;

    std::map<int, Rational> result;
    int combined_weight = elems[u].weight + elems[v].weight;
    if (combined_weight > depth) {
      memo[{u, v}] = result;
      return result;
    }
    if (is_hall_pair(u, v)) {
      // find the Hall element [u,v]
      for (size_t t = 0; t < elems.size(); ++t)
        if (elems[t].left == u && elems[t].right == v) {
          result[static_cast<int>(t)] = 1;
          break;
        }
      // absent means truncated by weight (handled above) -- should not happen
      memo[{u, v}] = result;
      return result;
    }
    // u < v, v = [v1, v2], v1 > u (Hall condition failed):
    // [u,[v1,v2]] = [[u,v1],v2] + [v1,[u,v2]]
    const auto& tv = elems[v];
    auto uv1 = product(u, tv.left);
    for (auto& [h, c] : uv1) accumulate(result, product(h, tv.right), c);
    auto uv2 = product(u, tv.right);
    for (auto& [h, c] : uv2) accumulate(result, product(tv.left, h), c);
    memo[{u, v}] = result;
    return result;
  }

  std::string label(int t) const {
    const auto& e = elems[t];
    if (e.gen >= 0) return "g" + std::to_string(e.gen + 1);
    return "[" + label(e.left) + "," + label(e.right) + "]";
  }

  std::vector<int> word(int t) const {
    const auto& e = elems[t];
    if (e.gen >= 0) return {e.gen};
    auto w = word(e.left);
    auto r = word(e.right);
    w.insert(w.end(), r.begin(), r.end());
    return w;
  }
};

}  // namespace

FreeNilpotent free_nilpotent(const std::vector<int>& generator_weights, int depth,
                             int dim_cap) {
  for (int w : generator_weights)
    if (w < 1) throw std::invalid_argument("generator weights must be >= 1");
  HallBuilder hb{generator_weights, depth, dim_cap, {}, {}};
  hb.build();

  const int d = static_cast<int>(hb.elems.size());
  std::vector<int> weights(d);
  for (int i = 0; i < d; ++i) weights[i] = hb.elems[i].weight;
  GradedLieAlgebra g(d, weights, depth);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      auto expr = hb.product(i, j);
      std::vector<GradedLieAlgebra::Entry> entries;
      for (auto& [k, c] : expr) entries.push_back({k, c});
      g.set_bracket(i, j, entries);
    }
  g.validate();

  FreeNilpotent out{std::move(g), {}, {}};
  for (int i = 0; i < d; ++i) {
    out.labels.push_back(hb.label(i));
    out.generator_words.push_back(hb.word(i));
  }
  return out;
}

}  // namespace hypocalc

#include "hypocalc/filtration.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hypocalc {

void WeightedGenerators::check() const {
  if (fields.empty()) throw std::invalid_argument("no generators supplied");
  if (fields.size() != weights.size())
    throw std::invalid_argument("generators and weights must have equal length");
  const int m = fields.front().dim;
  for (const auto& f : fields)
    if (f.dim != m) throw std::invalid_argument("generators live on different spaces");
  int maxw = 0;
  for (int w : weights) {
    if (w < 1) throw std::invalid_argument("weights must be positive");
    maxw = std::max(maxw, w);
  }
  if (depth < maxw) throw std::invalid_argument("depth must be >= max weight");
}

std::string BracketWord::label(const WeightedGenerators& gen) const {
  (void)gen;
  if (frame >= 0) return "d/dx" + std::to_string(frame + 1);
  std::function<std::string(size_t)> rec = [&](size_t i) -> std::string {
    std::string head = "X" + std::to_string(letters[i] + 1);
    if (i + 1 == letters.size()) return head;
    return "[" + head + "," + rec(i + 1) + "]";
  };
  return rec(0);
}

std::vector<const BracketWord*> Filtration::level(int j) const {
  std::vector<const BracketWord*> out;
  for (const auto& w : words) {
    if (w.frame >= 0) {
      if (j >= depth && top_full) out.push_back(&w);
    } else if (w.weight <= j) {
      out.push_back(&w);
    }
  }
  return out;
}

namespace {

// Flatten fields into coefficient vectors over a shared monomial universe so
// that constant-coefficient linear dependence becomes exact linear algebra.
using Universe = std::map<std::pair<int, Exponents>, int>;

Universe build_universe(const std::vector<const PolyVectorField*>& fields) {
  Universe u;
  for (const auto* f : fields)
    for (int c = 0; c < f->dim; ++c)
      for (const auto& [e, coef] : f->components[c].terms())
        u.emplace(std::make_pair(c, e), 0);
  int idx = 0;
  for (auto& [k, v] : u) v = idx++;
  return u;
}

QVector flatten(const PolyVectorField& f, const Universe& u) {
  QVector v(u.size(), Rational(0));
  for (int c = 0; c < f.dim; ++c)
    for (const auto& [e, coef] : f.components[c].terms()) {
      auto it = u.find({c, e});
      if (it != u.end()) v[it->second] = coef;
    }
  return v;
}

bool dependent_on(const std::vector<BracketWord>& kept, const PolyVectorField& cand) {
  std::vector<const PolyVectorField*> all;
  for (const auto& w : kept) all.push_back(&w.field);
  all.push_back(&cand);
  Universe u = build_universe(all);
  std::vector<QVector> cols;
  for (const auto& w : kept) cols.push_back(flatten(w.field, u));
  return solve_combination(cols, flatten(cand, u)).has_value();
}

}  // namespace

Filtration generate_filtration(const WeightedGenerators& gen, const FiltrationOptions& opts) {
  gen.check();
  const int m = gen.dim();
  const int n = static_cast<int>(gen.fields.size());

  Filtration out;
  out.depth = gen.depth;
  std::vector<BracketWord> frontier;  // words kept at the previous length

  // length-1 words
  std::vector<std::pair<int, int>> order(n);  // (weight, index), stable by index
  for (int i = 0; i < n; ++i) order[i] = {gen.weights[i], i};
  std::stable_sort(order.begin(), order.end(),
                   [](auto a, auto b) { return a.first < b.first; });
  for (auto [w, i] : order) {
    if (w > gen.depth) continue;
    BracketWord bw{{i}, w, gen.fields[i], -1};
    if (bw.field.is_zero()) continue;
    if (dependent_on(out.words, bw.field)) continue;
    out.words.push_back(bw);
    frontier.push_back(bw);
  }

  // longer words, weight-bounded; [X_i, W] keeps the left-nested shape.
  // Candidates of each length are pruned in (weight, letters) order so the
  // kept representative is the lexicographically preferred one.
  while (!frontier.empty()) {
    std::vector<BracketWord> candidates;
    for (const auto& w : frontier) {
      for (int i = 0; i < n; ++i) {
        int wt = w.weight + gen.weights[i];
        if (wt > gen.depth) continue;
        BracketWord bw;
        bw.letters.reserve(w.letters.size() + 1);
        bw.letters.push_back(i);
        bw.letters.insert(bw.letters.end(), w.letters.begin(), w.letters.end());
        bw.weight = wt;
        bw.field = bracket(gen.fields[i], w.field);
        if (bw.field.is_zero()) continue;
        candidates.push_back(std::move(bw));
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const BracketWord& a, const BracketWord& b) {
                       if (a.weight != b.weight) return a.weight < b.weight;
                       return a.letters < b.letters;
                     });
    std::vector<BracketWord> next;
    for (auto& bw : candidates) {
      if (dependent_on(out.words, bw.field)) continue;
      out.words.push_back(bw);
      next.push_back(std::move(bw));
      if (static_cast<int>(out.words.size()) > opts.word_cap)
        throw BracketBlowupError("bracket blowup: word cap exceeded");
    }
    frontier = std::move(next);
  }

  std::stable_sort(out.words.begin(), out.words.end(), [](const auto& a, const auto& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  });

  // frame fields realize the convention F^N = X_c(M)
  for (int a = 0; a < m; ++a) {
    BracketWord fw;
    fw.frame = a;
    fw.weight = gen.depth;
    fw.field = PolyVectorField(m);
    fw.field.components[a] = MultiPoly::constant(m, 1);
    out.words.push_back(fw);
  }
  return out;
}

namespace {

int span_rank_at(const std::vector<const BracketWord*>& words, std::span<const Rational> p,
                 int m, std::vector<const BracketWord*>* witness) {
  QRowSpace space(m);
  for (const auto* w : words) {
    QVector v = evaluate(w->field, p);
    if (space.add(v)) {
      if (witness) witness->push_back(w);
      if (space.rank() == m) break;
    }
  }
  return space.rank();
}

}  // namespace

HormanderResult check_hormander(const WeightedGenerators& gen, std::span<const Rational> p,
                                const FiltrationOptions& opts) {
  gen.check();
  const int m = gen.dim();
  if (static_cast<int>(p.size()) != m)
    throw std::invalid_argument("check_hormander: point dimension mismatch");

  Filtration filt = generate_filtration(gen, opts);
  std::vector<const BracketWord*> words;
  for (const auto& w : filt.words)
    if (w.frame < 0) words.push_back(&w);

  HormanderResult res;
  std::vector<const BracketWord*> witness;
  if (span_rank_at(words, p, m, &witness) == m) {
    res.holds = true;
    for (const auto* w : witness) res.witness.push_back(*w);
    return res;
  }

  // The words fail at p. Level N is the full module by convention; accept the
  // declaration when the words span at generic nearby points.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> num(-64, 64);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<Rational> q(p.begin(), p.end());
    for (int i = 0; i < m; ++i) q[i] += rat(num(rng), 128 + trial);
    if (span_rank_at(words, q, m, nullptr) == m) {
      res.holds = true;
      res.by_convention = true;
      return res;
    }
  }
  res.holds = false;
  return res;
}

namespace {

// enumeration of exponents with total degree <= K, grlex order
std::vector<Exponents> monomials_up_to(int m, int K) {
  std::vector<Exponents> out;
  Exponents cur(m, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == m) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      cur[var] = d;
      rec(var + 1, left - d);
    }
    cur[var] = 0;
  };
  rec(0, K);
  std::stable_sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

struct JetContext {
  int m;
  int K;
  std::vector<Exponents> monos;
  std::map<Exponents, int, GrlexLess> mono_index;

  JetContext(int m_, int K_) : m(m_), K(K_), monos(monomials_up_to(m_, K_)) {
    for (size_t i = 0; i < monos.size(); ++i) mono_index[monos[i]] = static_cast<int>(i);
  }

  int cols() const { return m * static_cast<int>(monos.size()); }

  QVector flatten_jet(const std::vector<MultiPoly>& comps) const {
    QVector v(cols(), Rational(0));
    const int B = static_cast<int>(monos.size());
    for (int c = 0; c < m; ++c)
      for (const auto& [e, coef] : comps[c].terms()) {
        auto it = mono_index.find(e);
        if (it != mono_index.end()) v[c * B + it->second] = coef;
      }
    return v;
  }
};

struct LevelData {
  QRowSpace relations;
  std::vector<const BracketWord*> basis_words;
  std::vector<QVector> basis_jets;
  int dim = 0;

  explicit LevelData(int cols) : relations(cols) {}
};

struct FiberContext {
  const WeightedGenerators& gen;
  Filtration filt;
  JetContext jc;
  std::vector<Rational> p;
  // centred truncated jets per word (parallel to filt.words)
  std::vector<std::vector<MultiPoly>> word_jets;
  std::vector<LevelData> levels;  // index 1..depth

  FiberContext(const WeightedGenerators& g, std::span<const Rational> point, int K,
               const FiltrationOptions& opts)
      : gen(g), filt(generate_filtration(g, opts)), jc(g.dim(), K),
        p(point.begin(), point.end()) {
    for (const auto& w : filt.words) {
      Jet j = jet_at(w.field, p, K);
      word_jets.push_back(std::move(j.components));
    }
    build_levels();
  }

  // jets of q * W for centred monomials q with deg in [lo, hi]
  void add_multiples(QRowSpace& space, size_t word_idx, int lo, int hi) const {
    const auto& jets = word_jets[word_idx];
    for (const auto& e : jc.monos) {
      int d = std::accumulate(e.begin(), e.end(), 0);
      if (d < lo || d > hi) continue;
      std::vector<MultiPoly> scaled(jc.m, MultiPoly(jc.m));
      MultiPoly q = MultiPoly::monomial(jc.m, e, Rational(1));
      for (int c = 0; c < jc.m; ++c)
        scaled[c] = (q * jets[c]).truncate_degree(jc.K);
      space.add(jc.flatten_jet(scaled));
    }
  }

  void build_levels() {
    levels.assign(filt.depth + 1, LevelData(jc.cols()));
    for (int lvl = 1; lvl <= filt.depth; ++lvl) {
      LevelData& L = levels[lvl];
      auto gens_here = filt.level(lvl);
      auto gens_below = filt.level(lvl - 1);
      // I_p F^lvl: positive-degree multiples of level generators
      for (const auto* w : gens_here) {
        size_t idx = static_cast<size_t>(w - filt.words.data());
        add_multiples(L.relations, idx, 1, jc.K);
      }
      // F^{lvl-1} with arbitrary coefficients
      for (const auto* w : gens_below) {
        size_t idx = static_cast<size_t>(w - filt.words.data());
        add_multiples(L.relations, idx, 0, jc.K);
      }
      // greedy class representatives: shorter words first, then lex; frame last.
      // Work on a copy so L.relations stays the pure relation space.
      std::vector<const BracketWord*> candidates = gens_here;
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const BracketWord* a, const BracketWord* b) {
                         bool fa = a->frame >= 0, fb = b->frame >= 0;
                         if (fa != fb) return fb;
                         if (fa && fb) return a->frame < b->frame;
                         if (a->letters.size() != b->letters.size())
                           return a->letters.size() < b->letters.size();
                         return a->letters < b->letters;
                       });
      QRowSpace augmented = L.relations;
      for (const auto* w : candidates) {
        size_t idx = static_cast<size_t>(w - filt.words.data());
        QVector jv = jc.flatten_jet(word_jets[idx]);
        if (augmented.add(jv)) {
          L.basis_words.push_back(w);
          L.basis_jets.push_back(std::move(jv));
          ++L.dim;
        }
      }
    }
  }
};

std::vector<int> dims_of(const FiberContext& ctx) {
  std::vector<int> dims;
  for (int lvl = 1; lvl <= ctx.filt.depth; ++lvl) dims.push_back(ctx.levels[lvl].dim);
  return dims;
}

}  // namespace

int FiberReport::total_dim() const {
  int s = 0;
  for (int d : dims) s += d;
  return s;
}

FiberReport fiber_dims(const WeightedGenerators& gen, std::span<const Rational> p, int K,
                       const FiltrationOptions& opts) {
  gen.check();
  if (K < gen.depth) K = gen.depth;
  FiberContext ctx(gen, p, K, opts);
  FiberContext ctx_up(gen, p, K + 1, opts);

  FiberReport rep;
  rep.point.assign(p.begin(), p.end());
  rep.jet_order = K;
  rep.dims = dims_of(ctx);
  rep.stable = (rep.dims == dims_of(ctx_up));
  for (int lvl = 1; lvl <= ctx.filt.depth; ++lvl) {
    std::vector<BracketWord> ws;
    for (const auto* w : ctx.levels[lvl].basis_words) ws.push_back(*w);
    rep.basis.push_back(std::move(ws));
  }
  return rep;
}

GradedBasisData minimal_graded_basis(const WeightedGenerators& gen,
                                     std::span<const Rational> p,
                                     const FiltrationOptions& opts) {
  auto horm = check_hormander(gen, p, opts);
  if (!horm.holds)
    throw std::invalid_argument("minimal_graded_basis: Hormander condition fails at the point");
  FiberReport rep = fiber_dims(gen, p, gen.depth, opts);

  GradedBasisData data;
  data.point.assign(p.begin(), p.end());
  for (int lvl = 1; lvl <= gen.depth; ++lvl)
    for (const auto& w : rep.basis[lvl - 1]) {
      data.fields.push_back(w.field);
      data.weights.push_back(lvl);
      data.words.push_back(w);
    }
  data.report = std::move(rep);
  return data;
}

namespace {

// Express jet(Z) in the level-w fiber basis modulo the relation space.
std::optional<QVector> project_class(const FiberContext& ctx, const PolyVectorField& Z,
                                     int w) {
  const LevelData& L = ctx.levels[w];
  Jet zj = jet_at(Z, ctx.p, ctx.jc.K);
  QVector target = ctx.jc.flatten_jet(zj.components);

  std::vector<QVector> cols = L.basis_jets;
  // relation space rows close the system
  for (const auto& r : L.relations.rows()) cols.push_back(r);
  auto sol = solve_combination(cols, target);
  if (!sol) return std::nullopt;
  QVector coords(L.basis_jets.size());
  for (size_t i = 0; i < L.basis_jets.size(); ++i) coords[i] = (*sol)[i];
  return coords;
}

}  // namespace

OsculatingResult osculating_at(const WeightedGenerators& gen, std::span<const Rational> p,
                               const FiltrationOptions& opts) {
  GradedBasisData basis = minimal_graded_basis(gen, p, opts);
  FiberContext ctx(gen, p, gen.depth, opts);

  const int d = static_cast<int>(basis.fields.size());
  GradedLieAlgebra alg(d, basis.weights, gen.depth);

  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      int w = basis.weights[i] + basis.weights[j];
      if (w > gen.depth) continue;
      PolyVectorField Z = bracket(basis.fields[i], basis.fields[j]);
      auto coords = project_class(ctx, Z, w);
      if (!coords)
        throw std::runtime_error(
            "osculating_at: bracket class not expressible in the level-" +
            std::to_string(w) + " fiber basis (jet order too small)");
      std::vector<GradedLieAlgebra::Entry> entries;
      // map level-local coordinates onto global basis indices
      int offset = 0;
      for (int lvl = 1; lvl < w; ++lvl) offset += ctx.levels[lvl].dim;
      for (size_t k = 0; k < coords->size(); ++k)
        if ((*coords)[k] != 0) entries.push_back({offset + static_cast<int>(k), (*coords)[k]});
      alg.set_bracket(i, j, entries);
    }
  alg.validate();
  return {std::move(alg), std::move(basis)};
}

QVector fiber_class_coords(const WeightedGenerators& gen, const GradedBasisData& basis,
                           const PolyVectorField& Z, int w, const FiltrationOptions& opts) {
  if (w > gen.depth) {
    int count = 0;
    for (int x : basis.weights)
      if (x == w) ++count;
    return QVector(count, Rational(0));
  }
  FiberContext ctx(gen, basis.point, gen.depth, opts);
  auto coords = project_class(ctx, Z, w);
  if (!coords)
    throw std::runtime_error("fiber class not expressible at level " + std::to_string(w));
  return *coords;
}

}  // namespace hypocalc

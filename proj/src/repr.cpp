#include "hypocalc/repr.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hypocalc {

DiffOp FirstOrderOp::as_diffop() const {
  const int q = static_cast<int>(a.size());
  DiffOp op(q);
  for (int j = 0; j < q; ++j) {
    if (a[j].is_zero()) continue;
    DiffOp::Multi alpha(q, 0);
    alpha[j] = 1;
    op.add_term(alpha, CPoly(a[j], MultiPoly(q)));
  }
  if (!b.is_zero()) op.add_term(DiffOp::Multi(q, 0), CPoly(MultiPoly(q), b));
  return op;
}

DiffOp InducedRep::action_of(const QVector& coords) const {
  if (coords.size() != actions.size())
    throw std::invalid_argument("action_of: coordinate arity mismatch");
  DiffOp acc = DiffOp::zero(q);
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    acc = acc + CRational(coords[i]) * actions[i].as_diffop();
  }
  return acc;
}

namespace {

// apply a rational matrix to a vector of ring elements
template <class S>
std::vector<S> apply_matrix(const std::vector<QVector>& m, const std::vector<S>& v,
                            const S& zero) {
  const int n = static_cast<int>(m.size());
  std::vector<S> out(n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m[i][j] != 0) out[i] = out[i] + v[j] * m[i][j];
  return out;
}

std::vector<MultiPoly> truncate_t(std::vector<MultiPoly> v, int t_var) {
  for (auto& p : v) p = p.truncate_var_degree(t_var, 1);
  return v;
}

}  // namespace

InducedRep induce_representation(const GradedLieAlgebra& g, const QVector& ell) {
  const int d = g.dim();
  if (static_cast<int>(ell.size()) != d)
    throw std::invalid_argument("induce_representation: ell arity mismatch");

  // skew form B(x,y) = ell([x,y]) on the basis
  std::vector<QVector> B(d, QVector(d, Rational(0)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Rational v = 0;
      for (const auto& [k, c] : g.bracket_entries(i, j)) v += c * ell[k];
      B[i][j] = v;
    }
  QRowSpace brank(d);
  for (const auto& row : B) brank.add(row);
  if (brank.rank() % 2 != 0)
    throw std::logic_error("induce_representation: skew form has odd rank");
  const int q = brank.rank() / 2;

  // flag of ideals: prefixes of the basis sorted by decreasing weight (ties by
  // decreasing index); brackets raise weight, so every prefix is an ideal.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.weights()[a] != g.weights()[b]) return g.weights()[a] > g.weights()[b];
    return a > b;
  });

  // Vergne: h = sum over k of rad(B restricted to the k-th flag subspace)
  QRowSpace h_space(d);
  for (int k = 1; k <= d; ++k) {
    std::vector<int> sub(order.begin(), order.begin() + k);
    // nullspace of the k x k submatrix: rows indexed by y in sub
    std::vector<QVector> rows;
    for (int y : sub) {
      QVector row(k);
      for (int xi = 0; xi < k; ++xi) row[xi] = B[sub[xi]][y];
      rows.push_back(std::move(row));
    }
    for (const auto& nv : nullspace(rows, k)) {
      QVector emb(d, Rational(0));
      for (int xi = 0; xi < k; ++xi) emb[sub[xi]] = nv[xi];
      h_space.add(emb);
    }
  }
  if (h_space.rank() != d - q)
    throw std::logic_error("induce_representation: polarization has wrong dimension");

  // gates: subalgebra, isotropic for B
  const auto& hrows = h_space.rows();
  for (size_t a = 0; a < hrows.size(); ++a)
    for (size_t b = a + 1; b < hrows.size(); ++b) {
      QVector br = g.bracket_coords<Rational>(hrows[a], hrows[b], Rational(0));
      if (!h_space.contains(br))
        throw std::logic_error("induce_representation: polarization is not a subalgebra");
      Rational pairing = 0;
      for (int k = 0; k < d; ++k) pairing += ell[k] * br[k];
      if (pairing != 0)
        throw std::logic_error("induce_representation: polarization is not isotropic");
    }

  // coexponential complement from coordinate directions
  std::vector<int> complement;
  {
    QRowSpace filled = h_space;
    for (int i = 0; i < d && static_cast<int>(complement.size()) < q; ++i) {
      QVector ei(d, Rational(0));
      ei[i] = 1;
      if (filled.add(ei)) complement.push_back(i);
    }
    if (static_cast<int>(complement.size()) != q)
      throw std::logic_error("induce_representation: complement construction failed");
  }

  InducedRep rep;
  rep.q = q;
  rep.ell = ell;
  rep.polarization = hrows;
  rep.complement = complement;

  if (q == 0) {
    // one-dimensional character: action(e_i) = i <ell, e_i>
    for (int i = 0; i < d; ++i) {
      FirstOrderOp op;
      op.b = MultiPoly::constant(0, ell[i]);
      rep.actions.push_back(op);
    }
    return rep;
  }

  // symbolic coordinates: variables s_1..s_q and t (last)
  const int nv = q + 1;
  const int t_var = q;
  const MultiPoly zero(nv);
  const int r = d - q;

  // linear part of (H, s') |-> exp(H) exp(s'_1 b_1) ... exp(s'_q b_q):
  // columns are the h-basis vectors and the complement directions
  std::vector<QVector> L(d, QVector(d, Rational(0)));
  for (int a = 0; a < r; ++a)
    for (int i = 0; i < d; ++i) L[i][a] = hrows[a][i];
  for (int j = 0; j < q; ++j) L[complement[j]][r + j] = 1;
  auto Linv_opt = invert(L);
  if (!Linv_opt) throw std::logic_error("induce_representation: singular basis matrix");
  const auto& Linv = *Linv_opt;

  // group product in exp coordinates over the polynomial ring
  auto product = [&](const std::vector<MultiPoly>& v) {
    // v = (h_1..h_r, s'_1..s'_q)
    std::vector<MultiPoly> acc(d, zero);
    bool acc_zero = true;
    for (int j = q - 1; j >= 0; --j) {
      std::vector<MultiPoly> term(d, zero);
      term[complement[j]] = v[r + j];
      if (acc_zero) {
        acc = std::move(term);
        acc_zero = false;
      } else {
        acc = truncate_t(bch<MultiPoly>(g, term, acc, zero), t_var);
      }
    }
    std::vector<MultiPoly> H(d, zero);
    for (int a = 0; a < r; ++a)
      for (int i = 0; i < d; ++i)
        if (hrows[a][i] != 0) H[i] += v[a] * hrows[a][i];
    if (acc_zero) return H;
    return truncate_t(bch<MultiPoly>(g, H, acc, zero), t_var);
  };

  // G(s) = exp(s_1 b_1) ... exp(s_q b_q)
  std::vector<MultiPoly> Gs;
  {
    std::vector<MultiPoly> v(d, zero);
    for (int j = 0; j < q; ++j) v[r + j] = MultiPoly::variable(nv, j);
    // h-part zero
    Gs = product(v);
  }

  std::vector<FirstOrderOp> raw_actions;
  for (int i = 0; i < d; ++i) {
    // curve g(s) * exp(-t e_i)
    std::vector<MultiPoly> Te(d, zero);
    Te[i] = -MultiPoly::variable(nv, t_var);
    std::vector<MultiPoly> Z = truncate_t(bch<MultiPoly>(g, Gs, Te, zero), t_var);

    // factor Z = exp(H) exp(s'_1 b_1)...exp(s'_q b_q) mod t^2 by a unipotent
    // fixed-point iteration on v = (H-coords, s'-coords)
    std::vector<MultiPoly> v = apply_matrix(Linv, Z, zero);
    bool converged = false;
    for (int it = 0; it <= 2 * g.depth() + 4; ++it) {
      std::vector<MultiPoly> Pv = product(v);
      // correction C = P(v) - L v
      std::vector<MultiPoly> Lv(d, zero);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          if (L[a][b] != 0) Lv[a] += v[b] * L[a][b];
      std::vector<MultiPoly> rhs(d, zero);
      bool same = true;
      for (int a = 0; a < d; ++a) {
        rhs[a] = (Z[a] - (Pv[a] - Lv[a])).truncate_var_degree(t_var, 1);
        if (!(Pv[a].truncate_var_degree(t_var, 1) == Z[a])) same = false;
      }
      if (same) {
        converged = true;
        break;
      }
      v = truncate_t(apply_matrix(Linv, rhs, zero), t_var);
    }
    if (!converged)
      throw std::logic_error("induce_representation: factorization did not converge");

    // gates at t = 0: H = 0, s' = s
    for (int a = 0; a < r; ++a)
      if (!v[a].truncate_var_degree(t_var, 0).is_zero())
        throw std::logic_error("induce_representation: nonzero H at t=0");
    for (int j = 0; j < q; ++j)
      if (!(v[r + j].truncate_var_degree(t_var, 0) == MultiPoly::variable(nv, j)))
        throw std::logic_error("induce_representation: s' != s at t=0");

    FirstOrderOp op;
    op.a.resize(q);
    for (int j = 0; j < q; ++j)
      op.a[j] = v[r + j].coeff_of_var_power(t_var, 1).with_num_vars(q);
    // chi(exp H) = e^{-i ell(H)}
    MultiPoly bpoly(nv);
    for (int a = 0; a < r; ++a) {
      Rational lu = 0;
      for (int k = 0; k < d; ++k) lu += ell[k] * hrows[a][k];
      if (lu != 0) bpoly -= v[a].coeff_of_var_power(t_var, 1) * lu;
    }
    op.b = bpoly.with_num_vars(q);
    raw_actions.push_back(std::move(op));
  }

  // orientation: flip s_j so the first basis action with a constant
  // d/ds_j-coefficient has it positive
  for (int j = 0; j < q; ++j) {
    Rational lead = 0;
    for (int i = 0; i < d && lead == 0; ++i) lead = raw_actions[i].a[j].constant_term();
    if (lead < 0) {
      for (auto& op : raw_actions) {
        for (int jj = 0; jj < q; ++jj) op.a[jj] = op.a[jj].flip_var(j);
        op.a[j] = -op.a[j];
        op.b = op.b.flip_var(j);
      }
    }
  }
  rep.actions = std::move(raw_actions);

  // verification gates: commutator realization and formal skew-adjointness
  std::vector<DiffOp> ops;
  for (int i = 0; i < d; ++i) ops.push_back(rep.actions[i].as_diffop());
  for (int i = 0; i < d; ++i) {
    DiffOp adj = ops[i].formal_adjoint();
    DiffOp sum = adj + ops[i];
    if (!sum.is_zero())
      throw std::logic_error("induce_representation: action is not formally skew-adjoint");
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      DiffOp lhs = commutator(ops[i], ops[j]);
      DiffOp rhs = DiffOp::zero(q);
      for (const auto& [k, c] : g.bracket_entries(i, j))
        rhs = rhs + CRational(c) * ops[k];
      if (!(lhs == rhs))
        throw std::logic_error("induce_representation: commutator identity fails");
    }
  return rep;
}

SymbolRealization realize_symbol(const PrincipalPart& PP, const InducedRep& rep,
                                 const std::vector<QVector>& letter_classes) {
  SymbolRealization out;
  out.op = DiffOp::zero(rep.q);
  int index = 0;
  for (const auto& mono : PP.monomials) {
    DiffOp acc = DiffOp::identity(rep.q);
    bool dead = false;
    for (int l : mono.letters) {
      const QVector& cls = letter_classes.at(l);
      bool zero = true;
      for (const auto& c : cls)
        if (c != 0) { zero = false; break; }
      if (zero) {
        dead = true;
        break;
      }
      acc = compose(acc, rep.action_of(cls));
    }
    if (dead) {
      out.dropped_monomials.push_back(index);
    } else {
      out.op = out.op + mono.value * acc;
    }
    ++index;
  }
  return out;
}

}  // namespace hypocalc

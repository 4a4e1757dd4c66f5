#include "hypocalc/diffop.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hypocalc {

CPoly CPoly::constant(int num_vars, const CRational& c) {
  return {MultiPoly::constant(num_vars, c.re), MultiPoly::constant(num_vars, c.im)};
}

DiffOp DiffOp::identity(int q) {
  DiffOp op(q);
  op.add_term(Multi(q, 0), CPoly::constant(q, CRational(Rational(1))));
  return op;
}

DiffOp DiffOp::position(int q, int var) {
  DiffOp op(q);
  op.add_term(Multi(q, 0), CPoly(MultiPoly::variable(q, var), MultiPoly(q)));
  return op;
}

DiffOp DiffOp::derivative_op(int q, int var) {
  DiffOp op(q);
  Multi alpha(q, 0);
  alpha[var] = 1;
  op.add_term(alpha, CPoly::constant(q, CRational(Rational(1))));
  return op;
}

DiffOp DiffOp::scalar(int q, const CRational& c) {
  DiffOp op(q);
  op.add_term(Multi(q, 0), CPoly::constant(q, c));
  return op;
}

int DiffOp::max_order() const {
  int best = 0;
  for (const auto& [a, c] : terms_)
    best = std::max(best, std::accumulate(a.begin(), a.end(), 0));
  return best;
}

int DiffOp::max_coeff_degree() const {
  int best = 0;
  for (const auto& [a, c] : terms_)
    best = std::max({best, c.re.degree(), c.im.degree()});
  return best;
}

void DiffOp::add_term(const Multi& alpha, const CPoly& c) {
  if (static_cast<int>(alpha.size()) != q_)
    throw std::invalid_argument("DiffOp: multi-index arity mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  if (a.q_ != b.q_) throw std::invalid_argument("DiffOp: arity mismatch");
  DiffOp r = a;
  for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, c);
  return r;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) {
  if (a.q_ != b.q_) throw std::invalid_argument("DiffOp: arity mismatch");
  DiffOp r = a;
  for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, -c);
  return r;
}

DiffOp operator*(const CRational& c, const DiffOp& a) {
  DiffOp r(a.q_);
  CPoly cc = CPoly::constant(a.q_, c);
  for (const auto& [alpha, coef] : a.terms_) r.add_term(alpha, cc * coef);
  return r;
}

DiffOp operator*(const CPoly& f, const DiffOp& a) {
  DiffOp r(a.q_);
  for (const auto& [alpha, coef] : a.terms_) r.add_term(alpha, f * coef);
  return r;
}

namespace {

// d^alpha o (f .) expanded by Leibniz: sum_{beta<=alpha} C(alpha,beta)
// (d^beta f) d^{alpha-beta}
void leibniz(const DiffOp::Multi& alpha, const CPoly& f, const DiffOp::Multi& gamma,
             DiffOp& out) {
  const int q = static_cast<int>(alpha.size());
  std::vector<DiffOp::Multi> betas{DiffOp::Multi(q, 0)};
  // enumerate beta <= alpha
  for (int v = 0; v < q; ++v) {
    std::vector<DiffOp::Multi> next;
    for (const auto& b : betas)
      for (int k = 0; k <= alpha[v]; ++k) {
        auto nb = b;
        nb[v] = k;
        next.push_back(nb);
      }
    betas = std::move(next);
  }
  for (const auto& beta : betas) {
    Rational binom = 1;
    for (int v = 0; v < q; ++v) {
      // C(alpha_v, beta_v)
      mpz_class num = 1, den = 1;
      for (int k = 0; k < beta[v]; ++k) {
        num *= alpha[v] - k;
        den *= k + 1;
      }
      Rational factor(num, den);
      factor.canonicalize();
      binom *= factor;
    }
    CPoly df = f;
    for (int v = 0; v < q; ++v)
      for (int k = 0; k < beta[v]; ++k) df = df.derivative(v);
    if (df.is_zero()) continue;
    DiffOp::Multi rest(q);
    for (int v = 0; v < q; ++v) rest[v] = alpha[v] - beta[v] + gamma[v];
    CPoly scaled = CPoly(df.re * binom, df.im * binom);
    out.add_term(rest, scaled);
  }
}

}  // namespace

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  if (a.q() != b.q()) throw std::invalid_argument("DiffOp: arity mismatch");
  DiffOp r(a.q());
  for (const auto& [alpha, ca] : a.terms())
    for (const auto& [gamma, cb] : b.terms()) {
      // (ca d^alpha)(cb d^gamma) = ca * sum_beta C(alpha,beta)(d^beta cb) d^{alpha-beta+gamma}
      DiffOp expanded(a.q());
      leibniz(alpha, cb, gamma, expanded);
      for (const auto& [delta, c] : expanded.terms()) r.add_term(delta, ca * c);
    }
  return r;
}

DiffOp DiffOp::formal_adjoint() const {
  DiffOp r(q_);
  for (const auto& [alpha, c] : terms_) {
    int n = std::accumulate(alpha.begin(), alpha.end(), 0);
    CRational sign((n % 2 == 0) ? Rational(1) : Rational(-1));
    // (-1)^{|alpha|} d^alpha o conj(c)
    DiffOp expanded(q_);
    leibniz(alpha, c.conj(), Multi(q_, 0), expanded);
    for (const auto& [delta, cc] : expanded.terms()) {
      CPoly signed_c = CPoly::constant(q_, sign) * cc;
      r.add_term(delta, signed_c);
    }
  }
  return r;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) {
  return compose(a, b) - compose(b, a);
}

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  auto names = default_var_names(q_);
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(";
    if (c.im.is_zero()) os << c.re.to_string(names);
    else if (c.re.is_zero()) os << "i*(" << c.im.to_string(names) << ")";
    else os << c.re.to_string(names) << " + i*(" << c.im.to_string(names) << ")";
    os << ")";
    for (int v = 0; v < q_; ++v) {
      if (alpha[v] == 0) continue;
      os << "*D" << (q_ > 1 ? std::to_string(v + 1) : std::string());
      if (alpha[v] > 1) os << "^" << alpha[v];
    }
  }
  return os.str();
}

}  // namespace hypocalc

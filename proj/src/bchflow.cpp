#include "hypocalc/bchflow.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypocalc {

PolyVectorField FormalSeriesField::at(double t) const {
  return at(rat_from_double(t));
}

PolyVectorField FormalSeriesField::at(const Rational& t) const {
  PolyVectorField acc(dim);
  Rational tp = 1;
  for (const auto& c : coeffs) {
    tp *= t;
    acc = acc + tp * c;
  }
  return acc;
}

bool FormalSeriesField::is_zero() const {
  for (const auto& c : coeffs)
    if (!c.is_zero()) return false;
  return true;
}

FormalSeriesField series_bracket(const FormalSeriesField& A, const FormalSeriesField& B,
                                 int order) {
  if (A.dim != B.dim) throw std::invalid_argument("series_bracket: dimension mismatch");
  FormalSeriesField out(A.dim, order);
  for (int i = 1; i <= A.order(); ++i)
    for (int j = 1; j <= B.order(); ++j) {
      if (i + j > order) continue;
      out.coeffs[i + j - 1] =
          out.coeffs[i + j - 1] + bracket(A.coeffs[i - 1], B.coeffs[j - 1]);
    }
  return out;
}

FormalSeriesField bch_series(const FormalSeriesField& X, const FormalSeriesField& Y,
                             int order) {
  if (X.dim != Y.dim) throw std::invalid_argument("bch_series: dimension mismatch");
  const auto& table = bch_table(order);

  FormalSeriesField acc(X.dim, order);
  auto trunc = [&](const FormalSeriesField& f) {
    FormalSeriesField g(f.dim, order);
    for (int i = 0; i < std::min(order, f.order()); ++i) g.coeffs[i] = f.coeffs[i];
    return g;
  };
  FormalSeriesField Xt = trunc(X), Yt = trunc(Y);

  for (const auto& term : table) {
    FormalSeriesField cur = (term.letters.back() == 0) ? Xt : Yt;
    for (int i = static_cast<int>(term.letters.size()) - 2; i >= 0; --i)
      cur = series_bracket(term.letters[i] == 0 ? Xt : Yt, cur, order);
    for (int k = 0; k < order; ++k)
      acc.coeffs[k] = acc.coeffs[k] + term.coeff * cur.coeffs[k];
  }
  return acc;
}

OrderFit flow_order_test(const FormalSeriesField& X, const FormalSeriesField& Y,
                         std::span<const double> x, int n, const OrderTestOptions& opts) {
  OrderFit fit;
  fit.n = n;
  fit.t_grid = opts.t_grid;
  if (fit.t_grid.empty())
    for (int k = 3; k <= 10; ++k) fit.t_grid.push_back(std::pow(2.0, -k));

  double t_min = *std::min_element(fit.t_grid.begin(), fit.t_grid.end());
  FlowOptions fopts;
  fopts.tol = std::max(opts.tol_floor, opts.tol_factor * std::pow(t_min, n + 2));

  FormalSeriesField Z = bch_series(X, Y, n);

  double scale = 1.0;
  for (double xi : x) scale = std::max(scale, std::abs(xi));

  for (double t : fit.t_grid) {
    bool ok = true;
    double err = 0;
    try {
      Rational tq = rat_from_double(t);
      auto mid = flow_time_one(Y.at(tq), x, fopts);
      auto lhs = flow_time_one(X.at(tq), mid, fopts);
      auto rhs = flow_time_one(Z.at(tq), x, fopts);
      for (size_t i = 0; i < lhs.size(); ++i) err = std::hypot(err, lhs[i] - rhs[i]);
    } catch (const FlowEscapedError&) {
      ok = false;
    }
    fit.errors.push_back(ok ? err : std::nan(""));
    fit.used.push_back(ok && err > opts.error_floor * scale);
  }

  int usable = 0;
  for (bool u : fit.used) usable += u;
  bool all_floor = true;
  for (size_t i = 0; i < fit.errors.size(); ++i)
    if (std::isfinite(fit.errors[i]) && fit.errors[i] > opts.error_floor * scale)
      all_floor = false;
  if (all_floor) {
    fit.exactly_zero = true;
    fit.slope = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (usable < 5) {
    fit.inconclusive = true;
    return fit;
  }

  // least-squares slope on log-log
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < fit.t_grid.size(); ++i) {
    if (!fit.used[i]) continue;
    double lx = std::log(fit.t_grid[i]);
    double ly = std::log(fit.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - fit.slope * sx) / m;
  double ss = 0;
  for (size_t i = 0; i < fit.t_grid.size(); ++i) {
    if (!fit.used[i]) continue;
    double pred = intercept + fit.slope * std::log(fit.t_grid[i]);
    double r = std::log(fit.errors[i]) - pred;
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / m);
  return fit;
}

void GradedLieBasis::verify() const {
  const int d = algebra.dim();
  if (static_cast<int>(fields.size()) != d)
    throw std::invalid_argument("GradedLieBasis: field count mismatch");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (algebra.weights()[i] + algebra.weights()[j] > algebra.depth()) continue;
      PolyVectorField lhs = bracket(fields[i], fields[j]);
      PolyVectorField rhs(fields[i].dim);
      for (const auto& [k, c] : algebra.bracket_entries(i, j))
        rhs = rhs + c * fields[k];
      if (!(lhs == rhs))
        throw std::logic_error("GradedLieBasis: natural is not a Lie homomorphism");
    }
}

PolyVectorField GradedLieBasis::natural(std::span<const double> v) const {
  PolyVectorField acc(fields.front().dim);
  for (size_t i = 0; i < fields.size(); ++i)
    acc = acc + rat_from_double(v[i]) * fields[i];
  return acc;
}

std::vector<double> local_inverse_k(const GradedLieBasis& basis, std::span<const double> v0,
                                    std::span<const double> y, std::span<const double> x,
                                    const NewtonOptions& opts) {
  const int d = basis.algebra.dim();
  const int m = basis.fields.front().dim;
  if (static_cast<int>(v0.size()) != d) throw std::invalid_argument("local_inverse_k: v0 arity");

  FlowOptions fopts;
  fopts.tol = opts.flow_tol;

  // anchor matrix A(x): column i = B_i(x); updates live in range(A^T)
  Eigen::MatrixXd A(m, d);
  for (int i = 0; i < d; ++i) {
    auto col = evaluate(basis.fields[i], x);
    for (int r = 0; r < m; ++r) A(r, i) = col[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> asvd(A, Eigen::ComputeFullV);
  int arank = 0;
  for (int i = 0; i < asvd.singularValues().size(); ++i)
    if (asvd.singularValues()(i) > 1e-12 * asvd.singularValues()(0)) ++arank;
  Eigen::MatrixXd range_basis = asvd.matrixV().leftCols(arank);  // d x r

  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(v0.data(), d);
  auto F = [&](const Eigen::VectorXd& w) {
    std::vector<double> wv(w.data(), w.data() + d);
    auto flowed = flow_time_one(basis.natural(wv), x, fopts);
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) r(i) = flowed[i] - y[i];
    return r;
  };

  Eigen::VectorXd res = F(v);
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res.norm() < opts.residual_tol) {
      return std::vector<double>(v.data(), v.data() + d);
    }
    // Jacobian restricted to the complement directions, by central differences
    double h = 1e-6;
    Eigen::MatrixXd J(m, arank);
    for (int c = 0; c < arank; ++c) {
      Eigen::VectorXd dv = range_basis.col(c);
      Eigen::VectorXd rp = F(v + h * dv);
      Eigen::VectorXd rm = F(v - h * dv);
      J.col(c) = (rp - rm) / (2 * h);
    }
    Eigen::VectorXd delta = J.colPivHouseholderQr().solve(-res);
    // damped line search
    double step = 1.0;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd cand = v + step * (range_basis * delta);
      Eigen::VectorXd cres = F(cand);
      if (cres.norm() < res.norm()) {
        v = cand;
        res = cres;
        break;
      }
      step *= 0.5;
      if (ls == 11) {
        v = cand;
        res = cres;
      }
    }
  }
  if (res.norm() < opts.residual_tol)
    return std::vector<double>(v.data(), v.data() + d);
  throw OutsideDomainError("local_inverse_k: Newton did not converge (outside dom(k))");
}

std::vector<double> phi_map(const GradedLieBasis& basis, std::span<const double> Y,
                            std::span<const double> X, std::span<const double> x, double t,
                            const NewtonOptions& opts) {
  const auto& g = basis.algebra;
  const int d = g.dim();
  if (t < 0) throw std::invalid_argument("phi_map: t must be >= 0");
  std::vector<double> Yv(Y.begin(), Y.end()), Xv(X.begin(), X.end());
  if (t == 0) return bch(g, Yv, Xv);

  FlowOptions fopts;
  fopts.tol = opts.flow_tol;

  auto Yt = dilate(g, t, Yv);
  auto Xt = dilate(g, t, Xv);
  auto seed = bch(g, Yt, Xt);

  auto mid = flow_time_one(basis.natural(Xt), x, fopts);
  auto target = flow_time_one(basis.natural(Yt), mid, fopts);

  auto v = local_inverse_k(basis, seed, target, x, opts);
  return dilate(g, 1.0 / t, v);
}

}  // namespace hypocalc

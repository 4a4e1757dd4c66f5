#include "hypocalc/hncone.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hypocalc {

PairingMap::PairingMap(std::vector<Field> fields, std::vector<int> weights,
                       std::vector<double> base_point, double chart_radius)
    : fields_(std::move(fields)), weights_(std::move(weights)),
      base_point_(std::move(base_point)), chart_radius_(chart_radius) {
  if (fields_.size() != weights_.size())
    throw std::invalid_argument("PairingMap: fields/weights mismatch");
  for (const auto& f : fields_) {
    if (f.poly) {
      if (f.poly->dim != static_cast<int>(base_point_.size()))
        throw std::invalid_argument("PairingMap: field dimension mismatch");
    } else if (!f.callback) {
      throw std::invalid_argument("PairingMap: field has neither polynomial nor callback");
    }
  }
}

PairingMap PairingMap::from_basis(const std::vector<PolyVectorField>& fields,
                                  const std::vector<int>& weights,
                                  const std::vector<double>& base_point,
                                  double chart_radius) {
  std::vector<Field> fs;
  for (const auto& f : fields) fs.push_back({f, nullptr});
  return PairingMap(std::move(fs), weights, base_point, chart_radius);
}

void PairingMap::field_matrix(std::span<const double> x, std::vector<double>& rows) const {
  const int m = space_dim();
  const int d = cone_dim();
  rows.assign(static_cast<size_t>(d) * m, 0.0);
  std::vector<double> tmp(m);
  for (int k = 0; k < d; ++k) {
    if (fields_[k].poly) {
      auto v = evaluate(*fields_[k].poly, x);
      std::copy(v.begin(), v.end(), rows.begin() + static_cast<size_t>(k) * m);
    } else {
      fields_[k].callback(x, std::span<double>(tmp));
      std::copy(tmp.begin(), tmp.end(), rows.begin() + static_cast<size_t>(k) * m);
    }
  }
}

std::vector<double> PairingMap::eval(std::span<const double> x, std::span<const double> eta,
                                     double t) const {
  if (static_cast<int>(x.size()) != space_dim() ||
      static_cast<int>(eta.size()) != space_dim())
    throw std::invalid_argument("PairingMap::eval: arity mismatch");
  std::vector<double> rows;
  field_matrix(x, rows);
  const int m = space_dim();
  const int d = cone_dim();
  std::vector<double> xi(d);
  for (int k = 0; k < d; ++k) {
    double pair = 0;
    for (int a = 0; a < m; ++a) pair += eta[a] * rows[static_cast<size_t>(k) * m + a];
    xi[k] = std::pow(t, weights_[k]) * pair;
  }
  return xi;
}

ConeSample sample_cone(const PairingMap& phi, int budget, const SampleOptions& opts) {
  if (budget < 1) throw std::invalid_argument("sample_cone: budget must be >= 1");
  const int m = phi.space_dim();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ConeSample out;
  const double log_t_lo = std::log(opts.t_min), log_t_hi = std::log(opts.t_max);
  for (int it = 0; it < budget; ++it) {
    std::vector<double> x(phi.base_point());
    for (int a = 0; a < m; ++a) x[a] += phi.chart_radius() * unit(rng);
    std::vector<double> eta(m);
    double nrm = 0;
    for (int a = 0; a < m; ++a) {
      eta[a] = gauss(rng);
      nrm += eta[a] * eta[a];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0) continue;
    double scale = std::pow(10.0, opts.eta_log_radius * unit(rng)) / nrm;
    for (auto& e : eta) e *= scale;
    double t = std::exp(log_t_lo + (log_t_hi - log_t_lo) * u01(rng));

    std::vector<double> xi = phi.eval(x, eta, t);
    double sup = 0;
    for (double v : xi) sup = std::max(sup, std::abs(v));
    out.budget_used++;
    if (!(sup > 0) || !std::isfinite(sup)) continue;

    ConeSampleEntry e;
    e.gauge = sup;
    e.xi.resize(xi.size());
    for (size_t k = 0; k < xi.size(); ++k) e.xi[k] = xi[k] / sup;
    e.x = std::move(x);
    e.eta = std::move(eta);
    e.t = t;

    // eps-net dedup on the normalized representatives
    bool fresh = true;
    for (const auto& kept : out.entries) {
      double dist = 0;
      for (size_t k = 0; k < xi.size(); ++k)
        dist = std::max(dist, std::abs(kept.xi[k] - e.xi[k]));
      if (dist < opts.eps_net) { fresh = false; break; }
    }
    if (fresh && out.entries.size() < opts.max_entries) out.entries.push_back(std::move(e));
  }
  return out;
}

namespace {

// Residual of the best eta for fixed (x, t): least squares in the linear slot.
double best_eta_residual(const PairingMap& phi, std::span<const double> x, double t,
                         std::span<const double> xi, std::vector<double>* eta_out) {
  const int m = phi.space_dim();
  const int d = phi.cone_dim();
  std::vector<double> rows;
  phi.field_matrix(x, rows);
  Eigen::MatrixXd M(d, m);
  Eigen::VectorXd target(d);
  for (int k = 0; k < d; ++k) {
    double tw = std::pow(t, phi.weights()[k]);
    for (int a = 0; a < m; ++a) M(k, a) = tw * rows[static_cast<size_t>(k) * m + a];
    target(k) = xi[k];
  }
  Eigen::VectorXd eta = M.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
  double res = (M * eta - target).norm();
  if (eta_out) {
    eta_out->resize(m);
    for (int a = 0; a < m; ++a) (*eta_out)[a] = eta(a);
  }
  return res;
}

// Nelder-Mead on (x, log t); deterministic.
struct SimplexResult {
  std::vector<double> best;
  double value;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> start, double step, int iterations) {
  const int n = static_cast<int>(start.size());
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (int i : idx) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  for (int it = 0; it < iterations; ++it) {
    order();
    if (vals[0] < 1e-16) break;
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

    auto blend = [&](double c) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + c * (pts[n][j] - centroid[j]);
      return p;
    };
    auto refl = blend(-1.0);
    double fr = f(refl);
    if (fr < vals[0]) {
      auto exp_pt = blend(-2.0);
      double fe = f(exp_pt);
      if (fe < fr) { pts[n] = exp_pt; vals[n] = fe; }
      else { pts[n] = refl; vals[n] = fr; }
    } else if (fr < vals[n - 1]) {
      pts[n] = refl;
      vals[n] = fr;
    } else {
      auto contr = blend(0.5);
      double fc = f(contr);
      if (fc < vals[n]) { pts[n] = contr; vals[n] = fc; }
      else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  return {pts[0], vals[0]};
}

}  // namespace

MembershipVerdict membership(const PairingMap& phi, std::span<const double> xi,
                             const MembershipOptions& opts) {
  for (double v : xi)
    if (!std::isfinite(v)) throw std::invalid_argument("membership: xi must be finite");

  const int m = phi.space_dim();
  MembershipVerdict best;
  best.residual = std::numeric_limits<double>::infinity();

  // zero covector: eta = 0 is an exact witness
  double xi_norm = 0;
  for (double v : xi) xi_norm = std::max(xi_norm, std::abs(v));
  if (xi_norm == 0) {
    best.verdict = Membership::In;
    best.residual = 0;
    best.witness_x = phi.base_point();
    best.witness_eta.assign(m, 0.0);
    best.witness_t = opts.t_small;
    return best;
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double log_t_hi = std::log(opts.t_small);
  const double log_t_lo = std::log(opts.t_small) - 9.0;  // reach the t->0 ladder

  auto objective = [&](std::span<const double> u) -> double {
    // u = (x_1..x_m, log t); clamp to the chart and t-window
    double s = std::min(log_t_hi, std::max(log_t_lo, u[m]));
    std::vector<double> x(m);
    bool in_chart = true;
    for (int a = 0; a < m; ++a) {
      x[a] = u[a];
      double off = x[a] - phi.base_point()[a];
      if (std::abs(off) > phi.chart_radius()) in_chart = false;
    }
    if (!in_chart) return 1e6 + xi_norm;
    return best_eta_residual(phi, x, std::exp(s), xi, nullptr);
  };

  for (int start = 0; start < opts.starts; ++start) {
    std::vector<double> u(m + 1);
    for (int a = 0; a < m; ++a)
      u[a] = phi.base_point()[a] + phi.chart_radius() * unit(rng) * 0.9;
    u[m] = log_t_lo + (log_t_hi - log_t_lo) * (0.5 + 0.5 * unit(rng));
    double step = 0.1 * phi.chart_radius() + 0.05;

    auto r = nelder_mead(objective, u, step, opts.iterations);
    best.starts_used++;
    if (r.value < best.residual) {
      best.residual = r.value;
      double s = std::min(log_t_hi, std::max(log_t_lo, r.best[m]));
      best.witness_t = std::exp(s);
      best.witness_x.assign(r.best.begin(), r.best.begin() + m);
      best_eta_residual(phi, best.witness_x, best.witness_t, xi, &best.witness_eta);
    }
    best.trace.push_back(best.residual);
    if (best.residual < opts.eps_in * 0.01) break;  // already certified
  }

  if (best.residual < opts.eps_in) {
    best.verdict = Membership::In;
  } else if (best.residual > opts.eps_out) {
    best.verdict = Membership::Out;
    best.heuristic_out = true;
  } else {
    best.verdict = Membership::Inconclusive;
  }
  return best;
}

InvarianceReport invariance_check(const PairingMap& phi, const ConeSample& sample,
                                  const GradedLieAlgebra& g, int max_points,
                                  const MembershipOptions& opts) {
  if (g.dim() != phi.cone_dim())
    throw std::invalid_argument("invariance_check: algebra/pairing dimension mismatch");
  std::mt19937_64 rng(opts.seed ^ 0xabcddcba12344321ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  InvarianceReport rep;
  const int d = g.dim();
  int count = std::min<int>(max_points, static_cast<int>(sample.entries.size()));
  for (int i = 0; i < count; ++i) {
    const auto& e = sample.entries[i];
    double lambda = 0.5 + 1.5 * std::abs(unit(rng));
    double mu = unit(rng) * 2.0;
    std::vector<double> a(d);
    for (int k = 0; k < d; ++k) a[k] = 0.5 * unit(rng);

    std::vector<std::pair<std::string, std::vector<double>>> variants;
    variants.emplace_back("dilate(" + std::to_string(lambda) + ")",
                          dilate_dual(g, lambda, e.xi));
    std::vector<double> scaled(d);
    for (int k = 0; k < d; ++k) scaled[k] = mu * e.xi[k];
    variants.emplace_back("scalar(" + std::to_string(mu) + ")", scaled);
    variants.emplace_back("coadjoint", coadjoint(g, a, e.xi));

    for (auto& [name, xi2] : variants) {
      rep.checked++;
      auto v = membership(phi, xi2, opts);
      if (v.verdict != Membership::In) {
        rep.failures++;
        rep.cases.push_back({name, xi2, v.residual});
      }
    }
  }
  return rep;
}

}  // namespace hypocalc

#include "hypocalc/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace hypocalc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

Json rat_array(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rat_to_string(q));
  return a;
}

Json double_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double d : v) a.push_back(d);
  return a;
}

}  // namespace

Json to_json(const FiberReport& rep, const WeightedGenerators& gen) {
  Json j;
  j["point"] = rat_array(rep.point);
  j["dims"] = rep.dims;
  Json basis = Json::array();
  for (size_t lvl = 0; lvl < rep.basis.size(); ++lvl) {
    Json level = Json::array();
    for (const auto& w : rep.basis[lvl]) {
      Json word;
      word["letters"] = w.letters;
      word["weight"] = w.weight;
      word["label"] = w.label(gen);
      if (w.frame >= 0) word["frame"] = w.frame;
      word["field"] = to_string(w.field);
      level.push_back(word);
    }
    basis.push_back(level);
  }
  j["basis_words"] = basis;
  j["jet_order"] = rep.jet_order;
  j["stable"] = rep.stable;
  j["total_dim"] = rep.total_dim();
  return j;
}

Json to_json(const GradedLieAlgebra& g) {
  Json j;
  j["dim"] = g.dim();
  j["weights"] = g.weights();
  j["depth"] = g.depth();
  Json sc = Json::array();
  for (int i = 0; i < g.dim(); ++i)
    for (int jj = i + 1; jj < g.dim(); ++jj)
      for (const auto& [k, c] : g.bracket_entries(i, jj)) {
        Json t = Json::array();
        t.push_back(i);
        t.push_back(jj);
        t.push_back(k);
        t.push_back(rat_to_string(c));
        sc.push_back(t);
      }
  j["sc"] = sc;
  j["abelian"] = g.is_abelian();
  return j;
}

GradedLieAlgebra algebra_from_json(const Json& j) {
  GradedLieAlgebra g(j.at("dim").get<int>(), j.at("weights").get<std::vector<int>>(),
                     j.at("depth").get<int>());
  std::map<std::pair<int, int>, std::vector<GradedLieAlgebra::Entry>> collected;
  for (const auto& t : j.at("sc")) {
    int i = t.at(0).get<int>();
    int jj = t.at(1).get<int>();
    collected[{i, jj}].push_back(
        {t.at(2).get<int>(), rat_from_string(t.at(3).get<std::string>())});
  }
  for (const auto& [key, entries] : collected) g.set_bracket(key.first, key.second, entries);
  g.validate();
  return g;
}

Json to_json(const ConeSample& sample) {
  Json j;
  j["count"] = sample.entries.size();
  j["budget_used"] = sample.budget_used;
  Json reps = Json::array();
  for (const auto& e : sample.entries) {
    Json r;
    r["xi"] = double_array(e.xi);
    r["x"] = double_array(e.x);
    r["eta"] = double_array(e.eta);
    r["t"] = e.t;
    r["gauge"] = e.gauge;
    reps.push_back(r);
  }
  j["representatives"] = reps;
  return j;
}

Json to_json(const MembershipVerdict& v) {
  Json j;
  switch (v.verdict) {
    case Membership::In: j["verdict"] = "in"; break;
    case Membership::Out: j["verdict"] = "out"; break;
    case Membership::Inconclusive: j["verdict"] = "inconclusive"; break;
  }
  j["heuristic"] = v.heuristic_out;
  j["residual"] = v.residual;
  j["witness_x"] = double_array(v.witness_x);
  j["witness_eta"] = double_array(v.witness_eta);
  j["witness_t"] = v.witness_t;
  j["starts_used"] = v.starts_used;
  j["trace"] = double_array(v.trace);
  return j;
}

Json to_json(const SpectralReport& rep) {
  Json j;
  j["eigenvalues"] = double_array(rep.eigenvalues);
  j["eigenvalues_coarse"] = double_array(rep.eigenvalues_coarse);
  j["M"] = rep.M;
  j["converged"] = rep.converged;
  j["max_disagreement"] = rep.max_disagreement;
  j["smallest_singular_coarse"] = rep.smallest_singular_coarse;
  j["smallest_singular_fine"] = rep.smallest_singular_fine;
  return j;
}

Json to_json(const InjectivityReport& rep) {
  Json j;
  switch (rep.verdict) {
    case Injectivity::Injective: j["verdict"] = "injective"; break;
    case Injectivity::NotInjective: j["verdict"] = "not-injective"; break;
    case Injectivity::Inconclusive: j["verdict"] = "inconclusive"; break;
  }
  j["ladder"] = rep.ladder;
  j["s_min"] = double_array(rep.s_min);
  j["residual"] = rep.residual;
  j["evidence_only"] = rep.evidence_only;
  return j;
}

Json to_json(const HypoellipticityEvidence& ev) {
  Json j;
  j["maximally_hypoelliptic"] = ev.maximally_hypoelliptic;
  j["certificate"] = ev.certificate;
  j["spectrum"] = double_array(ev.spectrum);
  j["distance"] = ev.distance;
  j["offending_index"] = ev.offending_index;
  j["beta_reduction_consistent"] = ev.beta_reduction_consistent;
  return j;
}

Json to_json(const OrderFit& fit) {
  Json j;
  j["n"] = fit.n;
  j["t_grid"] = double_array(fit.t_grid);
  j["errors"] = double_array(fit.errors);
  std::vector<int> used;
  for (bool b : fit.used) used.push_back(b ? 1 : 0);
  j["used"] = used;
  j["slope"] = fit.slope;
  j["fit_residual"] = fit.fit_residual;
  j["exactly_zero"] = fit.exactly_zero;
  j["inconclusive"] = fit.inconclusive;
  return j;
}

std::string cone_sample_csv(const ConeSample& sample) {
  std::ostringstream os;
  if (sample.entries.empty()) return "";
  const size_t d = sample.entries.front().xi.size();
  for (size_t k = 0; k < d; ++k) os << "xi" << (k + 1) << ",";
  os << "t,gauge\n";
  for (const auto& e : sample.entries) {
    for (size_t k = 0; k < d; ++k) os << format_double(e.xi[k]) << ",";
    os << format_double(e.t) << "," << format_double(e.gauge) << "\n";
  }
  return os.str();
}

std::string order_fit_csv(const OrderFit& fit) {
  std::ostringstream os;
  os << "t,error,used\n";
  for (size_t i = 0; i < fit.t_grid.size(); ++i)
    os << format_double(fit.t_grid[i]) << "," << format_double(fit.errors[i]) << ","
       << (fit.used[i] ? 1 : 0) << "\n";
  return os.str();
}

std::string eigenvalue_csv(const SpectralReport& rep) {
  std::ostringstream os;
  os << "index,eigenvalue,eigenvalue_coarse\n";
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i)
    os << i << "," << format_double(rep.eigenvalues[i]) << ","
       << format_double(rep.eigenvalues_coarse[i]) << "\n";
  return os.str();
}

}  // namespace hypocalc

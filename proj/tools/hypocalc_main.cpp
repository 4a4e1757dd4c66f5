// hypocalc: config-driven pipeline for weighted filtrations, osculating
// groups, Helffer-Nourrigat cones, principal symbols and spectral tests.
//
// Exit codes: 0 success, 2 config validation error, 3 numerically
// inconclusive result (distinct from failure).

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "hypocalc/serialize.hpp"
#include "hypocalc/ncpoly.hpp"
#include "hypocalc/repr.hpp"

namespace fs = std::filesystem;
using namespace hypocalc;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  Json values;

  bool has(const std::string& key) const { return values.contains(key); }

  template <class T>
  T get(const std::string& key) const {
    if (!values.contains(key)) throw ConfigError("missing config key: " + key);
    try {
      return values.at(key).get<T>();
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }

  template <class T>
  T get_or(const std::string& key, T fallback) const {
    if (!values.contains(key)) return fallback;
    return get<T>(key);
  }
};

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Config load_config(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Config cfg;
  size_t first = raw.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && raw[first] == '{') {
    try {
      cfg.values = Json::parse(raw);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
  } else {
    // plain-text encoding: one `key = value` per line, values in JSON syntax,
    // '#' starts a comment
    cfg.values = Json::object();
    std::istringstream ls(raw);
    std::string line;
    int lineno = 0;
    while (std::getline(ls, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto notspace = line.find_first_not_of(" \t\r\n");
      if (notspace == std::string::npos) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        size_t b = s.find_last_not_of(" \t\r\n");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      key = trim(key);
      value = trim(value);
      try {
        cfg.values[key] = Json::parse(value);
      } catch (const std::exception&) {
        cfg.values[key] = value;  // bare string
      }
    }
  }

  std::vector<std::string> offenders;
  for (const auto& [key, v] : cfg.values.items())
    if (!allowed.count(key)) offenders.push_back(key);
  if (!offenders.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : offenders) msg += " " + k;
    throw ConfigError(msg);
  }
  // digest of the raw bytes pins the exact input
  cfg.values["__digest"] = hex64(fnv1a(raw));
  return cfg;
}

std::vector<Rational> parse_point(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError("point has the wrong arity");
  std::vector<Rational> p;
  for (const auto& c : j) {
    if (c.is_string()) p.push_back(rat_from_string(c.get<std::string>()));
    else p.push_back(rat_from_double(c.get<double>()));
  }
  return p;
}

std::vector<double> to_doubles(const std::vector<Rational>& p) {
  std::vector<double> d;
  for (const auto& q : p) d.push_back(to_double(q));
  return d;
}

WeightedGenerators generators_from(const Config& cfg) {
  WeightedGenerators gen;
  int dim = cfg.get<int>("dim");
  for (const auto& s : cfg.get<std::vector<std::string>>("generators"))
    gen.fields.push_back(parse_field(s, dim));
  gen.weights = cfg.get<std::vector<int>>("weights");
  gen.depth = cfg.get<int>("depth");
  gen.check();
  return gen;
}

std::vector<std::vector<Rational>> points_from(const Config& cfg, int dim) {
  std::vector<std::vector<Rational>> pts;
  if (!cfg.has("points")) throw ConfigError("missing config key: points");
  for (const auto& j : cfg.values.at("points")) pts.push_back(parse_point(j, dim));
  if (pts.empty()) throw ConfigError("points must be nonempty");
  return pts;
}

// shared key sets per command
const std::set<std::string> kBaseKeys = {"dim", "generators", "weights", "depth",
                                         "points", "jet_order"};

std::set<std::string> with(const std::set<std::string>& base,
                           std::initializer_list<const char*> extra) {
  std::set<std::string> s = base;
  for (const char* k : extra) s.insert(k);
  return s;
}

struct Outputs {
  fs::path out_dir;
  bool quiet = false;
  std::string format = "json";
  int exit_code = 0;

  void write(const std::string& name, const std::string& content) const {
    fs::create_directories(out_dir);
    std::ofstream f(out_dir / name, std::ios::binary);
    f << content;
  }
};

void emit_report(const Outputs& out, const std::string& command, const Config& cfg,
                 uint64_t seed, Json results) {
  Json report;
  report["command"] = command;
  report["config_digest"] = cfg.values.at("__digest");
  report["seed"] = seed;
  report["version"] = kVersion;
  report["results"] = std::move(results);
  out.write(command + ".json", report.dump(2) + "\n");
  if (!out.quiet) std::cout << "wrote " << (out.out_dir / (command + ".json")).string() << "\n";
}

// ---------------------------------------------------------------------------

int cmd_filtration(const Config& cfg, const Outputs& out, uint64_t seed) {
  auto gen = generators_from(cfg);
  int K = cfg.get_or<int>("jet_order", gen.depth);
  auto filt = generate_filtration(gen);

  Json results;
  Json words = Json::array();
  for (const auto& w : filt.words) {
    Json jw;
    jw["label"] = w.label(gen);
    jw["weight"] = w.weight;
    jw["letters"] = w.letters;
    if (w.frame >= 0) jw["frame"] = w.frame;
    jw["field"] = to_string(w.field);
    words.push_back(jw);
  }
  results["bracket_table"] = words;

  Json per_point = Json::array();
  for (const auto& p : points_from(cfg, gen.dim())) {
    Json entry;
    Json pj = Json::array();
    for (const auto& c : p) pj.push_back(rat_to_string(c));
    entry["point"] = pj;
    auto horm = check_hormander(gen, p);
    entry["hormander"] = horm.holds;
    entry["hormander_by_convention"] = horm.by_convention;
    Json witness = Json::array();
    for (const auto& w : horm.witness) witness.push_back(w.label(gen));
    entry["witness"] = witness;
    entry["fiber"] = to_json(fiber_dims(gen, p, K), gen);
    per_point.push_back(entry);
  }
  results["points"] = per_point;
  emit_report(out, "filtration", cfg, seed, results);
  return 0;
}

int cmd_osculating(const Config& cfg, const Outputs& out, uint64_t seed) {
  auto gen = generators_from(cfg);
  Json per_point = Json::array();
  for (const auto& p : points_from(cfg, gen.dim())) {
    Json entry;
    Json pj = Json::array();
    for (const auto& c : p) pj.push_back(rat_to_string(c));
    entry["point"] = pj;
    auto osc = osculating_at(gen, p);
    entry["algebra"] = to_json(osc.algebra);
    Json basis = Json::array();
    for (size_t i = 0; i < osc.basis.fields.size(); ++i) {
      Json b;
      b["field"] = to_string(osc.basis.fields[i]);
      b["weight"] = osc.basis.weights[i];
      b["label"] = osc.basis.words[i].label(gen);
      basis.push_back(b);
    }
    entry["basis"] = basis;
    // detection: abelian / 3d Heisenberg type
    const auto& g = osc.algebra;
    entry["abelian"] = g.is_abelian();
    bool heis = false;
    if (g.dim() == 3) {
      int nontrivial = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (!g.bracket_entries(i, j).empty()) ++nontrivial;
      heis = (nontrivial == 1);
    }
    entry["heisenberg_3d"] = heis;
    per_point.push_back(entry);
  }
  Json results;
  results["points"] = per_point;
  emit_report(out, "osculating", cfg, seed, results);
  return 0;
}

PairingMap pairing_from(const Config& cfg, const WeightedGenerators* gen,
                        const std::vector<Rational>& base, Json* basis_info) {
  double chart = cfg.get_or<double>("chart_radius", 1.0);
  std::string builtin = cfg.get_or<std::string>("builtin_fields", "");
  if (builtin == "flat_pair") {
    // bundled non-polynomial demo: flat coefficients with a ratio-interval
    // cone, weights (1,2,3,3) on R^2
    auto f1 = [](std::span<const double> x, std::span<double> o) {
      double r2 = x[0] * x[0] + x[1] * x[1];
      o[1] = 0;
      o[0] = (r2 < 1e-300) ? 0.0 : (x[0] / std::sqrt(r2) + 2.0) * std::exp(-2.0 / r2);
    };
    auto f2 = [](std::span<const double> x, std::span<double> o) {
      double r2 = x[0] * x[0] + x[1] * x[1];
      o[1] = 0;
      o[0] = (r2 < 1e-300) ? 0.0 : std::exp(-1.0 / r2);
    };
    std::vector<PairingMap::Field> fields;
    fields.push_back({std::nullopt, f1});
    fields.push_back({std::nullopt, f2});
    fields.push_back({parse_field("dx", 2), nullptr});
    fields.push_back({parse_field("dy", 2), nullptr});
    if (basis_info) *basis_info = "builtin:flat_pair";
    return PairingMap(std::move(fields), {1, 2, 3, 3}, {0.0, 0.0}, chart);
  }
  if (builtin != "") throw ConfigError("unknown builtin_fields: " + builtin);
  if (!gen) throw ConfigError("cone command needs generators or builtin_fields");
  auto basis = minimal_graded_basis(*gen, base);
  if (basis_info) {
    Json b = Json::array();
    for (size_t i = 0; i < basis.fields.size(); ++i) {
      Json e;
      e["field"] = to_string(basis.fields[i]);
      e["weight"] = basis.weights[i];
      b.push_back(e);
    }
    *basis_info = b;
  }
  return PairingMap::from_basis(basis.fields, basis.weights, to_doubles(base), chart);
}

int cmd_cone(const Config& cfg, const Outputs& out, uint64_t seed) {
  std::optional<WeightedGenerators> gen;
  if (cfg.has("generators")) gen = generators_from(cfg);
  std::vector<Rational> base;
  if (gen) base = points_from(cfg, gen->dim()).front();
  else base = {Rational(0), Rational(0)};

  Json basis_info;
  auto phi = pairing_from(cfg, gen ? &*gen : nullptr, base, &basis_info);

  SampleOptions so;
  so.seed = seed;
  so.t_max = cfg.get_or<double>("cone_t_max", 0.1);
  so.t_min = cfg.get_or<double>("cone_t_min", 1e-6);
  so.eps_net = cfg.get_or<double>("cone_eps_net", 1e-3);
  int budget = cfg.get_or<int>("cone_budget", 2000);
  auto sample = sample_cone(phi, budget, so);

  Json results;
  results["basis"] = basis_info;
  results["sample"] = to_json(sample);

  // relation residuals over the normalized representatives; relation
  // expressions use the variables xi1..xid
  const int d = phi.cone_dim();
  auto parse_xi = [&](std::string expr) {
    size_t pos = 0;
    while ((pos = expr.find("xi", pos)) != std::string::npos) expr.erase(pos, 1);
    return parse_poly(expr, d);
  };
  auto relation_residuals = [&](const std::string& expr) {
    MultiPoly rel = parse_xi(expr);
    double worst = 0;
    for (const auto& e : sample.entries) {
      double v = rel.evaluate(std::span<const double>(e.xi));
      worst = std::max(worst, std::abs(v));
    }
    return worst;
  };
  bool inconclusive = false;
  if (cfg.has("relations")) {
    Json rels = Json::array();
    for (const auto& expr : cfg.get<std::vector<std::string>>("relations")) {
      Json r;
      r["relation"] = expr;
      r["max_abs_residual"] = relation_residuals(expr);
      rels.push_back(r);
    }
    results["relations"] = rels;
  }
  if (cfg.has("sign_constraints")) {
    Json rels = Json::array();
    for (const auto& expr : cfg.get<std::vector<std::string>>("sign_constraints")) {
      MultiPoly rel = parse_xi(expr);
      double worst = 0;
      for (const auto& e : sample.entries)
        worst = std::min(worst, rel.evaluate(std::span<const double>(e.xi)));
      Json r;
      r["constraint"] = expr;
      r["min_value"] = worst;
      rels.push_back(r);
    }
    results["sign_constraints"] = rels;
  }
  if (cfg.has("ratio_num")) {
    MultiPoly num = parse_xi(cfg.get<std::string>("ratio_num"));
    MultiPoly den = parse_xi(cfg.get<std::string>("ratio_den"));
    double den_floor = cfg.get_or<double>("ratio_den_floor", 1e-6);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    int used = 0;
    for (const auto& e : sample.entries) {
      double dv = den.evaluate(std::span<const double>(e.xi));
      if (std::abs(dv) < den_floor) continue;
      double r = num.evaluate(std::span<const double>(e.xi)) / dv;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++used;
    }
    Json r;
    r["min"] = lo;
    r["max"] = hi;
    r["samples_used"] = used;
    results["ratio"] = r;
  }

  if (cfg.has("membership_candidates")) {
    MembershipOptions mo;
    mo.seed = seed;
    mo.starts = cfg.get_or<int>("membership_starts", 64);
    mo.iterations = cfg.get_or<int>("membership_iterations", 500);
    mo.eps_in = cfg.get_or<double>("membership_eps_in", 1e-6);
    mo.eps_out = cfg.get_or<double>("membership_eps_out", 1e-2);
    mo.t_small = cfg.get_or<double>("membership_t_small", 1e-3);
    Json verdicts = Json::array();
    for (const auto& cand : cfg.values.at("membership_candidates")) {
      std::vector<double> xi = cand.get<std::vector<double>>();
      auto v = membership(phi, xi, mo);
      Json jv = to_json(v);
      jv["candidate"] = xi;
      verdicts.push_back(jv);
      if (v.verdict == Membership::Inconclusive) inconclusive = true;
    }
    results["membership"] = verdicts;
  }

  int inv_points = cfg.get_or<int>("invariance_points", 0);
  if (inv_points > 0) {
    if (!gen) throw ConfigError("invariance_points requires generators");
    auto osc = osculating_at(*gen, base);
    MembershipOptions mo;
    mo.seed = seed;
    auto rep = invariance_check(phi, sample, osc.algebra, inv_points, mo);
    Json jr;
    jr["checked"] = rep.checked;
    jr["failures"] = rep.failures;
    Json cases = Json::array();
    for (const auto& c : rep.cases) {
      Json jc;
      jc["transform"] = c.transform;
      jc["xi"] = c.xi;
      jc["residual"] = c.residual;
      cases.push_back(jc);
    }
    jr["cases"] = cases;
    results["invariance"] = jr;
  }

  emit_report(out, "cone", cfg, seed, results);
  if (out.format == "csv") out.write("cone.csv", cone_sample_csv(sample));
  return inconclusive ? 3 : 0;
}

int cmd_symbol(const Config& cfg, const Outputs& out, uint64_t seed) {
  auto gen = generators_from(cfg);
  auto points = points_from(cfg, gen.dim());
  const auto& p = points.front();

  auto P = parse_ncpoly(cfg.get<std::string>("operator"),
                        static_cast<int>(gen.fields.size()), gen.dim());
  auto order = weighted_order(P, gen.weights);

  Json results;
  results["weighted_order"] = order ? Json(*order) : Json(nullptr);

  auto osc = osculating_at(gen, p);
  // letter -> fiber class coordinates
  std::vector<QVector> classes;
  {
    int d = static_cast<int>(osc.basis.fields.size());
    for (size_t l = 0; l < gen.fields.size(); ++l) {
      QVector global(d, Rational(0));
      auto local = fiber_class_coords(gen, osc.basis, gen.fields[l], gen.weights[l]);
      int offset = 0;
      for (int i = 0; i < d; ++i)
        if (osc.basis.weights[i] < gen.weights[l]) ++offset;
      for (size_t k = 0; k < local.size(); ++k) global[offset + k] = local[k];
      classes.push_back(global);
    }
  }
  Json jclasses = Json::array();
  for (const auto& cls : classes) {
    Json row = Json::array();
    for (const auto& c : cls) row.push_back(rat_to_string(c));
    jclasses.push_back(row);
  }
  results["letter_classes"] = jclasses;

  int pad_order = cfg.get_or<int>("symbol_order", order ? *order : 0);
  auto pp = principal_part_at_order(P, gen.weights, p, pad_order);
  results["principal_order"] = pad_order;
  results["principal_monomials"] = pp.monomials.size();

  if (cfg.has("covectors")) {
    Json chars = Json::array();
    for (const auto& jxi : cfg.values.at("covectors")) {
      std::vector<double> xi = jxi.get<std::vector<double>>();
      std::vector<std::vector<double>> dclasses;
      for (const auto& cls : classes) {
        std::vector<double> dc;
        for (const auto& c : cls) dc.push_back(to_double(c));
        dclasses.push_back(dc);
      }
      auto val = symbol_character(pp, dclasses, xi);
      Json entry;
      entry["xi"] = xi;
      entry["re"] = val.real();
      entry["im"] = val.imag();
      chars.push_back(entry);
    }
    results["characters"] = chars;
  }

  if (cfg.has("operator_alt")) {
    auto Q = parse_ncpoly(cfg.get<std::string>("operator_alt"),
                          static_cast<int>(gen.fields.size()), gen.dim());
    auto qq = principal_part_at_order(Q, gen.weights, p, pad_order);
    results["alt_weighted_order"] =
        weighted_order(Q, gen.weights) ? Json(*weighted_order(Q, gen.weights)) : Json(nullptr);
    if (cfg.has("covectors")) {
      Json diffs = Json::array();
      for (const auto& jxi : cfg.values.at("covectors")) {
        std::vector<double> xi = jxi.get<std::vector<double>>();
        std::vector<std::vector<double>> dclasses;
        for (const auto& cls : classes) {
          std::vector<double> dc;
          for (const auto& c : cls) dc.push_back(to_double(c));
          dclasses.push_back(dc);
        }
        auto a = symbol_character(pp, dclasses, xi);
        auto b = symbol_character(qq, dclasses, xi);
        Json entry;
        entry["xi"] = xi;
        entry["difference_re"] = (b - a).real();
        entry["difference_im"] = (b - a).imag();
        diffs.push_back(entry);
      }
      results["presentation_differences"] = diffs;
    }
  }

  if (cfg.has("representation_ell")) {
    QVector ell;
    for (const auto& c : cfg.values.at("representation_ell")) {
      if (c.is_string()) ell.push_back(rat_from_string(c.get<std::string>()));
      else ell.push_back(rat_from_double(c.get<double>()));
    }
    auto rep = induce_representation(osc.algebra, ell);
    auto realized = realize_symbol(pp, rep, classes);
    results["representation_q"] = rep.q;
    results["realized_operator"] = realized.op.to_string();
    results["dropped_monomials"] = realized.dropped_monomials;
  }

  emit_report(out, "symbol", cfg, seed, results);
  return 0;
}

int cmd_rockland(const Config& cfg, const Outputs& out, uint64_t seed) {
  int k = cfg.get<int>("rockland_k");
  int n = cfg.get<int>("rockland_n");
  double tol = cfg.get_or<double>("rockland_tol", 1e-6);
  int M = cfg.get_or<int>("rockland_M", 128);
  int L = cfg.get_or<int>("spectrum_L", 8);

  Json results;
  auto model = model_operator(k, n, Rational(1));
  auto spec = spectrum_1d(model, L, tol, M);
  results["model_spectrum"] = to_json(spec);

  bool inconclusive = !spec.converged;
  Json sweeps = Json::array();
  std::vector<std::pair<double, double>> lambdas;
  if (cfg.has("lambda_sweep")) {
    for (const auto& jl : cfg.values.at("lambda_sweep"))
      lambdas.emplace_back(jl.at(0).get<double>(), jl.at(1).get<double>());
  } else {
    lambdas.emplace_back(cfg.get_or<double>("lambda_re", 0.0),
                         cfg.get_or<double>("lambda_im", 0.0));
  }
  for (auto [re, im] : lambdas) {
    auto ev = hypoellipticity_verdict(k, n, {re, im}, tol, M);
    Json je = to_json(ev);
    je["lambda_re"] = re;
    je["lambda_im"] = im;
    sweeps.push_back(je);
  }
  results["verdicts"] = sweeps;

  // harmonic-oscillator injectivity benchmark (sum of squares positivity)
  DiffOp osc(1);
  osc.add_term({2}, CPoly::constant(1, CRational(Rational(-1))));
  osc.add_term({0}, CPoly(MultiPoly::variable(1, 0).pow(2), MultiPoly(1)));
  auto inj = injectivity_test(osc, {64, 128, 256}, 0.5);
  results["sub_laplacian_injectivity"] = to_json(inj);
  if (inj.verdict == Injectivity::Inconclusive) inconclusive = true;

  emit_report(out, "rockland", cfg, seed, results);
  if (out.format == "csv") out.write("spectrum.csv", eigenvalue_csv(spec));
  return inconclusive ? 3 : 0;
}

int cmd_bch(const Config& cfg, const Outputs& out, uint64_t seed) {
  (void)seed;
  Json results;
  int dim = cfg.get<int>("dim");

  bool inconclusive = false;
  if (cfg.has("bch_pairs")) {
    Json fits = Json::array();
    int idx = 0;
    for (const auto& jp : cfg.values.at("bch_pairs")) {
      // pair = {"X": [[degree, expr], ...], "Y": [...], "n": [...],
      //         "x": [coords]}
      auto parse_series = [&](const Json& js) {
        int max_deg = 1;
        for (const auto& t : js) max_deg = std::max(max_deg, t.at(0).get<int>());
        FormalSeriesField f(dim, max_deg);
        for (const auto& t : js)
          f.coeffs[t.at(0).get<int>() - 1] = parse_field(t.at(1).get<std::string>(), dim);
        return f;
      };
      FormalSeriesField X = parse_series(jp.at("X"));
      FormalSeriesField Y = parse_series(jp.at("Y"));
      std::vector<double> x0 = jp.at("x").get<std::vector<double>>();
      for (int n : jp.at("n").get<std::vector<int>>()) {
        auto fit = flow_order_test(X, Y, x0, n);
        Json jf = to_json(fit);
        jf["pair"] = idx;
        fits.push_back(jf);
        if (fit.inconclusive) inconclusive = true;
        if (out.format == "csv")
          out.write("orderfit_" + std::to_string(idx) + "_n" + std::to_string(n) + ".csv",
                    order_fit_csv(fit));
      }
      ++idx;
    }
    results["order_fits"] = fits;
  }

  if (cfg.get_or<bool>("phi_checks", false)) {
    auto gen = generators_from(cfg);
    auto base = points_from(cfg, gen.dim()).front();
    auto osc = osculating_at(gen, base);
    GradedLieBasis basis{osc.algebra, osc.basis.fields};
    basis.verify();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-0.25, 0.25);
    int instances = cfg.get_or<int>("phi_instances", 50);
    double worst_eval = 0, worst_equiv = 0;
    const int d = basis.algebra.dim();
    FlowOptions fopts;
    fopts.tol = 1e-13;
    for (int trial = 0; trial < instances; ++trial) {
      std::vector<double> Y(d), X(d), x(gen.dim());
      for (auto& c : Y) c = unit(rng);
      for (auto& c : X) c = unit(rng);
      for (auto& c : x) c = unit(rng);
      double t = 0.1 + 0.4 * std::abs(unit(rng));
      double lambda = 0.5 + std::abs(unit(rng));

      auto out_v = phi_map(basis, Y, X, x, t);
      auto lhs = flow_time_one(basis.natural(dilate(basis.algebra, t, out_v)), x, fopts);
      auto mid = flow_time_one(basis.natural(dilate(basis.algebra, t, X)), x, fopts);
      auto rhs = flow_time_one(basis.natural(dilate(basis.algebra, t, Y)), mid, fopts);
      double err = 0;
      for (size_t i = 0; i < lhs.size(); ++i) err = std::max(err, std::abs(lhs[i] - rhs[i]));
      worst_eval = std::max(worst_eval, err);

      auto le = phi_map(basis, dilate(basis.algebra, lambda, Y),
                        dilate(basis.algebra, lambda, X), x, t / lambda);
      auto re = dilate(basis.algebra, lambda, phi_map(basis, Y, X, x, t));
      for (int i = 0; i < d; ++i)
        worst_equiv = std::max(worst_equiv, std::abs(le[i] - re[i]));
    }
    Json jp;
    jp["instances"] = instances;
    jp["max_evaluation_error"] = worst_eval;
    jp["max_equivariance_error"] = worst_equiv;
    results["phi"] = jp;
  }

  emit_report(out, "bch", cfg, seed, results);
  return inconclusive ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypocalc: weighted filtrations, osculating groups, "
               "Helffer-Nourrigat cones and spectral hypoellipticity tests"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "json";
  uint64_t seed = 1;
  bool quiet = false;

  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--seed", seed, "random seed (determinism contract)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "json or csv (csv adds side files)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", quiet, "suppress progress output");

  auto* sub_filtration = app.add_subcommand("filtration", "bracket table, Hormander, fibers");
  auto* sub_osculating = app.add_subcommand("osculating", "structure constants per point");
  auto* sub_cone = app.add_subcommand("cone", "sample the cone, residuals, membership");
  auto* sub_symbol = app.add_subcommand("symbol", "weighted order, principal part, characters");
  auto* sub_rockland = app.add_subcommand("rockland", "spectra and hypoellipticity verdicts");
  auto* sub_bch = app.add_subcommand("bch", "flow-approximation order fits, phi map");

  CLI11_PARSE(app, argc, argv);

  if (const char* threads = std::getenv("HYPOCALC_THREADS")) {
    (void)threads;  // accepted as a parallelism cap; execution is serial
  }

  Outputs out;
  out.out_dir = out_dir;
  out.quiet = quiet;
  out.format = format;

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (sub_filtration->parsed()) {
      auto cfg = load_config(config_path, kBaseKeys);
      code = cmd_filtration(cfg, out, seed);
    } else if (sub_osculating->parsed()) {
      auto cfg = load_config(config_path, kBaseKeys);
      code = cmd_osculating(cfg, out, seed);
    } else if (sub_cone->parsed()) {
      auto cfg = load_config(
          config_path,
          with(kBaseKeys,
               {"chart_radius", "builtin_fields", "cone_budget", "cone_t_max", "cone_t_min",
                "cone_eps_net", "relations", "sign_constraints", "ratio_num", "ratio_den",
                "ratio_lo", "ratio_hi", "ratio_den_floor", "membership_candidates",
                "membership_starts", "membership_iterations", "membership_eps_in",
                "membership_eps_out", "membership_t_small", "invariance_points"}));
      code = cmd_cone(cfg, out, seed);
    } else if (sub_symbol->parsed()) {
      auto cfg = load_config(
          config_path,
          with(kBaseKeys, {"operator", "operator_alt", "symbol_order", "covectors",
                           "representation_ell"}));
      code = cmd_symbol(cfg, out, seed);
    } else if (sub_rockland->parsed()) {
      auto cfg = load_config(
          config_path,
          with(kBaseKeys, {"rockland_k", "rockland_n", "rockland_tol", "rockland_M",
                           "spectrum_L", "lambda_re", "lambda_im", "lambda_sweep"}));
      code = cmd_rockland(cfg, out, seed);
    } else if (sub_bch->parsed()) {
      auto cfg = load_config(config_path,
                             with(kBaseKeys, {"bch_pairs", "phi_checks", "phi_instances"}));
      code = cmd_bch(cfg, out, seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (!quiet) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cerr << "elapsed " << ms << " ms\n";
  }
  return code;
}

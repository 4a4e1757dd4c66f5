// Python bindings for the main operations: symbolic fields, filtrations,
// osculating algebras, cone sampling/membership, symbols and spectral tests.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypocalc/bchflow.hpp"
#include "hypocalc/filtration.hpp"
#include "hypocalc/hermite.hpp"
#include "hypocalc/hncone.hpp"
#include "hypocalc/ncpoly.hpp"
#include "hypocalc/repr.hpp"
#include "hypocalc/serialize.hpp"

namespace py = pybind11;
using namespace hypocalc;

namespace {

std::vector<Rational> to_rats(const std::vector<std::string>& xs) {
  std::vector<Rational> out;
  for (const auto& s : xs) out.push_back(rat_from_string(s));
  return out;
}

WeightedGenerators make_gen(const std::vector<std::string>& fields,
                            const std::vector<int>& weights, int depth, int dim) {
  WeightedGenerators gen;
  for (const auto& f : fields) gen.fields.push_back(parse_field(f, dim));
  gen.weights = weights;
  gen.depth = depth;
  gen.check();
  return gen;
}

py::dict fiber_report_dict(const FiberReport& rep, const WeightedGenerators& gen) {
  py::dict d;
  d["dims"] = rep.dims;
  d["total_dim"] = rep.total_dim();
  d["jet_order"] = rep.jet_order;
  d["stable"] = rep.stable;
  py::list basis;
  for (const auto& lvl : rep.basis) {
    py::list level;
    for (const auto& w : lvl) {
      py::dict word;
      word["label"] = w.label(gen);
      word["weight"] = w.weight;
      word["field"] = to_string(w.field);
      level.append(word);
    }
    basis.append(level);
  }
  d["basis"] = basis;
  return d;
}

py::dict algebra_dict(const GradedLieAlgebra& g) {
  py::dict d;
  d["dim"] = g.dim();
  d["weights"] = g.weights();
  d["depth"] = g.depth();
  d["abelian"] = g.is_abelian();
  py::list sc;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i + 1; j < g.dim(); ++j)
      for (const auto& [k, c] : g.bracket_entries(i, j))
        sc.append(py::make_tuple(i, j, k, rat_to_string(c)));
  d["sc"] = sc;
  return d;
}

GradedLieAlgebra algebra_from(int dim, const std::vector<int>& weights, int depth,
                              const std::vector<std::tuple<int, int, int, std::string>>& sc) {
  GradedLieAlgebra g(dim, weights, depth);
  std::map<std::pair<int, int>, std::vector<GradedLieAlgebra::Entry>> grouped;
  for (const auto& [i, j, k, c] : sc) grouped[{i, j}].push_back({k, rat_from_string(c)});
  for (const auto& [key, entries] : grouped) g.set_bracket(key.first, key.second, entries);
  g.validate();
  return g;
}

}  // namespace

PYBIND11_MODULE(_hypocalc, m) {
  m.doc() = "weighted filtrations, osculating groups, Helffer-Nourrigat cones, "
            "principal symbols and spectral hypoellipticity tests";

  // --- symbolic vector fields ------------------------------------------------
  m.def("bracket", [](const std::string& x, const std::string& y, int dim) {
    return to_string(bracket(parse_field(x, dim), parse_field(y, dim)));
  }, py::arg("x"), py::arg("y"), py::arg("dim"));

  m.def("evaluate_field", [](const std::string& x, const std::vector<double>& p) {
    return evaluate(parse_field(x, static_cast<int>(p.size())), p);
  });

  m.def("flow_time_one",
        [](const std::string& x, const std::vector<double>& p, double tol) {
          FlowOptions opts;
          opts.tol = tol;
          return flow_time_one(parse_field(x, static_cast<int>(p.size())), p, opts);
        },
        py::arg("field"), py::arg("point"), py::arg("tol") = 1e-12);

  m.def("parse_print_field", [](const std::string& x, int dim) {
    return to_string(parse_field(x, dim));
  });

  // --- filtration ------------------------------------------------------------
  m.def("fiber_dims",
        [](const std::vector<std::string>& fields, const std::vector<int>& weights,
           int depth, int dim, const std::vector<std::string>& point, int jet_order) {
          auto gen = make_gen(fields, weights, depth, dim);
          auto rep = fiber_dims(gen, to_rats(point), jet_order > 0 ? jet_order : depth);
          return fiber_report_dict(rep, gen);
        },
        py::arg("fields"), py::arg("weights"), py::arg("depth"), py::arg("dim"),
        py::arg("point"), py::arg("jet_order") = 0);

  m.def("check_hormander",
        [](const std::vector<std::string>& fields, const std::vector<int>& weights,
           int depth, int dim, const std::vector<std::string>& point) {
          auto gen = make_gen(fields, weights, depth, dim);
          auto res = check_hormander(gen, to_rats(point));
          py::dict d;
          d["holds"] = res.holds;
          d["by_convention"] = res.by_convention;
          py::list witness;
          for (const auto& w : res.witness) witness.append(w.label(gen));
          d["witness"] = witness;
          return d;
        });

  m.def("osculating_at",
        [](const std::vector<std::string>& fields, const std::vector<int>& weights,
           int depth, int dim, const std::vector<std::string>& point) {
          auto gen = make_gen(fields, weights, depth, dim);
          auto osc = osculating_at(gen, to_rats(point));
          py::dict d = algebra_dict(osc.algebra);
          py::list basis;
          for (size_t i = 0; i < osc.basis.fields.size(); ++i) {
            py::dict b;
            b["field"] = to_string(osc.basis.fields[i]);
            b["weight"] = osc.basis.weights[i];
            basis.append(b);
          }
          d["basis"] = basis;
          return d;
        });

  // --- graded Lie algebras ---------------------------------------------------
  m.def("free_nilpotent", [](const std::vector<int>& weights, int depth) {
    auto f = free_nilpotent(weights, depth);
    py::dict d = algebra_dict(f.algebra);
    d["labels"] = f.labels;
    return d;
  });

  m.def("bch",
        [](int dim, const std::vector<int>& weights, int depth,
           const std::vector<std::tuple<int, int, int, std::string>>& sc,
           const std::vector<double>& X, const std::vector<double>& Y) {
          auto g = algebra_from(dim, weights, depth, sc);
          return bch(g, X, Y);
        },
        "BCH product in exp coordinates (flow-composition convention)");

  m.def("dilate", [](int dim, const std::vector<int>& weights, int depth,
                     double lambda, const std::vector<double>& X) {
    GradedLieAlgebra g(dim, weights, depth);
    return dilate(g, lambda, X);
  });

  m.def("coadjoint",
        [](int dim, const std::vector<int>& weights, int depth,
           const std::vector<std::tuple<int, int, int, std::string>>& sc,
           const std::vector<double>& a, const std::vector<double>& xi) {
          auto g = algebra_from(dim, weights, depth, sc);
          return coadjoint(g, a, xi);
        });

  // --- cone ------------------------------------------------------------------
  py::class_<PairingMap>(m, "PairingMap")
      .def(py::init([](const std::vector<std::string>& fields,
                       const std::vector<int>& weights, std::vector<double> base,
                       double chart_radius) {
             std::vector<PolyVectorField> fs;
             for (const auto& f : fields)
               fs.push_back(parse_field(f, static_cast<int>(base.size())));
             return PairingMap::from_basis(fs, weights, base, chart_radius);
           }),
           py::arg("fields"), py::arg("weights"), py::arg("base_point"),
           py::arg("chart_radius") = 1.0)
      .def(py::init([](const std::vector<std::function<std::vector<double>(
                           std::vector<double>)>>& callbacks,
                       const std::vector<int>& weights, std::vector<double> base,
                       double chart_radius) {
             std::vector<PairingMap::Field> fs;
             for (const auto& cb : callbacks) {
               PairingMap::Field f;
               f.callback = [cb](std::span<const double> x, std::span<double> out) {
                 auto v = cb(std::vector<double>(x.begin(), x.end()));
                 std::copy(v.begin(), v.end(), out.begin());
               };
               fs.push_back(std::move(f));
             }
             return PairingMap(std::move(fs), weights, base, chart_radius);
           }),
           py::arg("callbacks"), py::arg("weights"), py::arg("base_point"),
           py::arg("chart_radius") = 1.0)
      .def("eval", [](const PairingMap& phi, const std::vector<double>& x,
                      const std::vector<double>& eta, double t) {
        return phi.eval(x, eta, t);
      });

  m.def("sample_cone",
        [](const PairingMap& phi, int budget, uint64_t seed, double t_max, double t_min,
           double eps_net) {
          SampleOptions so;
          so.seed = seed;
          so.t_max = t_max;
          so.t_min = t_min;
          so.eps_net = eps_net;
          auto s = sample_cone(phi, budget, so);
          py::list out;
          for (const auto& e : s.entries) {
            py::dict d;
            d["xi"] = e.xi;
            d["x"] = e.x;
            d["eta"] = e.eta;
            d["t"] = e.t;
            d["gauge"] = e.gauge;
            out.append(d);
          }
          return out;
        },
        py::arg("phi"), py::arg("budget"), py::arg("seed") = 1, py::arg("t_max") = 0.1,
        py::arg("t_min") = 1e-6, py::arg("eps_net") = 1e-3);

  m.def("membership",
        [](const PairingMap& phi, const std::vector<double>& xi, uint64_t seed,
           int starts, int iterations, double eps_in, double eps_out, double t_small) {
          MembershipOptions mo;
          mo.seed = seed;
          mo.starts = starts;
          mo.iterations = iterations;
          mo.eps_in = eps_in;
          mo.eps_out = eps_out;
          mo.t_small = t_small;
          auto v = membership(phi, xi, mo);
          py::dict d;
          d["verdict"] = v.verdict == Membership::In
                             ? "in"
                             : (v.verdict == Membership::Out ? "out" : "inconclusive");
          d["heuristic"] = v.heuristic_out;
          d["residual"] = v.residual;
          d["witness_x"] = v.witness_x;
          d["witness_eta"] = v.witness_eta;
          d["witness_t"] = v.witness_t;
          return d;
        },
        py::arg("phi"), py::arg("xi"), py::arg("seed") = 1, py::arg("starts") = 64,
        py::arg("iterations") = 500, py::arg("eps_in") = 1e-6, py::arg("eps_out") = 1e-2,
        py::arg("t_small") = 1e-3);

  // --- symbols ---------------------------------------------------------------
  m.def("weighted_order",
        [](const std::string& op, int num_gens, int dim,
           const std::vector<int>& weights) -> py::object {
          auto P = parse_ncpoly(op, num_gens, dim);
          auto k = weighted_order(P, weights);
          if (k) return py::cast(*k);
          return py::none();
        });

  m.def("symbol_character",
        [](const std::string& op, int num_gens, int dim, const std::vector<int>& weights,
           const std::vector<std::string>& point,
           const std::vector<std::vector<double>>& letter_classes,
           const std::vector<double>& xi, int order) {
          auto P = parse_ncpoly(op, num_gens, dim);
          auto p = to_rats(point);
          auto pp = order > 0 ? principal_part_at_order(P, weights, p, order)
                              : principal_part(P, weights, p);
          return symbol_character(pp, letter_classes, xi);
        },
        py::arg("op"), py::arg("num_gens"), py::arg("dim"), py::arg("weights"),
        py::arg("point"), py::arg("letter_classes"), py::arg("xi"), py::arg("order") = 0);

  m.def("realize_symbol",
        [](const std::string& op, int num_gens, int base_dim,
           const std::vector<int>& weights, const std::vector<std::string>& point,
           int dim, const std::vector<int>& alg_weights, int depth,
           const std::vector<std::tuple<int, int, int, std::string>>& sc,
           const std::vector<std::string>& ell,
           const std::vector<std::vector<std::string>>& letter_classes) {
          auto P = parse_ncpoly(op, num_gens, base_dim);
          auto pp = principal_part(P, weights, to_rats(point));
          auto g = algebra_from(dim, alg_weights, depth, sc);
          auto rep = induce_representation(g, to_rats(ell));
          std::vector<QVector> classes;
          for (const auto& cls : letter_classes) classes.push_back(to_rats(cls));
          auto sym = realize_symbol(pp, rep, classes);
          py::dict d;
          d["q"] = rep.q;
          d["operator"] = sym.op.to_string();
          d["dropped"] = sym.dropped_monomials;
          return d;
        });

  // --- spectral --------------------------------------------------------------
  m.def("harmonic_check", [](int M) {
    DiffOp op(1);
    op.add_term({2}, CPoly::constant(1, CRational(Rational(-1))));
    op.add_term({0}, CPoly(MultiPoly::variable(1, 0).pow(2), MultiPoly(1)));
    auto rep = spectrum_1d(op, 5, 1e-8, M);
    return rep.eigenvalues;
  }, py::arg("M") = 64);

  m.def("model_spectrum",
        [](int k, int n, int L, double tol, int M) {
          auto rep = spectrum_1d(model_operator(k, n, Rational(1)), L, tol, M);
          py::dict d;
          d["eigenvalues"] = rep.eigenvalues;
          d["converged"] = rep.converged;
          return d;
        },
        py::arg("k"), py::arg("n"), py::arg("L") = 8, py::arg("tol") = 1e-6,
        py::arg("M") = 128);

  m.def("hypoellipticity_verdict",
        [](int k, int n, std::complex<double> lam, double tol, int M) {
          auto ev = hypoellipticity_verdict(k, n, lam, tol, M);
          py::dict d;
          d["maximally_hypoelliptic"] = ev.maximally_hypoelliptic;
          d["certificate"] = ev.certificate;
          d["spectrum"] = ev.spectrum;
          d["distance"] = ev.distance;
          d["beta_reduction_consistent"] = ev.beta_reduction_consistent;
          return d;
        },
        py::arg("k"), py::arg("n"), py::arg("lam"), py::arg("tol") = 1e-6,
        py::arg("M") = 128);

  // --- bch flow --------------------------------------------------------------
  m.def("bch_series",
        [](int dim, const std::vector<std::pair<int, std::string>>& X,
           const std::vector<std::pair<int, std::string>>& Y, int order) {
          auto build = [&](const std::vector<std::pair<int, std::string>>& terms) {
            int maxdeg = order;
            for (auto& [d, e] : terms) maxdeg = std::max(maxdeg, d);
            FormalSeriesField f(dim, maxdeg);
            for (auto& [d, e] : terms) f.coeffs[d - 1] = parse_field(e, dim);
            return f;
          };
          auto Z = bch_series(build(X), build(Y), order);
          std::vector<std::pair<int, std::string>> out;
          for (int i = 0; i < Z.order(); ++i)
            if (!Z.coeffs[i].is_zero()) out.emplace_back(i + 1, to_string(Z.coeffs[i]));
          return out;
        });

  m.def("flow_order_test",
        [](int dim, const std::vector<std::pair<int, std::string>>& X,
           const std::vector<std::pair<int, std::string>>& Y,
           const std::vector<double>& x0, int n) {
          auto build = [&](const std::vector<std::pair<int, std::string>>& terms) {
            int maxdeg = n;
            for (auto& [d, e] : terms) maxdeg = std::max(maxdeg, d);
            FormalSeriesField f(dim, maxdeg);
            for (auto& [d, e] : terms) f.coeffs[d - 1] = parse_field(e, dim);
            return f;
          };
          auto fit = flow_order_test(build(X), build(Y), x0, n);
          py::dict d;
          d["slope"] = fit.slope;
          d["exactly_zero"] = fit.exactly_zero;
          d["inconclusive"] = fit.inconclusive;
          d["t_grid"] = fit.t_grid;
          d["errors"] = fit.errors;
          return d;
        });
}

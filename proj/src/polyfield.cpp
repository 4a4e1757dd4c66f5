#include "hypocalc/polyfield.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypocalc {

bool PolyVectorField::is_zero() const {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim != b.dim) throw std::invalid_argument("field dimension mismatch");
  PolyVectorField r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.components[i] = a.components[i] + b.components[i];
  return r;
}

PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim != b.dim) throw std::invalid_argument("field dimension mismatch");
  PolyVectorField r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.components[i] = a.components[i] - b.components[i];
  return r;
}

PolyVectorField operator*(const Rational& c, const PolyVectorField& a) {
  PolyVectorField r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.components[i] = a.components[i] * c;
  return r;
}

PolyVectorField operator*(const MultiPoly& f, const PolyVectorField& a) {
  PolyVectorField r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.components[i] = f * a.components[i];
  return r;
}

PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y) {
  if (X.dim != Y.dim) throw std::invalid_argument("bracket: dimension mismatch");
  const int m = X.dim;
  PolyVectorField r(m);
  for (int j = 0; j < m; ++j) {
    MultiPoly acc(m);
    for (int i = 0; i < m; ++i) {
      acc += X.components[i] * Y.components[j].derivative(i);
      acc -= Y.components[i] * X.components[j].derivative(i);
    }
    r.components[j] = acc;
  }
  return r;
}

std::vector<Rational> evaluate(const PolyVectorField& X, std::span<const Rational> p) {
  if (static_cast<int>(p.size()) != X.dim)
    throw std::invalid_argument("evaluate: point dimension mismatch");
  std::vector<Rational> v(X.dim);
  for (int i = 0; i < X.dim; ++i) v[i] = X.components[i].evaluate(p);
  return v;
}

std::vector<double> evaluate(const PolyVectorField& X, std::span<const double> p) {
  if (static_cast<int>(p.size()) != X.dim)
    throw std::invalid_argument("evaluate: point dimension mismatch");
  std::vector<double> v(X.dim);
  for (int i = 0; i < X.dim; ++i) v[i] = X.components[i].evaluate(p);
  return v;
}

Jet jet_at(const PolyVectorField& X, std::span<const Rational> p, int K) {
  if (K < 0) throw std::invalid_argument("jet order must be nonnegative");
  if (static_cast<int>(p.size()) != X.dim)
    throw std::invalid_argument("jet_at: point dimension mismatch");
  Jet j;
  j.base_point.assign(p.begin(), p.end());
  j.order = K;
  j.components.reserve(X.dim);
  for (const auto& c : X.components) j.components.push_back(c.shift(p).truncate_degree(K));
  return j;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> flow_time_one(const PolyVectorField& X, std::span<const double> p,
                                  const FlowOptions& opts) {
  if (static_cast<int>(p.size()) != X.dim)
    throw std::invalid_argument("flow_time_one: point dimension mismatch");
  const int m = X.dim;
  std::vector<double> y(p.begin(), p.end());
  if (X.is_zero()) return y;

  double t = 0.0;
  double h = 0.05;
  std::vector<std::vector<double>> k(7, std::vector<double>(m));
  std::vector<double> ytmp(m), y5(m), y4(m);

  auto deriv = [&](const std::vector<double>& s, std::vector<double>& out) {
    for (int i = 0; i < m; ++i) out[i] = X.components[i].evaluate(std::span<const double>(s));
  };

  int steps = 0;
  while (t < 1.0) {
    if (++steps > opts.max_steps)
      throw FlowEscapedError("flow did not complete within the step budget");
    if (t + h > 1.0) h = 1.0 - t;

    deriv(y, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (int i = 0; i < m; ++i) {
        double acc = y[i];
        for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
        ytmp[i] = acc;
      }
      deriv(ytmp, k[s]);
    }
    (void)kC;
    double err = 0;
    for (int i = 0; i < m; ++i) {
      double a5 = y[i], a4 = y[i];
      for (int s = 0; s < 7; ++s) {
        a5 += h * kB5[s] * k[s][i];
        a4 += h * kB4[s] * k[s][i];
      }
      y5[i] = a5;
      y4[i] = a4;
      double sc = opts.tol * (1.0 + std::abs(y[i]));
      double d = (a5 - a4) / sc;
      err += d * d;
    }
    err = std::sqrt(err / m);

    if (err <= 1.0 || h <= 1e-14) {
      t += h;
      y = y5;
      if (norm2(y) > opts.divergence_bound)
        throw FlowEscapedError("flow escaped: state norm exceeded divergence bound");
    }
    double fac = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    fac = std::min(5.0, std::max(0.2, fac));
    h = std::max(1e-14, h * fac);
  }
  return y;
}

namespace {

int basis_index(const std::string& name, int dim) {
  // d/dx1..d/dxm, aliases dx,dy,dz for dim<=3
  std::string n = name;
  if (n.rfind("d/d", 0) == 0) n = n.substr(3);
  else if (n.size() >= 2 && n[0] == 'd') n = n.substr(1);
  else return -1;
  if (dim <= 3) {
    const char* xyz[] = {"x", "y", "z"};
    for (int i = 0; i < dim; ++i)
      if (n == xyz[i]) return i;
  }
  if (n.size() >= 2 && n[0] == 'x') {
    bool digits = true;
    for (size_t i = 1; i < n.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(n[i]))) digits = false;
    if (digits) {
      int k = std::stoi(n.substr(1));
      if (k >= 1 && k <= dim) return k - 1;
    }
  }
  return -1;
}

}  // namespace

PolyVectorField parse_field(const std::string& text, int dim) {
  // Split the expression into top-level additive pieces, each of the form
  // [poly *] dxi. The coefficient grammar is delegated to parse_poly.
  PolyVectorField result(dim);
  {
    std::string stripped;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    if (stripped.empty() || stripped == "0") return result;
  }
  size_t pos = 0;
  int sign = +1;
  bool any = false;

  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };

  skip_ws();
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') sign = -1;
    ++pos;
  }
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    // capture one additive term: scan to the next top-level +/-
    size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(') ++depth;
      else if (c == ')') --depth;
      else if ((c == '+' || c == '-') && depth == 0 && pos > start) break;
      ++pos;
    }
    std::string term = text.substr(start, pos - start);

    // locate the basis symbol: the last identifier starting with 'd'
    size_t dpos = std::string::npos;
    std::string dname;
    for (size_t i = 0; i < term.size(); ++i) {
      if (term[i] == 'd' && (i == 0 || !std::isalnum(static_cast<unsigned char>(term[i - 1])))) {
        size_t j = i;
        std::string cand;
        if (term.compare(i, 3, "d/d") == 0) {
          j = i + 3;
          cand = "d/d";
        } else {
          j = i + 1;
          cand = "d";
        }
        while (j < term.size() &&
               (std::isalnum(static_cast<unsigned char>(term[j])))) {
          cand.push_back(term[j]);
          ++j;
        }
        if (basis_index(cand, dim) >= 0) {
          dpos = i;
          dname = cand;
          i = j - 1;
        }
      }
    }
    if (dpos == std::string::npos)
      throw std::invalid_argument("missing basis symbol (dx1..dx" + std::to_string(dim) +
                                  ") in term '" + term + "'");
    int comp = basis_index(dname, dim);

    std::string coeff_text = term.substr(0, dpos);
    // strip a trailing '*' from "poly * dx"
    size_t e = coeff_text.size();
    while (e > 0 && std::isspace(static_cast<unsigned char>(coeff_text[e - 1]))) --e;
    if (e > 0 && coeff_text[e - 1] == '*') --e;
    coeff_text = coeff_text.substr(0, e);
    std::string rest = term.substr(dpos + dname.size());
    for (char c : rest)
      if (!std::isspace(static_cast<unsigned char>(c)))
        throw std::invalid_argument("unexpected trailing text after basis symbol in '" +
                                    term + "'");

    MultiPoly coeff = coeff_text.empty() ? MultiPoly::constant(dim, 1)
                                         : parse_poly(coeff_text, dim);
    if (sign < 0) coeff = -coeff;
    result.components[comp] += coeff;
    any = true;

    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == '+') sign = +1;
    else if (text[pos] == '-') sign = -1;
    else throw std::invalid_argument("expected '+' or '-' at position " +
                                     std::to_string(pos) + " in '" + text + "'");
    ++pos;
  }
  if (!any) {
    // allow "0"
    std::string stripped;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    if (stripped == "0" || stripped.empty()) return result;
    throw std::invalid_argument("cannot parse vector field '" + text + "'");
  }
  return result;
}

std::string to_string(const PolyVectorField& X) {
  auto names = default_var_names(X.dim);
  std::vector<std::string> dnames;
  for (auto& n : names) dnames.push_back("d" + n);
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < X.dim; ++i) {
    if (X.components[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << X.components[i].to_string(names) << ")*" << dnames[i];
  }
  if (first) return "0";
  return os.str();
}

}  // namespace hypocalc

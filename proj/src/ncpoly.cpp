#include "hypocalc/ncpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hypocalc {

int NCPolynomial::weighted_degree(const NCMonomial& mono,
                                  const std::vector<int>& weights) const {
  int d = 0;
  for (int l : mono.letters) d += weights.at(l);
  return d;
}

std::optional<int> weighted_order(const NCPolynomial& P, const std::vector<int>& weights) {
  std::optional<int> best;
  for (const auto& m : P.monomials) {
    if (m.scalar.is_zero() || m.coeff.is_zero()) continue;
    int d = P.weighted_degree(m, weights);
    if (!best || d > *best) best = d;
  }
  return best;
}

PrincipalPart principal_part_at_order(const NCPolynomial& P, const std::vector<int>& weights,
                                      std::span<const Rational> p, int order) {
  PrincipalPart pp;
  pp.order = order;
  for (const auto& m : P.monomials) {
    if (m.scalar.is_zero()) continue;
    if (P.weighted_degree(m, weights) != order) continue;
    Rational v = m.coeff.evaluate(p);
    if (v == 0) continue;
    CRational value = m.scalar * CRational(v);
    // merge identical letter sequences
    bool merged = false;
    for (auto& existing : pp.monomials)
      if (existing.letters == m.letters) {
        existing.value += value;
        merged = true;
        break;
      }
    if (!merged) pp.monomials.push_back({value, m.letters});
  }
  std::erase_if(pp.monomials, [](const auto& m) { return m.value.is_zero(); });
  return pp;
}

PrincipalPart principal_part(const NCPolynomial& P, const std::vector<int>& weights,
                             std::span<const Rational> p) {
  auto k = weighted_order(P, weights);
  if (!k) return PrincipalPart{};
  return principal_part_at_order(P, weights, p, *k);
}

std::complex<double> symbol_character(const PrincipalPart& PP,
                                      const std::vector<std::vector<double>>& letter_classes,
                                      std::span<const double> xi) {
  std::complex<double> total = 0;
  const std::complex<double> I(0, 1);
  for (const auto& mono : PP.monomials) {
    std::complex<double> prod(to_double(mono.value.re), to_double(mono.value.im));
    for (int l : mono.letters) {
      const auto& cls = letter_classes.at(l);
      double pair = 0;
      for (size_t k = 0; k < cls.size(); ++k) pair += cls[k] * xi[k];
      prod *= I * pair;
    }
    total += prod;
  }
  return total;
}

CRational symbol_character_exact(const PrincipalPart& PP,
                                 const std::vector<QVector>& letter_classes,
                                 const QVector& xi) {
  CRational total;
  const CRational I(Rational(0), Rational(1));
  for (const auto& mono : PP.monomials) {
    CRational prod = mono.value;
    for (int l : mono.letters) {
      const auto& cls = letter_classes.at(l);
      Rational pair = 0;
      for (size_t k = 0; k < cls.size(); ++k) pair += cls[k] * xi[k];
      prod = prod * (I * CRational(pair));
    }
    total += prod;
  }
  return total;
}

namespace {

struct NCParser {
  const std::string& text;
  size_t pos = 0;
  int num_gens;
  int base_dim;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() { skip_ws(); return pos < text.size() ? text[pos] : '\0'; }
  bool accept(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }

  // letter token: X<k>
  std::optional<int> try_letter() {
    skip_ws();
    size_t save = pos;
    if (pos < text.size() && text[pos] == 'X') {
      size_t j = pos + 1;
      size_t ds = j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j > ds) {
        int k = std::stoi(text.substr(ds, j - ds));
        if (k >= 1 && k <= num_gens) {
          pos = j;
          return k - 1;
        }
      }
    }
    pos = save;
    return std::nullopt;
  }

  std::vector<NCMonomial> parse_expr() {
    std::vector<NCMonomial> acc = parse_term();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos;
        auto t = parse_term();
        acc.insert(acc.end(), t.begin(), t.end());
      } else if (c == '-') {
        ++pos;
        auto t = parse_term();
        for (auto& m : t) m.scalar = -m.scalar;
        acc.insert(acc.end(), t.begin(), t.end());
      } else {
        break;
      }
    }
    return acc;
  }

  // product of factors; factors multiply by operator composition
  std::vector<NCMonomial> parse_term() {
    std::vector<NCMonomial> acc = parse_factor();
    while (true) {
      char c = peek();
      bool more = (c == '*') || c == '(' || c == 'X' ||
                  std::isdigit(static_cast<unsigned char>(c)) ||
                  (std::isalpha(static_cast<unsigned char>(c)));
      if (c == '*') ++pos;
      else if (!more) break;
      auto f = parse_factor();
      acc = compose(acc, f);
    }
    return acc;
  }

  static std::vector<NCMonomial> compose(const std::vector<NCMonomial>& a,
                                         const std::vector<NCMonomial>& b) {
    // coefficients are functions of the base point and commute with letters
    // only inside a presentation monomial; composing presentations
    // concatenates letters and multiplies coefficients.
    std::vector<NCMonomial> out;
    for (const auto& ma : a)
      for (const auto& mb : b) {
        NCMonomial m;
        m.scalar = ma.scalar * mb.scalar;
        m.coeff = ma.coeff * mb.coeff;
        m.letters = ma.letters;
        m.letters.insert(m.letters.end(), mb.letters.begin(), mb.letters.end());
        out.push_back(std::move(m));
      }
    return out;
  }

  std::vector<NCMonomial> parse_factor() {
    char c = peek();
    if (c == '-') {
      ++pos;
      auto a = parse_factor();
      for (auto& m : a) m.scalar = -m.scalar;
      return a;
    }
    if (c == '+') { ++pos; return parse_factor(); }
    auto base = parse_atom();
    while (accept('^')) {
      skip_ws();
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw std::invalid_argument("expected exponent in '" + text + "'");
      int e = std::stoi(text.substr(start, pos - start));
      std::vector<NCMonomial> acc = {unit_monomial()};
      for (int k = 0; k < e; ++k) acc = compose(acc, base);
      base = acc;
    }
    return base;
  }

  NCMonomial unit_monomial() const {
    NCMonomial m;
    m.coeff = MultiPoly::constant(base_dim, 1);
    return m;
  }

  std::vector<NCMonomial> parse_atom() {
    char c = peek();
    if (c == '(') {
      // parenthesized: either a nested NC expression or a coefficient poly.
      // Try NC first; a parse failure falls back to the commutative parser.
      size_t save = pos;
      ++pos;
      try {
        auto inner = parse_expr();
        if (peek() == ')') { ++pos; return inner; }
      } catch (const std::invalid_argument&) {
      }
      // rewind and scan the balanced group as a coefficient polynomial
      pos = save;
      int depth = 0;
      size_t start = pos;
      do {
        if (text[pos] == '(') ++depth;
        else if (text[pos] == ')') --depth;
        ++pos;
      } while (pos < text.size() && depth > 0);
      if (depth != 0) throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
      std::string group = text.substr(start + 1, pos - start - 2);
      NCMonomial m = unit_monomial();
      m.coeff = parse_poly(group, base_dim);
      return {m};
    }
    if (auto l = try_letter()) {
      NCMonomial m = unit_monomial();
      m.letters.push_back(*l);
      return {m};
    }
    if (c == 'i' && !std::isalnum(static_cast<unsigned char>(
                        pos + 1 < text.size() ? text[pos + 1] : '\0'))) {
      ++pos;
      NCMonomial m = unit_monomial();
      m.scalar = CRational(Rational(0), Rational(1));
      return {m};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '/'))
        ++pos;
      Rational v = rat_from_string(text.substr(start, pos - start));
      NCMonomial m = unit_monomial();
      skip_ws();
      if (pos < text.size() && text[pos] == 'i' &&
          !(pos + 1 < text.size() && std::isalnum(static_cast<unsigned char>(text[pos + 1])))) {
        ++pos;
        m.scalar = CRational(Rational(0), v);
      } else {
        m.scalar = CRational(v);
      }
      return {m};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      // base-coordinate variable
      size_t start = pos;
      ++pos;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string name = text.substr(start, pos - start);
      NCMonomial m = unit_monomial();
      m.coeff = parse_poly(name, base_dim);
      return {m};
    }
    throw std::invalid_argument("unexpected character at position " + std::to_string(pos) +
                                " in '" + text + "'");
  }
};

}  // namespace

NCPolynomial parse_ncpoly(const std::string& text, int num_gens, int base_dim) {
  NCParser p{text, 0, num_gens, base_dim};
  NCPolynomial out;
  out.num_gens = num_gens;
  out.base_dim = base_dim;
  out.monomials = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw std::invalid_argument("trailing input at position " + std::to_string(p.pos) +
                                " in '" + text + "'");
  std::erase_if(out.monomials,
                [](const NCMonomial& m) { return m.scalar.is_zero() || m.coeff.is_zero(); });
  return out;
}

std::string to_string(const NCPolynomial& P) {
  if (P.monomials.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  auto names = default_var_names(P.base_dim);
  for (const auto& m : P.monomials) {
    if (!first) os << " + ";
    first = false;
    os << crat_to_string(m.scalar) << "*(" << m.coeff.to_string(names) << ")";
    for (int l : m.letters) os << "*X" << (l + 1);
  }
  return os.str();
}

}  // namespace hypocalc

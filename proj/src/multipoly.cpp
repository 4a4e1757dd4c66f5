#include "hypocalc/multipoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hypocalc {

Rational rat_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    // decimal literal: scale by a power of ten
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    size_t frac_len = t.size() - dot - 1;
    mpz_class num(digits);
    mpz_class den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    mpz_class num(t.substr(0, slash));
    mpz_class den(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return Rational(mpz_class(t));
}

std::string rat_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string crat_to_string(const CRational& c) {
  if (c.im == 0) return rat_to_string(c.re);
  std::string s = "(" + rat_to_string(c.re);
  s += (c.im > 0) ? "+" : "-";
  s += rat_to_string(abs(c.im)) + "i)";
  return s;
}

MultiPoly MultiPoly::constant(int num_vars, const Rational& c) {
  MultiPoly p(num_vars);
  if (c != 0) p.terms_[Exponents(num_vars, 0)] = c;
  return p;
}

MultiPoly MultiPoly::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars)
    throw std::invalid_argument("variable index out of range");
  MultiPoly p(num_vars);
  Exponents e(num_vars, 0);
  e[index] = 1;
  p.terms_[e] = 1;
  return p;
}

MultiPoly MultiPoly::monomial(int num_vars, const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != num_vars)
    throw std::invalid_argument("exponent arity mismatch");
  MultiPoly p(num_vars);
  if (c != 0) p.terms_[e] = c;
  return p;
}

int MultiPoly::degree() const {
  if (terms_.empty()) return -1;
  const auto& e = terms_.rbegin()->first;  // grlex: last term has max degree
  return std::accumulate(e.begin(), e.end(), 0);
}

Rational MultiPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational MultiPoly::constant_term() const { return coeff(Exponents(num_vars_, 0)); }

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (num_vars_ != o.num_vars_) throw std::invalid_argument("poly arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (num_vars_ != o.num_vars_) throw std::invalid_argument("poly arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator-(const MultiPoly& a) {
  MultiPoly r(a.num_vars_);
  for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("poly arity mismatch");
  MultiPoly r(a.num_vars_);
  Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.num_vars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MultiPoly operator*(const MultiPoly& a, const Rational& c) {
  MultiPoly r(a.num_vars_);
  if (c == 0) return r;
  for (const auto& [e, k] : a.terms_) r.terms_[e] = k * c;
  return r;
}

MultiPoly MultiPoly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  MultiPoly r = constant(num_vars_, 1);
  for (int i = 0; i < k; ++i) r = r * (*this);
  return r;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * Rational(e[var]));
  }
  return r;
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != num_vars_)
    throw std::invalid_argument("point arity mismatch");
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < num_vars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

double MultiPoly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != num_vars_)
    throw std::invalid_argument("point arity mismatch");
  double acc = 0;
  for (const auto& [e, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < num_vars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

MultiPoly MultiPoly::shift(std::span<const Rational> p) const {
  if (static_cast<int>(p.size()) != num_vars_)
    throw std::invalid_argument("point arity mismatch");
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    MultiPoly term = constant(num_vars_, c);
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      MultiPoly lin = variable(num_vars_, i) + constant(num_vars_, p[i]);
      term = term * lin.pow(e[i]);
    }
    r += term;
  }
  return r;
}

MultiPoly MultiPoly::truncate_degree(int K) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) <= K) r.terms_[e] = c;
  return r;
}

MultiPoly MultiPoly::truncate_var_degree(int var, int maxdeg) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_)
    if (e[var] <= maxdeg) r.terms_[e] = c;
  return r;
}

MultiPoly MultiPoly::substitute(int var, const MultiPoly& value) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    rest[var] = 0;
    MultiPoly term = monomial(num_vars_, rest, c);
    if (e[var] > 0) term = term * value.pow(e[var]);
    r += term;
  }
  return r;
}

MultiPoly MultiPoly::coeff_of_var_power(int var, int k) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exponents rest = e;
    rest[var] = 0;
    r.add_term(rest, c);
  }
  return r;
}

MultiPoly MultiPoly::with_num_vars(int new_nv) const {
  MultiPoly r(new_nv);
  for (const auto& [e, c] : terms_) {
    Exponents ne(new_nv, 0);
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (i >= new_nv)
        throw std::invalid_argument("with_num_vars: nonzero exponent beyond new arity");
      ne[i] = e[i];
    }
    r.add_term(ne, c);
  }
  return r;
}

MultiPoly MultiPoly::flip_var(int var) const {
  MultiPoly r(num_vars_);
  for (const auto& [e, c] : terms_)
    r.add_term(e, (e[var] % 2 == 0) ? c : -c);
  return r;
}

std::vector<std::string> default_var_names(int num_vars) {
  std::vector<std::string> names;
  if (num_vars <= 3) {
    const char* xyz[] = {"x", "y", "z"};
    for (int i = 0; i < num_vars; ++i) names.push_back(xyz[i]);
  } else {
    for (int i = 0; i < num_vars; ++i) names.push_back("x" + std::to_string(i + 1));
  }
  return names;
}

std::string MultiPoly::to_string(const std::vector<std::string>& var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // leading (highest-degree) term first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = c;
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_vars = std::accumulate(e.begin(), e.end(), 0) > 0;
    bool coeff_shown = (a != 1) || !has_vars;
    if (coeff_shown) os << rat_to_string(a);
    bool need_star = coeff_shown;
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << var_names[i];
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

std::string MultiPoly::to_string() const { return to_string(default_var_names(num_vars_)); }

namespace {

// Recursive-descent parser shared by polynomials and (via polyfield) vector
// field expressions. Tokens: identifiers, numeric literals, + - * ^ ( ).
struct PolyParser {
  const std::string& text;
  size_t pos = 0;
  int num_vars;

  explicit PolyParser(const std::string& t, int nv) : text(t), num_vars(nv) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() { skip_ws(); return pos >= text.size(); }
  char peek() { skip_ws(); return pos < text.size() ? text[pos] : '\0'; }
  bool accept(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw std::invalid_argument(std::string("expected '") + c + "' at position " +
                                  std::to_string(pos) + " in '" + text + "'");
  }

  int var_index(const std::string& name) const {
    if (num_vars <= 3) {
      const char* xyz[] = {"x", "y", "z"};
      for (int i = 0; i < num_vars; ++i)
        if (name == xyz[i]) return i;
    }
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) {
        int k = std::stoi(name.substr(1));
        if (k >= 1 && k <= num_vars) return k - 1;
      }
    }
    return -1;
  }

  MultiPoly parse_expr() {
    MultiPoly lhs = parse_term();
    while (true) {
      char c = peek();
      if (c == '+') { ++pos; lhs += parse_term(); }
      else if (c == '-') { ++pos; lhs -= parse_term(); }
      else break;
    }
    return lhs;
  }

  MultiPoly parse_term() {
    MultiPoly lhs = parse_factor();
    while (true) {
      char c = peek();
      if (c == '*') { ++pos; lhs = lhs * parse_factor(); }
      else if (c == '(' || std::isalpha(static_cast<unsigned char>(c))) {
        // implicit multiplication: "2x", "x y", "3(x+1)"
        lhs = lhs * parse_factor();
      } else break;
    }
    return lhs;
  }

  MultiPoly parse_factor() {
    // unary sign binds weaker than '^': -x^2 means -(x^2)
    char c = peek();
    if (c == '-') { ++pos; return -parse_factor(); }
    if (c == '+') { ++pos; return parse_factor(); }
    MultiPoly base = parse_atom();
    while (accept('^')) {
      skip_ws();
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw std::invalid_argument("expected exponent in '" + text + "'");
      base = base.pow(std::stoi(text.substr(start, pos - start)));
    }
    return base;
  }

  MultiPoly parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      MultiPoly inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
        ++pos;
      Rational num = rat_from_string(text.substr(start, pos - start));
      skip_ws();
      if (pos < text.size() && text[pos] == '/') {
        size_t save = pos;
        ++pos;
        skip_ws();
        size_t dstart = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (dstart == pos) { pos = save; }
        else {
          Rational den = rat_from_string(text.substr(dstart, pos - dstart));
          if (den == 0) throw std::invalid_argument("division by zero in '" + text + "'");
          num /= den;
        }
      }
      return MultiPoly::constant(num_vars, num);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      ++pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      int idx = var_index(name);
      if (idx < 0)
        throw std::invalid_argument("unknown variable '" + name + "' in '" + text + "'");
      return MultiPoly::variable(num_vars, idx);
    }
    throw std::invalid_argument("unexpected character at position " + std::to_string(pos) +
                                " in '" + text + "'");
  }
};

}  // namespace

MultiPoly parse_poly(const std::string& text, int num_vars) {
  PolyParser p(text, num_vars);
  MultiPoly r = p.parse_expr();
  if (!p.eof())
    throw std::invalid_argument("trailing input at position " + std::to_string(p.pos) +
                                " in '" + text + "'");
  return r;
}

}  // namespace hypocalc

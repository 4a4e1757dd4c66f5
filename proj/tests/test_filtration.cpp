#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hypocalc/filtration.hpp"

using namespace hypocalc;

namespace {

WeightedGenerators heisenberg_gen() {
  // F^1 = <dx>, F^2 = <dx, x dy>, depth 3
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 2), parse_field("x*dy", 2)};
  gen.weights = {1, 2};
  gen.depth = 3;
  return gen;
}

WeightedGenerators grushin_line_gen() {
  // F^1 = <x^2 dx>, F^2 = <x dx>, depth 3 (full at level 3)
  WeightedGenerators gen;
  gen.fields = {parse_field("x^2*dx", 1), parse_field("x*dx", 1)};
  gen.weights = {1, 2};
  gen.depth = 3;
  return gen;
}

WeightedGenerators ladder_gen(int k, int n) {
  // dx weight 1, x^k dy weight n, depth n + k
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 2),
                parse_field("x^" + std::to_string(k) + "*dy", 2)};
  gen.weights = {1, n};
  gen.depth = n + k;
  return gen;
}

std::vector<Rational> qpoint(std::initializer_list<long> xs) {
  std::vector<Rational> p;
  for (long x : xs) p.emplace_back(x);
  return p;
}

}  // namespace

TEST_CASE("filtration levels for the Heisenberg data") {
  auto filt = generate_filtration(heisenberg_gen());
  // level 2: dx, x dy ; level 3 adds [dx, x dy] = dy
  auto lvl2 = filt.level(2);
  CHECK(lvl2.size() == 2);
  bool found_dy = false;
  for (const auto* w : filt.level(3))
    if (w->frame < 0 && w->field == parse_field("dy", 2) && w->letters.size() == 2)
      found_dy = true;
  CHECK(found_dy);
}

TEST_CASE("single generator produces a single level") {
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 1)};
  gen.weights = {1};
  gen.depth = 1;
  auto filt = generate_filtration(gen);
  int non_frame = 0;
  for (const auto& w : filt.words)
    if (w.frame < 0) ++non_frame;
  CHECK(non_frame == 1);
}

TEST_CASE("ladder example produces x^{k-j} dy at weight n+j") {
  auto filt = generate_filtration(ladder_gen(2, 1));  // k=2, n=1, depth 3
  bool found_xdy = false, found_dy = false;
  for (const auto& w : filt.words) {
    if (w.frame >= 0) continue;
    if (w.weight == 2 && w.field == parse_field("2*x*dy", 2)) found_xdy = true;
    if (w.weight == 3 && w.field == parse_field("2*dy", 2)) found_dy = true;
  }
  CHECK(found_xdy);
  CHECK(found_dy);
}

TEST_CASE("bracket blowup guard") {
  WeightedGenerators gen;
  gen.fields = {parse_field("dx + x*dy", 2), parse_field("dy + y*dx", 2)};
  gen.weights = {1, 1};
  gen.depth = 6;
  FiltrationOptions opts;
  opts.word_cap = 2;
  CHECK_THROWS_AS(generate_filtration(gen, opts), BracketBlowupError);
}

TEST_CASE("Hormander check on the Heisenberg example") {
  auto gen = heisenberg_gen();
  auto res = check_hormander(gen, qpoint({0, 0}));
  CHECK(res.holds);
  CHECK_FALSE(res.by_convention);
  REQUIRE(res.witness.size() == 2);
  CHECK(res.witness[0].letters == std::vector<int>{0});
  CHECK(res.witness[1].letters == std::vector<int>{0, 1});  // [dx, x dy]
}

TEST_CASE("Hormander fails for a single horizontal field on R^2") {
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 2)};
  gen.weights = {1};
  gen.depth = 1;
  auto res = check_hormander(gen, qpoint({3, 4}));
  CHECK_FALSE(res.holds);
}

TEST_CASE("Hormander holds by convention for the vanishing example") {
  auto res = check_hormander(grushin_line_gen(), qpoint({0}));
  CHECK(res.holds);
  CHECK(res.by_convention);
}

TEST_CASE("fiber dims for the Heisenberg example") {
  auto gen = heisenberg_gen();
  auto at0 = fiber_dims(gen, qpoint({0, 7}), 3);
  CHECK(at0.dims == std::vector<int>{1, 1, 1});
  CHECK(at0.total_dim() == 3);
  CHECK(at0.stable);

  auto at1 = fiber_dims(gen, qpoint({1, 0}), 3);
  CHECK(at1.dims == std::vector<int>{1, 1, 0});
  CHECK(at1.total_dim() == 2);
  CHECK(at1.stable);
}

TEST_CASE("fiber dims for the vanishing-line example away from 0") {
  auto rep = fiber_dims(grushin_line_gen(), qpoint({2}), 3);
  CHECK(rep.dims == std::vector<int>{1, 0, 0});
}

TEST_CASE("fiber dims for the vanishing-line example at 0") {
  auto rep = fiber_dims(grushin_line_gen(), qpoint({0}), 3);
  CHECK(rep.dims == std::vector<int>{1, 1, 1});
  // basis classes: x^2 dx, x dx, d/dx
  CHECK(rep.basis[0][0].field == parse_field("x^2*dx", 1));
  CHECK(rep.basis[1][0].field == parse_field("x*dx", 1));
  CHECK(rep.basis[2][0].frame == 0);
}

TEST_CASE("jet-order stability across K and K+2 on the paper examples") {
  auto gen = heisenberg_gen();
  auto a = fiber_dims(gen, qpoint({0, 0}), 3);
  auto b = fiber_dims(gen, qpoint({0, 0}), 5);
  CHECK(a.dims == b.dims);

  auto c = fiber_dims(grushin_line_gen(), qpoint({0}), 3);
  auto d = fiber_dims(grushin_line_gen(), qpoint({0}), 5);
  CHECK(c.dims == d.dims);
}

TEST_CASE("upper semicontinuity: nearby dims never exceed the singular point") {
  auto gen = heisenberg_gen();
  auto at0 = fiber_dims(gen, qpoint({0, 0}), 3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-40, 40);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> p{rat(num(rng), 997), rat(num(rng), 997)};
    if (p[0] == 0) continue;
    auto rep = fiber_dims(gen, p, 3);
    CHECK(rep.total_dim() <= at0.total_dim());
    for (size_t i = 0; i < rep.dims.size(); ++i) CHECK(rep.dims[i] <= at0.dims[i]);
  }
}

TEST_CASE("total dim equals dim M at generic points") {
  auto gen = heisenberg_gen();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(1, 50);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> p{rat(num(rng), 7), rat(num(rng), 13)};
    CHECK(fiber_dims(gen, p, 3).total_dim() == 2);
  }
}

TEST_CASE("minimal graded basis for the ladder example at the singular line") {
  int k = 2, n = 1;
  auto gen = ladder_gen(k, n);
  auto basis = minimal_graded_basis(gen, qpoint({0, 5}));
  REQUIRE(basis.fields.size() == 4);  // dx, x^2 dy, 2x dy, 2 dy
  CHECK(basis.weights == std::vector<int>{1, 1, 2, 3});
  CHECK(basis.fields[0] == parse_field("dx", 2));
  CHECK(basis.fields[1] == parse_field("x^2*dy", 2));
}

TEST_CASE("minimal graded basis on a trivial frame") {
  WeightedGenerators gen;
  gen.fields = {parse_field("dx", 2), parse_field("dy", 2)};
  gen.weights = {1, 1};
  gen.depth = 1;
  auto basis = minimal_graded_basis(gen, qpoint({0, 0}));
  REQUIRE(basis.fields.size() == 2);
  CHECK(basis.weights == std::vector<int>{1, 1});
}

TEST_CASE("minimal graded basis for the vanishing example at 0") {
  auto basis = minimal_graded_basis(grushin_line_gen(), qpoint({0}));
  REQUIRE(basis.fields.size() == 3);
  CHECK(basis.weights == std::vector<int>{1, 2, 3});
  CHECK(basis.fields[0] == parse_field("x^2*dx", 1));
  CHECK(basis.fields[1] == parse_field("x*dx", 1));
}

TEST_CASE("osculating algebra is Heisenberg on the singular line") {
  auto gen = heisenberg_gen();
  auto osc = osculating_at(gen, qpoint({0, 3}));
  const auto& g = osc.algebra;
  REQUIRE(g.dim() == 3);
  CHECK(g.weights() == std::vector<int>{1, 2, 3});
  auto e12 = g.bracket_entries(0, 1);
  REQUIRE(e12.size() == 1);
  CHECK(e12[0].k == 2);
  CHECK(e12[0].c == 1);
  CHECK(g.bracket_entries(0, 2).empty());
  CHECK(g.bracket_entries(1, 2).empty());
}

TEST_CASE("osculating algebra is abelian R^2 at generic points") {
  auto gen = heisenberg_gen();
  auto osc = osculating_at(gen, qpoint({1, 0}));
  CHECK(osc.algebra.dim() == 2);
  CHECK(osc.algebra.is_abelian());
}

TEST_CASE("osculating ladder carries integer bracket coefficients") {
  // [dx-class, x^i dy-class] = i x^{i-1} dy-class
  int k = 2, n = 1;
  auto osc = osculating_at(ladder_gen(k, n), qpoint({0, 0}));
  const auto& g = osc.algebra;
  REQUIRE(g.dim() == 4);
  // basis: dx (w1), x^2 dy (w1), 2x dy (w2), 2 dy (w3)
  // [e1, e2] = [dx, x^2 dy] = 2x dy = e3
  auto e12 = g.bracket_entries(0, 1);
  REQUIRE(e12.size() == 1);
  CHECK(e12[0].k == 2);
  CHECK(e12[0].c == 1);
  // [e1, e3] = [dx, 2x dy] = 2 dy = e4
  auto e13 = g.bracket_entries(0, 2);
  REQUIRE(e13.size() == 1);
  CHECK(e13[0].k == 3);
  CHECK(e13[0].c == 1);
}

TEST_CASE("osculating matches free nilpotent for a free system") {
  auto gen = heisenberg_gen();
  auto osc = osculating_at(gen, qpoint({0, 0}));
  auto free_w = free_nilpotent({1, 2}, 3);
  REQUIRE(osc.algebra.dim() == free_w.algebra.dim());
  CHECK(osc.algebra.weights() == free_w.algebra.weights());
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto& a = osc.algebra.bracket_entries(i, j);
      const auto& b = free_w.algebra.bracket_entries(i, j);
      REQUIRE(a.size() == b.size());
      for (size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].k == b[t].k);
        CHECK(a[t].c == b[t].c);
      }
    }
}

TEST_CASE("bracket of stored words lands in the expected level (filtration property)") {
  auto gen = heisenberg_gen();
  auto basis = minimal_graded_basis(gen, qpoint({0, 0}));
  auto filt = generate_filtration(gen);
  for (const auto& u : filt.words) {
    if (u.frame >= 0) continue;
    for (const auto& v : filt.words) {
      if (v.frame >= 0) continue;
      int w = u.weight + v.weight;
      if (w > gen.depth) continue;
      PolyVectorField z = bracket(u.field, v.field);
      CHECK_NOTHROW(fiber_class_coords(gen, basis, z, w));
    }
  }
}

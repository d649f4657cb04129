#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arithdyn/errors.hpp"
#include "arithdyn/parser.hpp"
#include "arithdyn/polymaps.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

AffineMorphism map(std::vector<std::string> c, unsigned n = 1) { return parse_morphism(c, n); }
AffinePoint pt(const std::string& s, unsigned dim, unsigned n = 1) { return parse_point(s, dim, n); }

MultiPoly random_poly(Gen& gen, unsigned nvars, unsigned order, unsigned max_deg, int terms) {
  MultiPoly p(nvars, order);
  for (int t = 0; t < terms; ++t) {
    Exponent e(nvars, 0);
    unsigned budget = static_cast<unsigned>(gen.integer(0, max_deg));
    for (unsigned i = 0; i < nvars && budget > 0; ++i) {
      const unsigned k = static_cast<unsigned>(gen.integer(0, budget));
      e[i] = k;
      budget -= k;
    }
    p.add_term(e, gen.element(order, 4, 3));
  }
  return p;
}

AffineMorphism random_morphism(Gen& gen, unsigned nvars, unsigned order, unsigned deg) {
  std::vector<MultiPoly> comps;
  for (unsigned i = 0; i < nvars; ++i) {
    MultiPoly p = random_poly(gen, nvars, order, deg - 1, 3);
    Exponent top(nvars, 0);
    top[i] = deg;
    p.add_term(top, CyclotomicElement(BigRational(gen.integer(1, 3)), order));
    comps.push_back(p);
  }
  return AffineMorphism(comps);
}

}  // namespace

TEST_CASE("parser and printer") {
  auto p = parse_polynomial("X1^2 - X2^2 + (1/2)*z12^3*X1", 2, 12);
  CHECK(p.term_count() == 3);
  CHECK(parse_polynomial(p.to_string(), 2, 12) == p);
  CHECK(parse_polynomial("-(X1 + 1)^2", 1, 1) == parse_polynomial("-X1^2 - 2*X1 - 1", 1, 1));
  CHECK(parse_polynomial("X1/2", 1, 1).to_string() == "(1/2)*X1");
  CHECK(parse_polynomial("z4*z4", 1, 4) == parse_polynomial("-1", 1, 4));
  CHECK(parse_polynomial("z6", 1, 3) == parse_polynomial("-z3^2", 1, 3));
  CHECK(parse_constant("3/2", 1) == CyclotomicElement(BigRational(3, 2)));
  CHECK(parse_point("3/2, 5", 2, 1).coords[1] == CyclotomicElement(5));
  CHECK(parse_point("(1 + z5), 2", 2, 5).coords[0] == CyclotomicElement(1) + CyclotomicElement::zeta(5));

  CHECK_THROWS_AS(parse_polynomial("X3", 2, 1), parse_error);
  CHECK_THROWS_AS(parse_polynomial("z7", 1, 4), parse_error);
  CHECK_THROWS_AS(parse_polynomial("1/X1", 1, 1), parse_error);
  CHECK_THROWS_AS(parse_polynomial("1/0", 1, 1), parse_error);
  CHECK_THROWS_AS(parse_polynomial("X1 +", 1, 1), parse_error);
  CHECK_THROWS_AS(parse_polynomial("(X1", 1, 1), parse_error);
  CHECK_THROWS_AS(parse_point("1, 2", 1, 1), parse_error);
  try {
    parse_polynomial("X1 +\n  $", 1, 1);
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }

  Gen gen(21);
  for (int t = 0; t < 50; ++t) {
    const unsigned orders[] = {1, 3, 5, 12};
    const unsigned n = orders[t % 4];
    auto q = random_poly(gen, 3, n, 4, 5);
    CHECK(parse_polynomial(q.to_string(), 3, n) == q);
  }
}

TEST_CASE("evaluate") {
  CHECK(map({"X1^2 - 1"}).evaluate(pt("0", 1)) == pt("-1", 1));
  CHECK(map({"X1^2 + X2^2", "X2^2"}).evaluate(pt("1, 2", 2)) == pt("5, 4", 2));
  CHECK(map({"X1^2"}).evaluate(pt("1", 1)) == pt("1", 1));
}

TEST_CASE("compose") {
  CHECK(compose(map({"X1^2"}), map({"X1^3"})) == map({"X1^6"}));
  CHECK(compose(map({"X1^2 - 1"}), map({"X1^2 - 1"})) == map({"X1^4 - 2*X1^2"}));
  auto f = map({"X1^2 + X2", "X1*X2 - 3"});
  CHECK(compose(f, map({"X1", "X2"})) == f);
  CHECK(compose(map({"X1", "X2"}), f) == f);

  Gen gen(22);
  for (int t = 0; t < 50; ++t) {
    const unsigned nv = 1 + static_cast<unsigned>(t % 2);
    const unsigned order = t % 3 == 0 ? 3 : 1;
    auto a = random_morphism(gen, nv, order, 2 + static_cast<unsigned>(t % 2));
    auto b = random_morphism(gen, nv, order, 2);
    auto ab = compose(a, b);
    CHECK(ab.degree() == a.degree() * b.degree());
    if (t < 15) {
      std::vector<CyclotomicElement> x;
      for (unsigned i = 0; i < nv; ++i) x.push_back(gen.element(order, 5, 3));
      AffinePoint p(x);
      CHECK(ab.evaluate(p) == a.evaluate(b.evaluate(p)));
    }
  }
}

TEST_CASE("lift") {
  auto l = lift(map({"X1^2 - 1"}));
  CHECK(l.components.size() == 2);
  CHECK(l.components[0] == parse_polynomial("X1^2 - X2^2", 2, 1));
  CHECK(l.components[1] == parse_polynomial("X2^2", 2, 1));
  auto l2 = lift(map({"X1^2", "X2^2"}));
  CHECK(l2.components[2] == parse_polynomial("X3^2", 3, 1));
  CHECK(lift(map({"X1^2 + 1/2"})).components[0] == parse_polynomial("X1^2 + (1/2)*X2^2", 2, 1));

  // Lift evaluated at (P, 1) agrees with (F(P), 1) up to the common scalar 1.
  Gen gen(23);
  for (int t = 0; t < 20; ++t) {
    auto f = random_morphism(gen, 2, t % 2 ? 5 : 1, 3);
    auto lf = lift(f);
    std::vector<CyclotomicElement> x{gen.element(f.order(), 5, 3), gen.element(f.order(), 5, 3)};
    auto img = f.evaluate(AffinePoint(x));
    x.push_back(CyclotomicElement(1));
    auto h = lf.evaluate(x);
    CHECK(h[2].is_one());
    CHECK(h[0] == img.coords[0]);
    CHECK(h[1] == img.coords[1]);
    for (const auto& c : lf.components) CHECK(c.is_homogeneous());
    // Scaling the input by lambda scales the output by lambda^d.
    const auto lambda = gen.nonzero_element(f.order(), 4, 2);
    std::vector<CyclotomicElement> y;
    for (const auto& c : x) y.push_back(c * lambda);
    auto hy = lf.evaluate(y);
    for (std::size_t i = 0; i < 3; ++i) CHECK(hy[i] == h[i] * lambda.pow(lf.degree));
  }
}

TEST_CASE("galois conjugate of maps") {
  CHECK(conjugate_map(map({"X1^2 - 1"}), 1) == map({"X1^2 - 1"}));
  CHECK(conjugate_map(map({"z3*X1^2"}, 3), 2) == map({"z3^2*X1^2"}, 3));
  Gen gen(24);
  for (int t = 0; t < 20; ++t) {
    auto f = random_morphism(gen, 2, 7, 2);
    AffinePoint p({gen.element(7, 5, 2), gen.element(7, 5, 2)});
    for (long k : {2L, 3L, 6L}) {
      CHECK(conjugate_map(f, k).evaluate(p.galois_conjugate(k)) == f.evaluate(p).galois_conjugate(k));
    }
  }
}

TEST_CASE("nonconstant term count") {
  auto t = LaurentPoly::monomial(1, CyclotomicElement(1));
  auto tinv = LaurentPoly::monomial(-1, CyclotomicElement(1));
  CHECK(nonconstant_term_count(map({"X1^5"}), {t}) == 1);
  auto q = t;
  q += tinv;
  CHECK(nonconstant_term_count(map({"X1^2 - 1"}), {q}) == 2);
  CHECK(nonconstant_term_count(map({"X1^2 - 1"}), {LaurentPoly::monomial(0, CyclotomicElement(3))}) == 0);
  CHECK(nonconstant_term_count(map({"X1^2 - 2"}), {q}) == 2);
  CHECK(nonconstant_term_count(map({"X1^3 - 3*X1"}), {q}) == 2);  // Chebyshev
}

TEST_CASE("unitary monomial form") {
  auto f = map({"z3*X2^2", "X1^2"}, 3);
  auto form = is_unitary_monomial_form(f);
  REQUIRE(form.has_value());
  CHECK(form->permutation == std::vector<unsigned>{1, 0});
  CHECK(form->diagonal[0] == CyclotomicElement::zeta(3));
  CHECK(form->diagonal[1].is_one());
  CHECK(form->exponent == 2);
  CHECK(recompose(*form, 3) == f);
  CHECK_FALSE(is_unitary_monomial_form(map({"X1^2 - 1"})).has_value());
  CHECK_FALSE(is_unitary_monomial_form(map({"2*X2^2", "X1^2"})).has_value());
  CHECK_FALSE(is_unitary_monomial_form(map({"X1^2", "X1^2"})).has_value());
  CHECK_FALSE(is_unitary_monomial_form(map({"X1^2", "X2^3"})).has_value());
  CHECK_FALSE(is_unitary_monomial_form(map({"X1*X2", "X2^2"})).has_value());
  CHECK(is_unitary_monomial_form(map({"-X1^3"})).has_value());
  CHECK_FALSE(is_unitary_monomial_form(map({"(z5 + z5^4)*X1^2"}, 5)).has_value());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arithdyn/errors.hpp"
#include "arithdyn/nullstellensatz.hpp"
#include "arithdyn/parser.hpp"
#include "size_bounds.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

ProjectiveLift lift_of(std::vector<std::string> c, unsigned n = 1) { return lift(parse_morphism(c, n)); }

MultiPoly poly(const std::string& s, unsigned nv, unsigned n = 1) { return parse_polynomial(s, nv, n); }

}  // namespace

TEST_CASE("monomial enumeration") {
  auto m = monomials_of_degree(3, 2);
  CHECK(m.size() == 6);
  CHECK(m.front() == Exponent{2, 0, 0});
  CHECK(m.back() == Exponent{0, 0, 2});
  CHECK(monomials_of_degree(2, 0) == std::vector<Exponent>{{0, 0}});
}

TEST_CASE("certificates for fixtures") {
  auto l = lift_of({"X1^2"});
  auto c = find_certificate(l);
  REQUIRE(c.has_value());
  CHECK(c->e == 2);
  CHECK(c->g[0][0] == poly("1", 2));
  CHECK(c->g[0][1].is_zero());
  CHECK(c->g[1][1] == poly("1", 2));
  CHECK(verify_certificate(l, *c));

  auto l2 = lift_of({"X1^2 - 1"});
  auto c2 = find_certificate(l2);
  REQUIRE(c2.has_value());
  CHECK(c2->e == 2);
  CHECK(c2->g[0][0] == poly("1", 2));
  CHECK(c2->g[0][1] == poly("1", 2));
  CHECK(c2->g[1][0].is_zero());
  CHECK(c2->g[1][1] == poly("1", 2));
  CHECK(verify_certificate(l2, *c2));

  for (const auto& comps : std::vector<std::vector<std::string>>{
           {"X1^2 + X2^2", "X1*X2 + X2^2 + 1"},
           {"X1^3 - 3*X1 + 1"},
           {"X1^2 + X2", "X2^2 - X1"},
           {"X1^3 + 2*X1*X2", "X2^3 - X1"}}) {
    auto lf = lift_of(comps);
    auto cf = find_certificate(lf);
    CHECK(cf.has_value());
    if (cf) CHECK(verify_certificate(lf, *cf));
  }
  auto lz = lift_of({"z3*X1^2 + (1 + z3)*X1 - z3^2"}, 3);
  auto cz = find_certificate(lz);
  REQUIRE(cz.has_value());
  CHECK(verify_certificate(lz, *cz));
}

TEST_CASE("common zero has no certificate") {
  ProjectiveLift l;
  l.dimension = 1;
  l.degree = 2;
  l.components = {poly("X1*X2", 2), poly("X1^2", 2)};
  CHECK_FALSE(find_certificate(l, 8).has_value());
  CHECK_THROWS_AS(find_certificate(l, 1), domain_error);
  // Lift vanishes at (1 : 0 : 0).
  CHECK_FALSE(find_certificate(lift_of({"X1*X2", "X2^2"}), 6).has_value());
  CHECK(find_certificate(lift_of({"X1^2 + X2", "X1^2 + X2^2"}), 8).has_value());
}

TEST_CASE("tampered certificate is rejected") {
  auto l = lift_of({"X1^2 - 1"});
  auto c = *find_certificate(l);
  CHECK(verify_certificate(l, c));
  c.g[0][1] += poly("1", 2);
  CHECK_FALSE(verify_certificate(l, c));
}

TEST_CASE("certificate json round trip") {
  auto l = lift_of({"z5*X1^2 + X2/3", "X2^2 - X1"}, 5);
  auto c = find_certificate(l);
  REQUIRE(c.has_value());
  auto j = certificate_to_json(*c);
  auto back = certificate_from_json(j, 3, 5);
  CHECK(back.e == c->e);
  CHECK(back.g == c->g);
  CHECK(verify_certificate(l, back));
}

TEST_CASE("effective constants") {
  auto l = lift_of({"X1^2"});
  auto k = effective_constants(l, *find_certificate(l));
  CHECK(k.D == 1);
  CHECK(k.C == BigRational(1, 2));
  auto l2 = lift_of({"X1^2 - 1"});
  auto k2 = effective_constants(l2, *find_certificate(l2));
  CHECK(k2.D == 2);
  CHECK(k2.C == BigRational(1, 2));
  CHECK(k2.g_norm[0].contains(BigRational(1)));
  auto l3 = lift_of({"X1^2 + X2^2", "X1*X2 + X2^2"});
  auto c3 = find_certificate(l3);
  REQUIRE(c3.has_value());
  CHECK(effective_constants(l3, *c3).D == 2);
}

TEST_CASE("two-sided size bounds on random samples") {
  Gen gen(41);
  struct Fixture {
    std::vector<std::string> comps;
    unsigned n;
  };
  const std::vector<Fixture> fixtures = {{{"X1^2 - 1"}, 1},
                                         {{"2*X1^3 - X1/3 + 5"}, 1},
                                         {{"X1^2 + X2", "X2^2 - X1/2"}, 1},
                                         {{"z3*X1^2 + 2"}, 3},
                                         {{"X1^2 + z4*X2", "X2^2 - X1"}, 4}};
  for (const auto& f : fixtures) {
    auto l = lift_of(f.comps, f.n);
    auto c = *find_certificate(l);
    auto k = effective_constants(l, c);
    for (int t = 0; t < 40; ++t) {
      std::vector<CyclotomicElement> x;
      for (std::size_t i = 0; i < f.comps.size(); ++i) x.push_back(gen.element(f.n, 30, 30));
      AffinePoint p(x);
      CHECK(testsupport::archimedean_size_check(l, k, p).ok());
      if (f.n == 1) {
        for (long prime : {2L, 3L, 5L, 7L}) {
          CHECK(testsupport::finite_size_check(l, c, p, RationalPlace::prime(prime)).ok());
        }
      }
    }
  }
}

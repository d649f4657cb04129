#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "arithdyn/errors.hpp"
#include "arithdyn/orbits.hpp"
#include "arithdyn/parallel.hpp"
#include "arithdyn/parser.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

SemigroupSystem sys1(std::vector<std::string> maps, unsigned n = 1) {
  std::vector<AffineMorphism> g;
  for (const auto& m : maps) g.push_back(parse_morphism({m}, n));
  return SemigroupSystem(g, n);
}

AffinePoint pt(const std::string& s, unsigned dim = 1, unsigned n = 1) { return parse_point(s, dim, n); }

std::vector<AffinePoint> points_of(const std::vector<OrbitEntry>& level) {
  std::vector<AffinePoint> out;
  for (const auto& e : level) out.push_back(e.point);
  return out;
}

std::set<AffinePoint, PointLess> set_of(std::vector<std::string> xs, unsigned n = 1) {
  std::set<AffinePoint, PointLess> out;
  for (const auto& x : xs) out.insert(pt(x, 1, n));
  return out;
}

std::set<AffinePoint, PointLess> as_set(const std::vector<OrbitEntry>& level) {
  std::set<AffinePoint, PointLess> out;
  for (const auto& e : level) out.insert(e.point);
  return out;
}

// Every word of length k, applied one at a time, with multiplicities.
std::map<AffinePoint, BigInt, PointLess> naive_level(const SemigroupSystem& sys, const AffinePoint& p, unsigned k) {
  std::map<AffinePoint, BigInt, PointLess> out;
  Word w(k, 0);
  for (;;) {
    out[sys.apply(w, p)] += 1;
    unsigned i = k;
    while (i > 0 && ++w[i - 1] == sys.size()) w[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("orbit level examples") {
  auto a = orbit_levels(sys1({"X1^2 - 1"}), pt("0"), 3);
  REQUIRE(a.levels.size() == 4);
  CHECK(points_of(a.levels[0]) == std::vector<AffinePoint>{pt("0")});
  CHECK(points_of(a.levels[1]) == std::vector<AffinePoint>{pt("-1")});
  CHECK(points_of(a.levels[2]) == std::vector<AffinePoint>{pt("0")});
  CHECK(points_of(a.levels[3]) == std::vector<AffinePoint>{pt("-1")});
  CHECK_FALSE(a.truncated);

  auto b = orbit_levels(sys1({"X1^2", "X1^2 - 1"}), pt("1"), 2);
  CHECK(as_set(b.levels[0]) == set_of({"1"}));
  CHECK(as_set(b.levels[1]) == set_of({"1", "0"}));
  CHECK(as_set(b.levels[2]) == set_of({"1", "0", "-1"}));
  CHECK(b.find(2, pt("-1")).has_value());
  CHECK_FALSE(b.find(1, pt("-1")).has_value());

  auto c = orbit_levels(sys1({"X1^2"}), pt("5/3"), 0);
  REQUIRE(c.levels.size() == 1);
  CHECK(c.levels[0][0].point == pt("5/3"));
  CHECK(c.levels[0][0].witness.empty());
}

TEST_CASE("witness words evaluate to their points") {
  auto sys = sys1({"X1^2", "X1^2 - 1", "X1^3 + X1"});
  auto lv = orbit_levels(sys, pt("1/2"), 3);
  for (std::size_t k = 0; k < lv.levels.size(); ++k) {
    for (const auto& e : lv.levels[k]) {
      CHECK(e.witness.size() == k);
      CHECK(sys.apply(e.witness, pt("1/2")) == e.point);
    }
  }
  CHECK(word_to_string({0, 2, 1}) == "1 3 2");
}

TEST_CASE("memoized levels match naive enumeration") {
  Gen gen(51);
  for (int t = 0; t < 25; ++t) {
    const unsigned n = (t % 3 == 0) ? 4 : 1;
    const std::size_t s = 1 + t % 3;
    std::vector<AffineMorphism> maps;
    for (std::size_t i = 0; i < s; ++i) {
      // Small maps with repeated values so dedup matters: a x^d + b x + c.
      const long d = gen.integer(2, 3);
      MultiPoly f = MultiPoly::monomial(1, {static_cast<unsigned>(d)}, CyclotomicElement(gen.integer(-1, 1) == 0 ? 1L : -1L));
      f += MultiPoly::constant(1, CyclotomicElement(gen.integer(-1, 1)));
      if (n == 4 && gen.coin()) f += MultiPoly::constant(1, CyclotomicElement::zeta(4, 1));
      maps.push_back(AffineMorphism({f}));
    }
    SemigroupSystem sys(maps, n);
    const AffinePoint p({CyclotomicElement(BigRational(gen.integer(-1, 1)), n)});
    auto lv = orbit_levels(sys, p, 4);
    for (unsigned k = 0; k <= 4; ++k) {
      const auto naive = naive_level(sys, p, k);
      REQUIRE(lv.levels[k].size() == naive.size());
      BigInt sk = 1;
      for (unsigned j = 0; j < k; ++j) sk *= static_cast<unsigned long>(s);
      CHECK(BigInt(static_cast<unsigned long>(lv.levels[k].size())) <= sk);
      BigInt total = 0;
      for (const auto& e : lv.levels[k]) {
        auto it = naive.find(e.point);
        REQUIRE(it != naive.end());
        CHECK(it->second == e.multiplicity);
        total += e.multiplicity;
      }
      CHECK(total == sk);
    }
  }
}

TEST_CASE("orbit output does not depend on the worker count") {
  auto sys = sys1({"X1^2 - 1", "X1^2 + 1/2", "2*X1^3"});
  set_worker_count(1);
  auto a = orbit_levels(sys, pt("1/3"), 4);
  set_worker_count(4);
  auto b = orbit_levels(sys, pt("1/3"), 4);
  set_worker_count(1);
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t k = 0; k < a.levels.size(); ++k) {
    REQUIRE(a.levels[k].size() == b.levels[k].size());
    for (std::size_t i = 0; i < a.levels[k].size(); ++i) {
      CHECK(a.levels[k][i].point == b.levels[k][i].point);
      CHECK(a.levels[k][i].witness == b.levels[k][i].witness);
    }
  }
}

TEST_CASE("orbit caps") {
  OrbitCaps caps;
  caps.max_level_size = 3;
  auto lv = orbit_levels(sys1({"X1^2", "X1^2 + 1", "X1^2 + 2"}), pt("3"), 3, caps);
  CHECK(lv.truncated);
  CHECK(lv.levels.size() == 2);
  CHECK_FALSE(lv.cap_hit.empty());
  OrbitCaps bits;
  bits.max_point_bits = 64;
  auto big = orbit_levels(sys1({"X1^2"}), pt("3"), 10, bits);
  CHECK(big.truncated);
}

TEST_CASE("collision search examples") {
  auto a = collision_search(sys1({"X1^2 - 1"}), pt("0"), 3);
  REQUIRE(a.collisions.size() == 1);
  CHECK(a.collisions[0].n == 1);
  CHECK(a.collisions[0].m == 3);
  CHECK(a.collisions[0].witness == pt("-1"));

  CHECK(collision_search(sys1({"X1^2"}), pt("2"), 8).collisions.empty());

  auto c = collision_search(sys1({"X1^2", "X1^3"}, 3), pt("z3", 1, 3), 2);
  REQUIRE(c.collisions.size() == 1);
  CHECK(c.collisions[0].n == 1);
  CHECK(c.collisions[0].m == 2);
  CHECK(c.collisions[0].witness == pt("1", 1, 3));
  auto sys = sys1({"X1^2", "X1^3"}, 3);
  CHECK(sys.apply(c.collisions[0].word_n, pt("z3", 1, 3)) == c.collisions[0].witness);
  CHECK(sys.apply(c.collisions[0].word_m, pt("z3", 1, 3)) == c.collisions[0].witness);
  CHECK_THROWS_AS(collision_search(sys, pt("1", 1, 3), 0), domain_error);
}

TEST_CASE("preperiodicity search examples") {
  auto a = pi_membership(sys1({"X1^2 - 1"}), pt("0"), 4, 4);
  REQUIRE(a.found());
  CHECK(a.witness->k == 0);
  CHECK(a.witness->l == 2);
  CHECK(a.witness->ret == Word{0, 0});

  auto b = pi_membership(sys1({"X1^2"}, 5), pt("z5", 1, 5), 2, 8);
  REQUIRE(b.found());
  CHECK(b.witness->k == 0);
  CHECK(b.witness->l == 4);

  auto c = pi_membership(sys1({"X1^2"}), pt("2"), 8, 8);
  CHECK_FALSE(c.found());
  CHECK_FALSE(c.truncated);
  CHECK(c.k_max == 8);
  CHECK(c.l_max == 8);

  // 1/2 -> -3/4 -> -7/16 -> ... never returns, but 1 -> 0 -> -1 -> 0 does after one step.
  auto d = pi_membership(sys1({"X1^2 - 1"}), pt("1"), 3, 3);
  REQUIRE(d.found());
  CHECK(d.witness->k == 1);
  CHECK(d.witness->point == pt("0"));
}

TEST_CASE("periodic path points have house at most L") {
  struct Case {
    std::vector<std::string> maps;
    unsigned n;
    std::string p;
  };
  const std::vector<Case> cases = {{{"X1^2 - 1"}, 1, "1"},      {{"X1^2"}, 7, "z7^3"},
                                   {{"X1^2", "X1^3"}, 3, "z3"}, {{"X1^2 - 2"}, 1, "-1"},
                                   {{"X1^2 - 2"}, 1, "0"},      {{"X1^3"}, 12, "z12 + 0"}};
  for (const auto& c : cases) {
    auto sys = sys1(c.maps, c.n);
    auto r = pi_membership(sys, pt(c.p, 1, c.n), 4, 6);
    REQUIRE(r.found());
    const Interval L = house_bound_L(sys, BigRational(1));
    CHECK_FALSE(L.certainly_less(house(r.witness->point).enclosure()));
    CHECK(sys.apply(r.witness->ret, r.witness->point) == r.witness->point);
  }
}

TEST_CASE("growth check examples") {
  auto a = growth_check(sys1({"X1^2"}), pt("1/2"), RationalPlace::prime(2), {0, 0});
  CHECK(a.precondition_met);
  CHECK(a.threshold == 1);
  CHECK(a.values == std::vector<BigRational>{2, 4, 16});
  CHECK(a.strictly_increasing);

  auto b = growth_check(sys1({"X1^2 - 1"}), pt("3"), RationalPlace::archimedean(), {0, 0});
  CHECK(b.threshold == 2);
  CHECK(b.precondition_met);
  CHECK(b.values == std::vector<BigRational>{3, 8, 63});
  CHECK(b.strictly_increasing);

  auto c = growth_check(sys1({"X1^2 - 1"}), pt("3/2"), RationalPlace::archimedean(), {0});
  CHECK_FALSE(c.precondition_met);

  CHECK_THROWS_AS(growth_check(sys1({"X1^2"}, 3), pt("z3", 1, 3), RationalPlace::prime(3), {0}), domain_error);
}

TEST_CASE("growth check never fails above the threshold") {
  Gen gen(52);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t s = 1 + t % 2;
    std::vector<AffineMorphism> maps;
    for (std::size_t i = 0; i < s; ++i) {
      const unsigned d = static_cast<unsigned>(gen.integer(2, 3));
      MultiPoly f = MultiPoly::monomial(1, {d}, CyclotomicElement(gen.nonzero_rational(5, 3)));
      f += MultiPoly::monomial(1, {1}, CyclotomicElement(gen.rational(5, 3)));
      f += MultiPoly::constant(1, CyclotomicElement(gen.rational(5, 3)));
      maps.push_back(AffineMorphism({f}));
    }
    SemigroupSystem sys(maps);
    const bool arch = gen.coin();
    const RationalPlace v = arch ? RationalPlace::archimedean() : RationalPlace::prime(gen.coin() ? 2 : 3);
    const BigRational threshold = growth_check(sys, pt("0"), v, {}).threshold;
    BigRational x;
    if (arch) {
      const BigRational q = gen.rational(20, 7);
      x = threshold + q * q + BigRational(1, 100);
      if (gen.coin()) x = -x;
    } else {
      // |p^{-k}|_p = p^k exceeds the threshold for large enough k.
      BigInt pk = 1;
      while (BigRational(pk) <= threshold) pk *= v.p();
      x = BigRational(gen.integer(-5, 5) * v.p() + 1, pk);
      x.canonicalize();
    }
    Word w;
    for (int j = 0; j < 1 + t % 3; ++j) w.push_back(static_cast<unsigned>(gen.integer(0, static_cast<long>(s) - 1)));
    auto r = growth_check(sys, AffinePoint({CyclotomicElement(x)}), v, w);
    if (!r.precondition_met) continue;
    ++checked;
    CHECK(r.strictly_increasing);
  }
  CHECK(checked == 300);
}

TEST_CASE("house bound L") {
  CHECK(house_bound_L(sys1({"X1^2"}), BigRational(1)).contains(BigRational(2)));
  CHECK(house_bound_L(sys1({"X1^2 - 1"}), BigRational(1)).contains(BigRational(2)));
  CHECK(house_bound_L(sys1({"X1^2"}), BigRational(7)).contains(BigRational(7)));
  CHECK(house_bound_L(sys1({"X1^2"}, 5), BigRational(1)).contains(BigRational(2)));
}

TEST_CASE("house bound M") {
  auto a = house_bound_M(sys1({"X1^3"}), BigRational(1));
  CHECK(a.m == 3);
  CHECK(a.C == BigRational(1, 2));
  CHECK(a.M.contains(BigRational(19)));
  auto b = house_bound_M(sys1({"X1^3", "X1^3"}), BigRational(1));
  CHECK(b.M.contains(BigRational(37)));
  auto c = house_bound_M(sys1({"X1^3"}), BigRational(2));
  CHECK(c.M.contains(BigRational(37)));
  CHECK_THROWS_AS(house_bound_M(sys1({"X1^2"}), BigRational(1)), hypothesis_error);
  CHECK_THROWS_AS(house_bound_M(sys1({"X1^2", "X1^3"}), BigRational(1)), hypothesis_error);
  CHECK_THROWS_AS(house_bound_M(sys1({"X1^3"}), BigRational(1, 2)), domain_error);
}

TEST_CASE("candidate boxes") {
  auto r = CandidateBox::rational(1, 3, 3);
  CHECK(r.size() == 15);
  auto vals = r.coordinate_values();
  CHECK(vals.front() == CyclotomicElement(-3));
  CHECK(vals.back() == CyclotomicElement(3));
  CHECK(CandidateBox::rational(2, 3, 3).enumerate(1000).size() == 225);
  CHECK_THROWS_AS(CandidateBox::rational(2, 3, 3).enumerate(100), cap_exceeded);
  auto z = CandidateBox::cyclotomic_integers(1, 3, 1);
  CHECK(z.size() == 9);
  CHECK(z.enumerate(100).size() == 9);
  for (const auto& q : z.enumerate(100)) CHECK(q.is_integral());
}

TEST_CASE("sigma_A search examples") {
  auto sys = sys1({"X1^3"});
  auto r = sigma_A_search(sys, BigRational(1), {pt("1")}, CandidateBox::rational(1, 3, 3));
  std::vector<AffinePoint> found;
  for (const auto& h : r.hits) found.push_back(h.point);
  CHECK(found == std::vector<AffinePoint>{pt("-1"), pt("0"), pt("1")});
  REQUIRE(r.bound.has_value());
  CHECK(r.bound->M.contains(BigRational(19)));
  CHECK(r.E == 1);
  CHECK(r.candidates == 15);
  for (const auto& h : r.hits) {
    CHECK(h.house_ok);
    CHECK(h.integral_ok);
    CHECK(h.n == 1);
  }
  CHECK(r.empirical_max_house.contains(BigRational(1)));

  auto z = sigma_A_search(sys1({"X1^2 - 1"}), BigRational(1), {pt("0")}, CandidateBox::rational(1, 3, 3));
  found.clear();
  for (const auto& h : z.hits) found.push_back(h.point);
  CHECK(found == std::vector<AffinePoint>{pt("-1"), pt("1")});
  CHECK_FALSE(z.bound.has_value());

  CHECK(sigma_A_search(sys, BigRational(1), {}, CandidateBox::rational(1, 3, 3)).hits.empty());
  CHECK_THROWS_AS(sigma_A_search(sys, BigRational(1), {pt("1/2")}, CandidateBox::rational(1, 3, 3)),
                  hypothesis_error);
}

TEST_CASE("sigma_A hits carry consistent certificates") {
  auto sys = sys1({"X1^3 - X1", "X1^3"});
  SigmaOptions opt;
  opt.n_max = 2;
  auto r = sigma_A_search(sys, BigRational(2), {pt("0"), pt("1"), pt("-1"), pt("2")}, CandidateBox::rational(1, 4, 2),
                          opt);
  CHECK_FALSE(r.hits.empty());
  for (const auto& h : r.hits) {
    CHECK(h.house_ok);
    CHECK(h.integral_ok);
    // Recompute the combination from the reported words and gammas.
    const std::vector<AffinePoint> gammas{pt("0"), pt("1"), pt("-1"), pt("2")};
    CyclotomicElement sum(0);
    for (const auto& [w, g] : h.gammas) sum += gammas[g].coords[0] * sys.apply(w, h.point).coords[0];
    CHECK(sys.apply(h.word, h.point).coords[0] == sum);
    CHECK(h.word.size() == h.n);
  }
  SigmaOptions c = opt;
  c.mode = GammaMode::constant;
  auto rc = sigma_A_search(sys, BigRational(1), {pt("1")}, CandidateBox::rational(1, 3, 1), c);
  for (const auto& h : rc.hits) {
    for (const auto& [w, g] : h.gammas) CHECK(g == 0);
  }
}

TEST_CASE("sigma_A over a cyclotomic box") {
  auto sys = sys1({"X1^3"}, 3);
  auto r = sigma_A_search(sys, BigRational(1), {pt("1", 1, 3), pt("z3", 1, 3)},
                          CandidateBox::cyclotomic_integers(1, 3, 1));
  CHECK_FALSE(r.hits.empty());
  for (const auto& h : r.hits) {
    CHECK(h.house_ok);
    CHECK(h.integral_ok);
  }
}

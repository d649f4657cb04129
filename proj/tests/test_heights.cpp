#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "arithdyn/errors.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/parser.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

AffinePoint pt(const std::string& s, unsigned dim, unsigned n = 1) { return parse_point(s, dim, n); }

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  n = std::labs(n);
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Place-by-place height of (1 : x_1 : ... : x_N) over Q, in long double.
long double oracle_height(const std::vector<std::pair<long, long>>& xs) {
  long double arch = 0;
  for (auto [a, b] : xs) arch = std::max(arch, std::fabs(static_cast<long double>(a) / b));
  long double total = std::log(std::max(1.0L, arch));
  std::vector<long> primes;
  for (auto [a, b] : xs) {
    for (long p : prime_factors(b)) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (long p : primes) {
    long worst = 0;  // max of -v_p(x_i), at least 0
    for (auto [a, b] : xs) {
      if (a == 0) continue;
      long v = 0;
      long aa = std::labs(a), bb = b;
      while (aa % p == 0) {
        aa /= p;
        ++v;
      }
      while (bb % p == 0) {
        bb /= p;
        --v;
      }
      worst = std::max(worst, -v);
    }
    total += worst * std::log(static_cast<long double>(p));
  }
  return total;
}

}  // namespace

TEST_CASE("weil height examples") {
  auto h = weil_height(pt("3/2, 5", 2));
  CHECK(std::abs(h.value() - std::log(10.0)) < 1e-14);
  CHECK(h.error() < 1e-60);
  CHECK(h.enclosure().contains(std::log(10.0)) == false);  // double log 10 is not within 2^-250
  CHECK(weil_height(pt("1, 1", 2)).value() == 0.0);
  CHECK(std::abs(weil_height(pt("z5", 1, 5)).value()) < 1e-60);
  CHECK(weil_height(pt("z5", 1, 5)).enclosure().contains_zero());
  CHECK(std::abs(weil_height(pt("0", 1)).value()) == 0.0);
  CHECK_THROWS_AS(projective_height({CyclotomicElement(0)}), domain_error);
}

TEST_CASE("weil height against place-by-place oracle") {
  Gen gen(31);
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + t % 3;
    std::vector<std::pair<long, long>> xs;
    std::vector<CyclotomicElement> coords;
    for (int i = 0; i < dim; ++i) {
      BigRational q = gen.rational(10000, 10000);
      xs.emplace_back(q.get_num().get_si(), q.get_den().get_si());
      coords.emplace_back(q);
    }
    auto h = weil_height(AffinePoint(coords));
    CHECK(std::abs(h.value() - static_cast<double>(oracle_height(xs))) < 1e-12);
  }
}

TEST_CASE("any denominator-clearing scalar gives the same height") {
  Gen gen(32);
  for (int t = 0; t < 30; ++t) {
    std::vector<CyclotomicElement> v{gen.element(5, 9, 6), gen.element(5, 9, 6), CyclotomicElement(BigRational(1), 5)};
    auto h1 = projective_height(v);
    const auto lambda = CyclotomicElement(BigRational(gen.integer(1, 50)), 5);
    for (auto& x : v) x *= lambda;
    auto h2 = projective_height(v);
    CHECK(h1.enclosure().overlaps(h2.enclosure()));
    // Scaling by a nonzero field element does not change a projective height.
    const auto mu = gen.nonzero_element(5, 4, 3);
    for (auto& x : v) x *= mu;
    CHECK(h1.enclosure().overlaps(projective_height(v).enclosure()));
  }
}

TEST_CASE("weil height properties on cyclotomic points") {
  Gen gen(33);
  for (unsigned n : {3U, 4U, 5U, 12U}) {
    for (int t = 0; t < 10; ++t) {
      AffinePoint p({gen.element(n, 8, 4), gen.element(n, 8, 4)});
      auto h = weil_height(p);
      CHECK(h.upper() >= 0);
      for (unsigned k : CyclotomicField::get(n)->units()) {
        CHECK(weil_height(p.galois_conjugate(k)).enclosure().overlaps(h.enclosure()));
      }
      // Roots of unity and zero have height zero; anything else is positive.
      AffinePoint u({CyclotomicElement::zeta(n, t), CyclotomicElement(BigRational(0), n)});
      CHECK(weil_height(u).enclosure().contains_zero());
      if (!p.coords[0].is_zero() && !p.coords[0].is_root_of_unity()) {
        CHECK(weil_height(AffinePoint({p.coords[0]})).lower() > 0);
      }
    }
  }
}

TEST_CASE("house") {
  CHECK(house(pt("z8", 1, 8)).enclosure().contains(BigRational(1)));
  CHECK(house(pt("z3, 2", 2, 3)).enclosure().contains(BigRational(2)));
  auto g = house(pt("z5 + z5^4", 1, 5));
  CHECK(std::abs(g.value() - 1.6180339887498949) < 1e-15);

  Gen gen(34);
  for (unsigned n : {4U, 5U, 12U}) {
    for (int t = 0; t < 10; ++t) {
      AffinePoint p({gen.element(n, 8, 4), gen.element(n, 8, 4)});
      AffinePoint q({p.coords[0] * CyclotomicElement::zeta(n, t), p.coords[1] * CyclotomicElement::zeta(n, 2 * t + 1)});
      CHECK(house(p).enclosure().overlaps(house(q).enclosure()));
    }
  }
}

TEST_CASE("polynomial sup norms and scalers") {
  auto f = parse_morphism({"X1^2 + 3*X2", "X2^2"}, 1);
  CHECK(poly_sup_norm(f.components(), 1).contains(BigRational(3)));
  auto u = parse_morphism({"z3*X1^2 - X2", "z3^2*X2^2"}, 3);
  CHECK(poly_sup_norm(u.components(), 1).overlaps(Interval(BigRational(1), 256)));
  auto h = parse_morphism({"z3*X1^2/2", "X2^2"}, 3);
  CHECK(poly_sup_norm(h.components(), 1).overlaps(Interval(BigRational(1), 256)));

  CHECK(integrality_scaler(parse_morphism({"X1/2 + 3"}, 1).components()) == 2);
  CHECK(integrality_scaler(parse_morphism({"X1^2 - 7"}, 1).components()) == 1);
  CHECK(integrality_scaler(parse_morphism({"(z4/3)*X1 + 1/6"}, 4).components()) == 6);
}

TEST_CASE("rational absolute values") {
  CHECK(rational_abs(BigRational(3, 2), RationalPlace::prime(2)) == 2);
  CHECK(rational_abs(BigRational(5), RationalPlace::prime(5)) == BigRational(1, 5));
  CHECK(rational_abs(BigRational(-7, 4), RationalPlace::archimedean()) == BigRational(7, 4));
  CHECK(rational_abs(BigRational(0), RationalPlace::prime(3)) == 0);
  CHECK_THROWS_AS(RationalPlace::prime(4), domain_error);

  // Product formula, exact: the product of |x|_v over all places is 1.
  Gen gen(35);
  for (int t = 0; t < 100; ++t) {
    BigRational x = gen.nonzero_rational(100000, 100000);
    BigRational prod = rational_abs(x, RationalPlace::archimedean());
    std::vector<long> primes = prime_factors(x.get_num().get_si());
    for (long p : prime_factors(x.get_den().get_si())) primes.push_back(p);
    for (long p : primes) prod *= rational_abs(x, RationalPlace::prime(p));
    CHECK(prod == 1);
  }
}

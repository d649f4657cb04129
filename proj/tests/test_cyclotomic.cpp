#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "arithdyn/cyclotomic.hpp"
#include "arithdyn/errors.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

CyclotomicElement z(unsigned n, long k = 1) { return CyclotomicElement::zeta(n, k); }

// Index of the lattice spanned by rows, as the gcd of all maximal minors.
BigInt minor_gcd_index(const std::vector<std::vector<BigInt>>& rows) {
  const std::size_t dim = rows[0].size();
  std::vector<std::size_t> pick(dim);
  BigInt g = 0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == dim) {
      std::vector<std::vector<BigRational>> m(dim, std::vector<BigRational>(dim));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m[i][j] = rows[pick[i]][j];
      BigRational det = 1;
      for (std::size_t c = 0; c < dim; ++c) {
        std::size_t p = c;
        while (p < dim && m[p][c] == 0) ++p;
        if (p == dim) return;
        if (p != c) {
          std::swap(m[p], m[c]);
          det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < dim; ++r) {
          BigRational f = m[r][c] / m[c][c];
          for (std::size_t j = c; j < dim; ++j) m[r][j] -= f * m[c][j];
        }
      }
      BigInt d = abs(det.get_num());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return g;
}

std::vector<std::vector<BigInt>> lattice_rows(const std::vector<CyclotomicElement>& gens) {
  std::vector<std::vector<BigInt>> rows;
  for (const auto& g : gens) {
    CyclotomicElement x = g;
    for (unsigned j = 0; j < g.degree(); ++j) {
      std::vector<BigInt> row;
      for (const auto& c : x.coeffs()) row.push_back(c.get_num());
      rows.push_back(row);
      x *= z(g.order());
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<BigInt>{-1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<BigInt>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<BigInt>{1, 0, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<BigInt>{1, 0, -1, 0, 1});
  // Phi_105 is the first with a coefficient outside {-1, 0, 1}.
  const auto& p105 = cyclotomic_polynomial(105);
  CHECK(p105.size() == 49);
  CHECK(*std::min_element(p105.begin(), p105.end()) == -2);
  for (unsigned n = 1; n <= 60; ++n) CHECK(cyclotomic_polynomial(n).size() == euler_phi(n) + 1);
}

TEST_CASE("basic arithmetic") {
  CHECK(z(4) * z(4) == CyclotomicElement(-1));
  CHECK(z(3) + z(3, 2) == CyclotomicElement(-1));
  CHECK(CyclotomicElement(1) / CyclotomicElement(2) == CyclotomicElement(BigRational(1, 2)));
  CHECK(z(5).pow(5).is_one());
  CHECK(z(7, -1) * z(7) == CyclotomicElement(1));
  CHECK_THROWS_AS(z(5) / CyclotomicElement(0), division_by_zero);
  CHECK_THROWS_AS(CyclotomicElement(0).inverse(), division_by_zero);
}

TEST_CASE("promotion between fields") {
  CHECK(z(4).promote(12) == z(12, 3));
  CHECK(z(6).promote(3) == -z(3, 2));
  CHECK(z(3).promote(6) == z(6, 2));
  CHECK(CyclotomicElement::common_order(3, 4) == 12);
  CHECK(CyclotomicElement::common_order(3, 6) == 3);
  CHECK(CyclotomicElement::common_order(1, 5) == 5);
  CHECK((z(3) * z(4)).order() == 12);
  CHECK(z(3) * z(4) == z(12, 7));
  CHECK_THROWS_AS(z(5).promote(4), domain_error);
}

TEST_CASE("ring axioms on random triples") {
  Gen gen(11);
  for (unsigned n : {1U, 3U, 4U, 5U, 8U, 12U, 15U}) {
    for (int t = 0; t < 20; ++t) {
      auto a = gen.element(n, 9, 4), b = gen.element(n, 9, 4), c = gen.element(n, 9, 4);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a - b) + b == a);
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  }
}

TEST_CASE("galois conjugation") {
  CHECK(z(5).galois_conjugate(2) == z(5, 2));
  CHECK(CyclotomicElement(BigRational(3, 2), 7).galois_conjugate(3) == CyclotomicElement(BigRational(3, 2)));
  CHECK((z(5) + z(5, 4)).galois_conjugate(2) == z(5, 2) + z(5, 3));
  CHECK_THROWS_AS(z(6).galois_conjugate(2), domain_error);

  Gen gen(12);
  for (unsigned n : {5U, 8U, 9U, 12U}) {
    const auto units = CyclotomicField::get(n)->units();
    for (int t = 0; t < 10; ++t) {
      auto x = gen.element(n, 7, 3), y = gen.element(n, 7, 3);
      for (unsigned k : units) {
        for (unsigned k2 : units) {
          CHECK(x.galois_conjugate(k).galois_conjugate(k2) == x.galois_conjugate((k * k2) % n));
        }
        CHECK((x * y).galois_conjugate(k) == x.galois_conjugate(k) * y.galois_conjugate(k));
      }
    }
  }
}

TEST_CASE("embeddings") {
  auto e8 = z(8).embed(1);
  const Interval half_root = Interval(BigRational(1, 2), 512).sqrt();
  CHECK(e8.real().overlaps(half_root));
  CHECK(e8.imag().overlaps(half_root));
  CHECK(e8.radius() < 1e-60);
  CHECK(std::abs(e8.mid_real().to_double() - 0.70710678118654752) < 1e-15);

  auto one = CyclotomicElement(1).embed(1);
  CHECK(one.real().is_exact());
  CHECK(one.real().contains(BigRational(1)));
  CHECK(one.imag().contains_zero());

  auto golden = (z(5) + z(5, 4)).embed(1);
  const Interval golden_oracle = (Interval(BigRational(5), 512).sqrt() - Interval(BigRational(1), 512)).divided_by(BigInt(2));
  CHECK(golden.real().overlaps(golden_oracle));
  CHECK(std::abs(golden.mid_real().to_double() - 0.61803398874989485) < 1e-15);
  CHECK(golden.imag().contains_zero());

  // Radius shrinks with precision.
  auto x = z(7) + CyclotomicElement(BigRational(1, 3)) * z(7, 3);
  CHECK(x.embed(1, 512).radius() < x.embed(1, 128).radius());

  CHECK_THROWS_AS(z(6).embed(3), domain_error);

  Gen gen(13);
  for (unsigned n : {5U, 7U, 12U, 16U}) {
    for (int t = 0; t < 10; ++t) {
      auto a = gen.element(n, 20, 5), b = gen.element(n, 20, 5);
      for (unsigned k : CyclotomicField::get(n)->units()) {
        auto lhs = (a * b).embed(k);
        auto rhs = a.embed(k) * b.embed(k);
        CHECK(lhs.overlaps(rhs));
        auto c = testsupport::complex_embedding(a, k);
        CHECK(std::abs(a.embed(k).mid_real().to_double() - static_cast<double>(c.real())) < 1e-9);
        CHECK(std::abs(a.embed(k).mid_imag().to_double() - static_cast<double>(c.imag())) < 1e-9);
      }
    }
  }
}

TEST_CASE("integrality") {
  CHECK(z(12).is_algebraic_integer());
  CHECK_FALSE(CyclotomicElement(BigRational(1, 2)).is_algebraic_integer());
  CHECK((z(5) + z(5, 4)).is_algebraic_integer());
  CHECK(CyclotomicElement(4, {BigRational(1, 3), BigRational(1, 6)}).denominator_lcm() == 6);
}

TEST_CASE("field norm") {
  CHECK(CyclotomicElement(BigRational(2), 4).field_norm() == 4);
  CHECK((CyclotomicElement(1) + z(4)).field_norm() == 2);
  CHECK(CyclotomicElement(BigRational(1), 9).field_norm() == 1);
  CHECK((CyclotomicElement(1) - z(5)).field_norm() == 5);
  CHECK((CyclotomicElement(1) - z(9)).field_norm() == 3);

  // Oracle: product of floating-point embeddings.
  Gen gen(14);
  for (unsigned n : {3U, 5U, 7U, 8U, 12U}) {
    for (int t = 0; t < 10; ++t) {
      auto x = gen.nonzero_element(n, 5, 3);
      std::complex<long double> prod = 1;
      Interval lo_re(BigRational(1), 256);
      ComplexInterval iprod(Interval(BigRational(1), 256), Interval(256));
      for (unsigned k : CyclotomicField::get(n)->units()) {
        prod *= testsupport::complex_embedding(x, k);
        iprod *= x.embed(k);
      }
      const double norm = x.field_norm().get_d();
      CHECK(std::abs(static_cast<double>(prod.real()) - norm) <= 1e-9 * std::max(1.0, std::abs(norm)));
      CHECK(iprod.real().contains(x.field_norm()));
      CHECK(iprod.imag().contains_zero());
    }
  }
}

TEST_CASE("ideal norm") {
  CHECK(ideal_norm({CyclotomicElement(1)}) == 1);
  CHECK(ideal_norm({CyclotomicElement(BigRational(2), 4), CyclotomicElement(1) + z(4)}) == 2);
  CHECK(ideal_norm({CyclotomicElement(BigRational(3), 4)}) == 9);
  CHECK(ideal_norm({CyclotomicElement(6), CyclotomicElement(10)}) == 2);
  CHECK(ideal_norm({CyclotomicElement(0), CyclotomicElement(BigRational(5), 4)}) == 25);
  // (5) splits in Z[i]: (2+i) has norm 5.
  CHECK(ideal_norm({CyclotomicElement(BigRational(5), 4), CyclotomicElement(2) + z(4)}) == 5);
  CHECK_THROWS_AS(ideal_norm({CyclotomicElement(0)}), domain_error);
  CHECK_THROWS_AS(ideal_norm({CyclotomicElement(BigRational(1, 2))}), domain_error);

  Gen gen(15);
  for (int t = 0; t < 100; ++t) {
    const unsigned orders[] = {1, 3, 4, 5, 8, 12};
    const unsigned n = orders[t % 6];
    auto x = gen.integral_element(n, 6);
    if (x.is_zero()) continue;
    CHECK(ideal_norm({x}) == abs(x.field_norm().get_num()));
  }
  // Oracle: gcd of maximal minors of the generating rows.
  for (int t = 0; t < 30; ++t) {
    const unsigned orders[] = {3, 4, 5};
    const unsigned n = orders[t % 3];
    std::vector<CyclotomicElement> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(gen.integral_element(n, 5));
    if (gens[0].is_zero() && gens[1].is_zero()) continue;
    BigInt oracle = minor_gcd_index(lattice_rows(gens));
    CHECK(ideal_norm(gens) == oracle);
  }
}

TEST_CASE("roots of unity") {
  CHECK(z(5).is_root_of_unity());
  CHECK((-z(5)).is_root_of_unity());
  CHECK(CyclotomicElement(-1).is_root_of_unity());
  CHECK_FALSE(CyclotomicElement(2).is_root_of_unity());
  CHECK_FALSE((z(5) + z(5, 4)).is_root_of_unity());  // a unit, not torsion
  CHECK_FALSE(CyclotomicElement(0).is_root_of_unity());
  CHECK(z(3).promote(6).is_root_of_unity());
}

TEST_CASE("printing") {
  CHECK(CyclotomicElement(BigRational(-1, 2)).to_string() == "-1/2");
  CHECK((CyclotomicElement(1) - 2 * z(5) + CyclotomicElement(BigRational(1, 3)) * z(5, 3)).to_string() ==
        "1 - 2*z5 + (1/3)*z5^3");
  CHECK(CyclotomicElement(0).to_string() == "0");
}

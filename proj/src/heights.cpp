#include "arithdyn/heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arithdyn/errors.hpp"

namespace arithdyn {

double HeightEstimate::error() const { return enclosure_.radius(); }

Interval embedding_max_abs(const std::vector<CyclotomicElement>& coords, long k, mpfr_prec_t precision) {
  Interval best(precision);
  for (const auto& x : coords) {
    if (x.is_zero()) continue;
    best = Interval::max(best, x.embed(k, precision).abs());
  }
  return best;
}

namespace {

BigInt common_denominator(const std::vector<CyclotomicElement>& coords) {
  BigInt t = 1;
  for (const auto& x : coords) {
    const BigInt d = x.denominator_lcm();
    mpz_lcm(t.get_mpz_t(), t.get_mpz_t(), d.get_mpz_t());
  }
  return t;
}

HeightEstimate rational_projective_height(const std::vector<CyclotomicElement>& coords, mpfr_prec_t precision) {
  const BigInt t = common_denominator(coords);
  BigInt g = 0;
  BigInt m = 0;
  for (const auto& x : coords) {
    const BigRational& q = x.rational_value();
    BigInt b = abs(q.get_num()) * (t / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_mpz_t());
    if (b > m) m = b;
  }
  const Interval lm = Interval(m, precision).log();
  if (g == 1) return HeightEstimate(lm);
  return HeightEstimate(lm - Interval(g, precision).log());
}

}  // namespace

HeightEstimate projective_height(const std::vector<CyclotomicElement>& coords, mpfr_prec_t precision) {
  if (std::all_of(coords.begin(), coords.end(), [](const CyclotomicElement& x) { return x.is_zero(); })) {
    throw domain_error("projective point with all coordinates zero");
  }
  unsigned order = 1;
  bool rational = true;
  for (const auto& x : coords) {
    order = CyclotomicElement::common_order(order, x.order());
    rational = rational && x.is_rational();
  }
  if (rational) return rational_projective_height(coords, precision);

  const BigInt t = common_denominator(coords);
  std::vector<CyclotomicElement> scaled;
  for (const auto& x : coords) scaled.push_back((x * CyclotomicElement(BigRational(t), order)).promote(order));
  const auto field = CyclotomicField::get(order);

  for (mpfr_prec_t p = precision;; p *= 2) {
    Interval arch(p);
    bool ok = true;
    for (unsigned k : field->units()) {
      Interval m = embedding_max_abs(scaled, k, p);
      if (!m.certainly_positive()) {
        ok = false;
        break;
      }
      arch += m.log();
    }
    if (!ok) {
      if (p > 64 * precision) throw cap_exceeded("precision cap reached while separating an embedding from zero");
      continue;
    }
    const BigInt norm = ideal_norm(scaled);
    Interval total = arch - Interval(norm, p).log();
    return HeightEstimate(total.divided_by(BigInt(field->degree())));
  }
}

HeightEstimate weil_height(const AffinePoint& p, mpfr_prec_t precision) {
  std::vector<CyclotomicElement> v = p.coords;
  v.push_back(CyclotomicElement(BigRational(1), p.order()));
  return projective_height(v, precision);
}

HeightEstimate house(const AffinePoint& p, mpfr_prec_t precision) {
  const auto field = CyclotomicField::get(p.order());
  Interval best(precision);
  for (unsigned k : field->units()) best = Interval::max(best, embedding_max_abs(p.coords, k, precision));
  return HeightEstimate(best);
}

std::vector<CyclotomicElement> coefficient_vector(const std::vector<MultiPoly>& polys) {
  std::vector<CyclotomicElement> out;
  for (const auto& p : polys) {
    for (const auto& t : p.terms()) out.push_back(t.second);
  }
  return out;
}

Interval poly_sup_norm(const std::vector<MultiPoly>& polys, long k, mpfr_prec_t precision) {
  return embedding_max_abs(coefficient_vector(polys), k, precision);
}

BigInt integrality_scaler(const std::vector<MultiPoly>& polys) {
  BigInt l = 1;
  for (const auto& p : polys) {
    const BigInt d = p.denominator_lcm();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

RationalPlace RationalPlace::prime(const BigInt& p) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0) {
    throw domain_error("place " + p.get_str() + " is not a prime");
  }
  RationalPlace v;
  v.archimedean_ = false;
  v.p_ = p;
  return v;
}

long valuation(const BigRational& x, const BigInt& p) {
  if (sgn(x) == 0) throw domain_error("valuation of zero");
  long v = 0;
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  v += static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
  v -= static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));
  return v;
}

BigRational rational_abs(const BigRational& x, const RationalPlace& v) {
  if (sgn(x) == 0) return 0;
  if (v.is_archimedean()) return abs(x);
  const long e = valuation(x, v.p());
  BigInt power;
  mpz_pow_ui(power.get_mpz_t(), v.p().get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  BigRational out = e >= 0 ? BigRational(BigInt(1), power) : BigRational(power, BigInt(1));
  out.canonicalize();
  return out;
}

BigRational rational_abs_max(const std::vector<BigRational>& xs, const RationalPlace& v) {
  BigRational best = 0;
  for (const auto& x : xs) best = std::max(best, rational_abs(x, v));
  return best;
}

BigRational rational_poly_norm(const std::vector<MultiPoly>& polys, const RationalPlace& v) {
  std::vector<BigRational> xs;
  for (const auto& c : coefficient_vector(polys)) xs.push_back(c.rational_value());
  return rational_abs_max(xs, v);
}

}  // namespace arithdyn

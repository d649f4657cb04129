#include "arithdyn/checks.hpp"

#include <algorithm>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

std::vector<BigInt> prime_divisors(BigInt n) {
  if (n > BigInt("1000000000000")) throw cap_exceeded("denominator too large to factor by trial division");
  std::vector<BigInt> out;
  for (BigInt p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

long order_at(BigInt n, const BigInt& p) {
  long v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

Interval place_by_place_height(const std::vector<BigRational>& xs, mpfr_prec_t precision) {
  BigRational arch = 1;
  std::vector<BigInt> primes;
  for (const auto& x : xs) {
    arch = std::max(arch, BigRational(abs(x)));
    for (const auto& p : prime_divisors(x.get_den())) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  Interval total = Interval(arch, precision).log();
  for (const auto& p : primes) {
    long worst = 0;
    for (const auto& x : xs) {
      if (x == 0) continue;
      worst = std::max(worst, order_at(x.get_den(), p) - order_at(abs(x.get_num()), p));
    }
    if (worst > 0) total += Interval(p, precision).log().times(BigRational(worst));
  }
  return total;
}

std::vector<CyclotomicElement> lifted_vector(const AffinePoint& p) {
  auto v = p.coords;
  v.push_back(CyclotomicElement(BigRational(1), p.order()));
  return v;
}

SizeCheck archimedean_size_check(const ProjectiveLift& lift, const EffectiveConstants& k, const AffinePoint& p) {
  SizeCheck out;
  // Points are taken in the lift's field so embeddings correspond one to one.
  const auto x = lifted_vector(p.promote(lift.order()));
  const auto fx = lift.evaluate(x);
  for (std::size_t idx = 0; idx < k.units.size(); ++idx) {
    const unsigned u = k.units[idx];
    const Interval px = embedding_max_abs(x, u);
    Interval pd(BigRational(1), default_precision);
    for (unsigned i = 0; i < lift.degree; ++i) pd *= px;
    const Interval fpx = embedding_max_abs(fx, u);
    const Interval lower = Interval(k.C, default_precision).divided_by(k.g_norm[idx]) * pd;
    const Interval upper = Interval(k.D, default_precision) * k.f_norm[idx] * pd;
    if (fpx.certainly_less(lower)) out.lower_ok = false;
    if (upper.certainly_less(fpx)) out.upper_ok = false;
  }
  return out;
}

SizeCheck finite_size_check(const ProjectiveLift& lift, const Certificate& cert, const AffinePoint& p,
                            const RationalPlace& v) {
  SizeCheck out;
  std::vector<BigRational> x, fx;
  const auto lv = lifted_vector(p);
  for (const auto& c : lv) x.push_back(c.rational_value());
  for (const auto& c : lift.evaluate(lv)) fx.push_back(c.rational_value());
  const BigRational px = rational_abs_max(x, v);
  BigRational pd = 1;
  for (unsigned i = 0; i < lift.degree; ++i) pd *= px;
  const BigRational fpx = rational_abs_max(fx, v);
  const BigRational gnorm = rational_poly_norm(cert.flattened(), v);
  const BigRational fnorm = rational_poly_norm(lift.components, v);
  if (pd / gnorm > fpx) out.lower_ok = false;
  if (fpx > fnorm * pd) out.upper_ok = false;
  return out;
}

}  // namespace arithdyn

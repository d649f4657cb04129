#pragma once

// Hand-rolled generators and small oracles shared by the test binaries.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "arithdyn/cyclotomic.hpp"

namespace testsupport {

using arithdyn::BigInt;
using arithdyn::BigRational;
using arithdyn::CyclotomicElement;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  BigRational rational(long num_bound, long den_bound) {
    BigRational q(integer(-num_bound, num_bound), integer(1, den_bound));
    q.canonicalize();
    return q;
  }

  BigRational nonzero_rational(long num_bound, long den_bound) {
    BigRational q;
    do {
      q = rational(num_bound, den_bound);
    } while (q == 0);
    return q;
  }

  CyclotomicElement element(unsigned n, long num_bound, long den_bound) {
    const unsigned phi = arithdyn::euler_phi(n);
    std::vector<BigRational> c;
    for (unsigned i = 0; i < phi; ++i) c.push_back(rational(num_bound, den_bound));
    return CyclotomicElement(n, std::move(c));
  }

  CyclotomicElement integral_element(unsigned n, long bound) { return element(n, bound, 1); }

  CyclotomicElement nonzero_element(unsigned n, long num_bound, long den_bound) {
    CyclotomicElement x;
    do {
      x = element(n, num_bound, den_bound);
    } while (x.is_zero());
    return x;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::complex<long double> complex_embedding(const CyclotomicElement& x, long k) {
  const long double pi = 3.141592653589793238462643383279502884L;
  std::complex<long double> acc = 0;
  const unsigned n = x.order();
  for (std::size_t j = 0; j < x.coeffs().size(); ++j) {
    const long double angle = 2 * pi * static_cast<long double>((static_cast<long>(j) * k) % static_cast<long>(n)) / n;
    acc += static_cast<long double>(x.coeffs()[j].get_d()) * std::polar(1.0L, angle);
  }
  return acc;
}

inline double mid(const arithdyn::Interval& i) { return i.midpoint().to_double(); }

}  // namespace testsupport

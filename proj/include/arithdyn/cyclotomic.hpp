#pragma once

// Exact arithmetic in Q(zeta_n) using the power basis 1, z, ..., z^{phi(n)-1}
// reduced modulo the n-th cyclotomic polynomial.

#include <cstddef>
#include <memory>
#include <mutex>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "arithdyn/interval.hpp"

namespace arithdyn {

using BigInt = mpz_class;
using BigRational = mpq_class;

std::size_t hash_value(const BigInt& x) noexcept;
std::size_t hash_value(const BigRational& x) noexcept;
inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

unsigned euler_phi(unsigned n);

class CyclotomicField {
 public:
  static constexpr unsigned max_order = 4096;

  /// Shared, cached instance. Throws domain_error for n = 0 or n > max_order.
  static std::shared_ptr<const CyclotomicField> get(unsigned n);

  unsigned order() const noexcept { return n_; }
  unsigned degree() const noexcept { return phi_; }
  /// Coefficients of Phi_n, lowest degree first (monic, length phi+1).
  const std::vector<BigInt>& modulus() const noexcept { return modulus_; }
  /// Reduced power-basis coordinates of z^m, 0 <= m < n.
  const std::vector<BigInt>& power(unsigned m) const { return powers_.at(m % n_); }
  /// k in [1, n] with gcd(k, n) = 1, in increasing order; one per embedding.
  const std::vector<unsigned>& units() const noexcept { return units_; }
  /// Order of the group of roots of unity in the field.
  unsigned roots_of_unity_order() const noexcept { return n_ % 2 == 0 ? n_ : 2 * n_; }
  bool contains_root_of_unity(unsigned k) const noexcept {
    return k != 0 && roots_of_unity_order() % k == 0;
  }

  /// Enclosures of e^{2 pi i m / n} for m in [0, n).
  std::shared_ptr<const std::vector<ComplexInterval>> roots(mpfr_prec_t precision) const;

  explicit CyclotomicField(unsigned n);

 private:
  unsigned n_;
  unsigned phi_;
  std::vector<BigInt> modulus_;
  std::vector<std::vector<BigInt>> powers_;
  std::vector<unsigned> units_;
  mutable std::mutex roots_mutex_;
  mutable std::map<mpfr_prec_t, std::shared_ptr<const std::vector<ComplexInterval>>> roots_;
};

/// Coefficients of Phi_n, lowest degree first.
const std::vector<BigInt>& cyclotomic_polynomial(unsigned n);

class CyclotomicElement {
 public:
  CyclotomicElement();  // 0 in Q
  CyclotomicElement(long value);  // NOLINT(google-explicit-constructor)
  CyclotomicElement(const BigInt& value);  // NOLINT(google-explicit-constructor)
  CyclotomicElement(const BigRational& value, unsigned order = 1);  // NOLINT
  /// Arbitrary-length polynomial in z_n, reduced on construction.
  CyclotomicElement(unsigned order, std::vector<BigRational> poly);

  /// z_n^k for any integer k.
  static CyclotomicElement zeta(unsigned n, long k = 1);

  unsigned order() const noexcept { return order_; }
  unsigned degree() const noexcept { return static_cast<unsigned>(coeffs_.size()); }
  const std::vector<BigRational>& coeffs() const noexcept { return coeffs_; }
  std::shared_ptr<const CyclotomicField> field() const { return CyclotomicField::get(order_); }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  bool is_rational() const noexcept;
  /// Requires is_rational().
  const BigRational& rational_value() const;

  /// Smallest order whose field contains both fields.
  static unsigned common_order(unsigned a, unsigned b);
  /// Same element expressed in Q(zeta_target). Requires containment.
  CyclotomicElement promote(unsigned target) const;

  CyclotomicElement operator-() const;
  CyclotomicElement& operator+=(const CyclotomicElement& other);
  CyclotomicElement& operator-=(const CyclotomicElement& other);
  CyclotomicElement& operator*=(const CyclotomicElement& other);
  CyclotomicElement& operator/=(const CyclotomicElement& other);
  friend CyclotomicElement operator+(CyclotomicElement a, const CyclotomicElement& b) { return a += b; }
  friend CyclotomicElement operator-(CyclotomicElement a, const CyclotomicElement& b) { return a -= b; }
  friend CyclotomicElement operator*(CyclotomicElement a, const CyclotomicElement& b) { return a *= b; }
  friend CyclotomicElement operator/(CyclotomicElement a, const CyclotomicElement& b) { return a /= b; }

  CyclotomicElement inverse() const;
  CyclotomicElement pow(unsigned long e) const;

  /// Image under z -> z^k. Throws domain_error unless gcd(k, n) = 1.
  CyclotomicElement galois_conjugate(long k) const;
  /// Enclosure of the image under z -> e^{2 pi i k / n}.
  ComplexInterval embed(long k, mpfr_prec_t precision = default_precision) const;
  /// One enclosure per unit of the field, in units() order.
  std::vector<ComplexInterval> embeddings(mpfr_prec_t precision = default_precision) const;

  bool is_algebraic_integer() const;
  /// lcm of the power-basis coefficient denominators.
  BigInt denominator_lcm() const;
  BigRational field_norm() const;
  bool is_root_of_unity() const;

  /// Equality after promotion to a common order.
  friend bool operator==(const CyclotomicElement& a, const CyclotomicElement& b);
  friend bool operator!=(const CyclotomicElement& a, const CyclotomicElement& b) { return !(a == b); }
  /// Canonical total order among elements of the same order.
  static int compare(const CyclotomicElement& a, const CyclotomicElement& b);

  /// Hash of (order, coeffs). Only consistent with == among equal orders.
  std::size_t hash() const noexcept;

  /// Expression in the polynomial grammar, e.g. "1/2 + 3*z5 - z5^2".
  std::string to_string() const;

 private:
  void reduce(std::vector<BigRational> poly);

  unsigned order_ = 1;
  std::vector<BigRational> coeffs_;
};

/// Absolute norm of the ideal generated by integral elements (all promoted to
/// a common order). Throws domain_error if all are zero or one is not integral.
BigInt ideal_norm(const std::vector<CyclotomicElement>& generators);

}  // namespace arithdyn

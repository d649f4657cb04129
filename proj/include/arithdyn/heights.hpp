#pragma once

#include <string>
#include <vector>

#include "arithdyn/cyclotomic.hpp"
#include "arithdyn/interval.hpp"
#include "arithdyn/point.hpp"
#include "arithdyn/polymaps.hpp"

namespace arithdyn {

/// A real quantity known to lie in a certified interval.
class HeightEstimate {
 public:
  explicit HeightEstimate(Interval enclosure) : enclosure_(std::move(enclosure)) {}

  const Interval& enclosure() const noexcept { return enclosure_; }
  /// Midpoint as a double.
  double value() const { return enclosure_.midpoint().to_double(); }
  /// Radius about value(), rounded up.
  double error() const;
  double lower() const { return enclosure_.lower(); }
  double upper() const { return enclosure_.upper(); }
  /// Midpoint to the given number of significant digits.
  std::string mid_string(int digits = 30) const { return enclosure_.midpoint().to_string(digits); }
  /// Enclosure widened by a non-negative amount on both sides.
  HeightEstimate widened(double amount) const { return HeightEstimate(enclosure_.widened(amount)); }

 private:
  Interval enclosure_;
};

/// Weil height of the projective point (a_0 : ... : a_m); not all zero.
HeightEstimate projective_height(const std::vector<CyclotomicElement>& coords,
                                 mpfr_prec_t precision = default_precision);
/// Height of (1 : x_1 : ... : x_N).
HeightEstimate weil_height(const AffinePoint& p, mpfr_prec_t precision = default_precision);
/// max over embeddings and coordinates of |sigma(x_i)| (not logarithmic).
HeightEstimate house(const AffinePoint& p, mpfr_prec_t precision = default_precision);
/// Enclosure of max |sigma(x_i)| for one embedding.
Interval embedding_max_abs(const std::vector<CyclotomicElement>& coords, long k,
                           mpfr_prec_t precision = default_precision);

/// Max modulus of the sigma_k image of every coefficient of every polynomial.
Interval poly_sup_norm(const std::vector<MultiPoly>& polys, long k, mpfr_prec_t precision = default_precision);
/// Least positive D making every coefficient integral.
BigInt integrality_scaler(const std::vector<MultiPoly>& polys);
/// All coefficients of all polynomials, in term order.
std::vector<CyclotomicElement> coefficient_vector(const std::vector<MultiPoly>& polys);

class RationalPlace {
 public:
  static RationalPlace archimedean() { return RationalPlace(); }
  /// Throws domain_error unless p is prime.
  static RationalPlace prime(const BigInt& p);

  bool is_archimedean() const noexcept { return archimedean_; }
  const BigInt& p() const noexcept { return p_; }
  std::string to_string() const { return archimedean_ ? "inf" : p_.get_str(); }

 private:
  RationalPlace() = default;
  bool archimedean_ = true;
  BigInt p_ = 0;
};

/// p-adic valuation of a nonzero rational.
long valuation(const BigRational& x, const BigInt& p);
/// |x|_v exactly: p^{-v_p(x)} or the usual modulus; 0 for x = 0.
BigRational rational_abs(const BigRational& x, const RationalPlace& v);
/// max(|x_1|_v, ..., |x_m|_v).
BigRational rational_abs_max(const std::vector<BigRational>& xs, const RationalPlace& v);
/// Max |c|_v over the coefficients of rational polynomials.
BigRational rational_poly_norm(const std::vector<MultiPoly>& polys, const RationalPlace& v);

}  // namespace arithdyn

#pragma once

// Outward-rounded interval arithmetic on top of MPFR.
//
// Every operation rounds the lower endpoint down and the upper endpoint up,
// so the exact real (or complex) value is always enclosed.

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace arithdyn {

inline constexpr mpfr_prec_t default_precision = 256;

/// RAII owner of an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = default_precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rounding = MPFR_RNDN) const {
    return mpfr_get_d(value_, rounding);
  }
  /// Decimal rendering with the given number of significant digits.
  std::string to_string(int digits = 40) const;

 private:
  mpfr_t value_;
};

class Interval {
 public:
  explicit Interval(mpfr_prec_t precision = default_precision);  // [0, 0]
  Interval(const mpz_class& value, mpfr_prec_t precision);
  Interval(const mpq_class& value, mpfr_prec_t precision);
  Interval(double value, mpfr_prec_t precision);
  /// Requires lower <= upper.
  Interval(BigFloat lower, BigFloat upper);

  static Interval pi(mpfr_prec_t precision);
  static Interval log2(mpfr_prec_t precision);
  /// Smallest interval containing both endpoints of both inputs.
  static Interval hull(const Interval& a, const Interval& b);

  mpfr_prec_t precision() const noexcept { return lo_.precision(); }
  const BigFloat& lower_bound() const noexcept { return lo_; }
  const BigFloat& upper_bound() const noexcept { return hi_; }
  double lower() const { return lo_.to_double(MPFR_RNDD); }
  double upper() const { return hi_.to_double(MPFR_RNDU); }
  BigFloat midpoint() const;
  /// Upper bound for half the width.
  double radius() const;
  bool is_exact() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }

  bool contains(const mpq_class& value) const;
  bool contains(double value) const;
  bool contains(const BigFloat& value) const;
  bool contains_zero() const;
  bool overlaps(const Interval& other) const;
  /// Certified comparisons: true only when every point satisfies the relation.
  bool certainly_less(const Interval& other) const;
  bool certainly_less_equal(const Interval& other) const;
  bool certainly_positive() const;

  Interval operator-() const;
  Interval& operator+=(const Interval& other);
  Interval& operator-=(const Interval& other);
  Interval& operator*=(const Interval& other);
  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }

  Interval divided_by(const mpz_class& positive) const;
  Interval divided_by(const Interval& positive) const;
  Interval times(const mpq_class& value) const;
  /// Exact multiplication by 2^exponent.
  Interval scaled_by_power_of_two(std::int64_t exponent) const;
  Interval square() const;
  Interval abs() const;
  /// Lower endpoint clamped at zero.
  Interval nonnegative_part() const;
  Interval sqrt() const;
  /// Requires a strictly positive interval.
  Interval log() const;
  /// Widens both endpoints by the given non-negative amount.
  Interval widened(double amount) const;

  static Interval max(const Interval& a, const Interval& b);

  /// Largest binary exponent of |x| over the interval (mpfr convention), or
  /// a very negative value for [0, 0].
  mpfr_exp_t magnitude_exponent() const;

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// Rectangular complex interval; exposes midpoints and a disk radius.
class ComplexInterval {
 public:
  explicit ComplexInterval(mpfr_prec_t precision = default_precision)
      : re_(precision), im_(precision) {}
  ComplexInterval(Interval re, Interval im) : re_(std::move(re)), im_(std::move(im)) {}

  const Interval& real() const noexcept { return re_; }
  const Interval& imag() const noexcept { return im_; }
  mpfr_prec_t precision() const noexcept { return re_.precision(); }

  BigFloat mid_real() const { return re_.midpoint(); }
  BigFloat mid_imag() const { return im_.midpoint(); }
  /// Upper bound on the distance from the midpoint to any enclosed value.
  double radius() const;

  bool contains(double re, double im) const { return re_.contains(re) && im_.contains(im); }
  bool overlaps(const ComplexInterval& other) const {
    return re_.overlaps(other.re_) && im_.overlaps(other.im_);
  }
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }

  ComplexInterval operator-() const { return {-re_, -im_}; }
  ComplexInterval& operator+=(const ComplexInterval& other);
  ComplexInterval& operator-=(const ComplexInterval& other);
  ComplexInterval& operator*=(const ComplexInterval& other);
  friend ComplexInterval operator+(ComplexInterval a, const ComplexInterval& b) { return a += b; }
  friend ComplexInterval operator-(ComplexInterval a, const ComplexInterval& b) { return a -= b; }
  friend ComplexInterval operator*(ComplexInterval a, const ComplexInterval& b) { return a *= b; }

  ComplexInterval times(const Interval& real_factor) const {
    return {re_ * real_factor, im_ * real_factor};
  }
  ComplexInterval divided_by(const mpz_class& positive) const {
    return {re_.divided_by(positive), im_.divided_by(positive)};
  }
  ComplexInterval scaled_by_power_of_two(std::int64_t exponent) const {
    return {re_.scaled_by_power_of_two(exponent), im_.scaled_by_power_of_two(exponent)};
  }
  /// Enclosure of the modulus.
  Interval abs() const;
  mpfr_exp_t magnitude_exponent() const;

 private:
  Interval re_;
  Interval im_;
};

}  // namespace arithdyn

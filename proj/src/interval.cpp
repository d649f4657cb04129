#include "arithdyn/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "arithdyn/errors.hpp"

namespace arithdyn {

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

namespace {

BigFloat make(mpfr_prec_t p) { return BigFloat(p); }

mpfr_prec_t common(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Interval::Interval(mpfr_prec_t precision) : lo_(precision), hi_(precision) {}

Interval::Interval(const mpz_class& value, mpfr_prec_t precision)
    : lo_(precision), hi_(precision) {
  mpfr_set_z(lo_.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_.get(), value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& value, mpfr_prec_t precision)
    : lo_(precision), hi_(precision) {
  mpfr_set_q(lo_.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_.get(), value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(double value, mpfr_prec_t precision) : lo_(precision), hi_(precision) {
  mpfr_set_d(lo_.get(), value, MPFR_RNDD);
  mpfr_set_d(hi_.get(), value, MPFR_RNDU);
}

Interval::Interval(BigFloat lower, BigFloat upper) : lo_(std::move(lower)), hi_(std::move(upper)) {
  if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get()) || mpfr_greater_p(lo_.get(), hi_.get())) {
    throw domain_error("interval endpoints out of order");
  }
}

Interval Interval::pi(mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_const_pi(out.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(out.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::log2(mpfr_prec_t precision) {
  Interval out(precision);
  mpfr_const_log2(out.lo_.get(), MPFR_RNDD);
  mpfr_const_log2(out.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval out(common(a, b));
  mpfr_min(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_max(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

BigFloat Interval::midpoint() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

double Interval::radius() const {
  BigFloat m = midpoint();
  BigFloat a = make(precision() + 1);
  BigFloat b = make(precision() + 1);
  mpfr_sub(a.get(), m.get(), lo_.get(), MPFR_RNDU);
  mpfr_sub(b.get(), hi_.get(), m.get(), MPFR_RNDU);
  mpfr_max(a.get(), a.get(), b.get(), MPFR_RNDU);
  return a.to_double(MPFR_RNDU);
}

bool Interval::contains(const mpq_class& value) const {
  return mpfr_cmp_q(lo_.get(), value.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_.get(), value.get_mpq_t()) >= 0;
}

bool Interval::contains(double value) const {
  return mpfr_cmp_d(lo_.get(), value) <= 0 && mpfr_cmp_d(hi_.get(), value) >= 0;
}

bool Interval::contains(const BigFloat& value) const {
  return mpfr_lessequal_p(lo_.get(), value.get()) && mpfr_lessequal_p(value.get(), hi_.get());
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_.get(), other.hi_.get()) &&
         mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

bool Interval::certainly_less(const Interval& other) const {
  return mpfr_less_p(hi_.get(), other.lo_.get()) != 0;
}

bool Interval::certainly_less_equal(const Interval& other) const {
  return mpfr_lessequal_p(hi_.get(), other.lo_.get()) != 0;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }

Interval Interval::operator-() const {
  Interval out(precision());
  mpfr_neg(out.lo_.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(out.hi_.get(), lo_.get(), MPFR_RNDU);
  return out;
}

Interval& Interval::operator+=(const Interval& other) {
  Interval out(common(*this, other));
  mpfr_add(out.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_add(out.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  return *this = std::move(out);
}

Interval& Interval::operator-=(const Interval& other) {
  Interval out(common(*this, other));
  mpfr_sub(out.lo_.get(), lo_.get(), other.hi_.get(), MPFR_RNDD);
  mpfr_sub(out.hi_.get(), hi_.get(), other.lo_.get(), MPFR_RNDU);
  return *this = std::move(out);
}

Interval& Interval::operator*=(const Interval& other) {
  const mpfr_prec_t p = common(*this, other);
  Interval out(p);
  BigFloat t(p);
  const mpfr_srcptr xs[2] = {lo_.get(), hi_.get()};
  const mpfr_srcptr ys[2] = {other.lo_.get(), other.hi_.get()};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), out.lo_.get())) mpfr_set(out.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), out.hi_.get())) mpfr_set(out.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return *this = std::move(out);
}

Interval Interval::divided_by(const mpz_class& positive) const {
  if (sgn(positive) <= 0) throw domain_error("interval division requires a positive divisor");
  Interval out(precision());
  mpfr_div_z(out.lo_.get(), lo_.get(), positive.get_mpz_t(), MPFR_RNDD);
  mpfr_div_z(out.hi_.get(), hi_.get(), positive.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::divided_by(const Interval& positive) const {
  if (!positive.certainly_positive()) {
    throw domain_error("interval division requires a positive divisor");
  }
  const mpfr_prec_t p = common(*this, positive);
  Interval out(p);
  BigFloat t(p);
  const mpfr_srcptr xs[2] = {lo_.get(), hi_.get()};
  const mpfr_srcptr ys[2] = {positive.lo_.get(), positive.hi_.get()};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), out.lo_.get())) mpfr_set(out.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), out.hi_.get())) mpfr_set(out.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return out;
}

Interval Interval::times(const mpq_class& value) const {
  return *this * Interval(value, precision());
}

Interval Interval::scaled_by_power_of_two(std::int64_t exponent) const {
  Interval out(precision());
  mpfr_mul_2si(out.lo_.get(), lo_.get(), static_cast<long>(exponent), MPFR_RNDD);
  mpfr_mul_2si(out.hi_.get(), hi_.get(), static_cast<long>(exponent), MPFR_RNDU);
  return out;
}

Interval Interval::square() const {
  Interval a = abs();
  Interval out(precision());
  mpfr_sqr(out.lo_.get(), a.lo_.get(), MPFR_RNDD);
  mpfr_sqr(out.hi_.get(), a.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_.get()) >= 0) return *this;
  if (mpfr_sgn(hi_.get()) <= 0) return -*this;
  Interval out(precision());
  mpfr_set_zero(out.lo_.get(), 1);
  mpfr_neg(out.hi_.get(), lo_.get(), MPFR_RNDU);
  mpfr_max(out.hi_.get(), out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::nonnegative_part() const {
  Interval out = *this;
  if (mpfr_sgn(out.lo_.get()) < 0) mpfr_set_zero(out.lo_.get(), 1);
  if (mpfr_sgn(out.hi_.get()) < 0) mpfr_set_zero(out.hi_.get(), 1);
  return out;
}

Interval Interval::sqrt() const {
  Interval a = nonnegative_part();
  Interval out(precision());
  mpfr_sqrt(out.lo_.get(), a.lo_.get(), MPFR_RNDD);
  mpfr_sqrt(out.hi_.get(), a.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::log() const {
  if (!certainly_positive()) throw domain_error("logarithm of a non-positive interval");
  Interval out(precision());
  mpfr_log(out.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_log(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::widened(double amount) const {
  if (!(amount >= 0)) throw domain_error("negative widening");
  Interval out(precision());
  mpfr_sub_d(out.lo_.get(), lo_.get(), amount, MPFR_RNDD);
  mpfr_add_d(out.hi_.get(), hi_.get(), amount, MPFR_RNDU);
  return out;
}

Interval Interval::max(const Interval& a, const Interval& b) {
  Interval out(common(a, b));
  mpfr_max(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_max(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

mpfr_exp_t Interval::magnitude_exponent() const {
  mpfr_exp_t e = std::numeric_limits<mpfr_exp_t>::min() / 2;
  if (!mpfr_zero_p(lo_.get())) e = std::max(e, mpfr_get_exp(lo_.get()));
  if (!mpfr_zero_p(hi_.get())) e = std::max(e, mpfr_get_exp(hi_.get()));
  return e;
}

double ComplexInterval::radius() const {
  const double r = re_.radius();
  const double i = im_.radius();
  const double h = std::hypot(r, i);
  return std::nextafter(h, std::numeric_limits<double>::infinity());
}

ComplexInterval& ComplexInterval::operator+=(const ComplexInterval& other) {
  re_ += other.re_;
  im_ += other.im_;
  return *this;
}

ComplexInterval& ComplexInterval::operator-=(const ComplexInterval& other) {
  re_ -= other.re_;
  im_ -= other.im_;
  return *this;
}

ComplexInterval& ComplexInterval::operator*=(const ComplexInterval& other) {
  Interval re = re_ * other.re_ - im_ * other.im_;
  Interval im = re_ * other.im_ + im_ * other.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Interval ComplexInterval::abs() const { return (re_.square() + im_.square()).sqrt(); }

mpfr_exp_t ComplexInterval::magnitude_exponent() const {
  return std::max(re_.magnitude_exponent(), im_.magnitude_exponent());
}

}  // namespace arithdyn

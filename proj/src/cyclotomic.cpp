#include "arithdyn/cyclotomic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "arithdyn/errors.hpp"

namespace arithdyn {

std::size_t hash_value(const BigInt& x) noexcept {
  std::size_t seed = static_cast<std::size_t>(mpz_sgn(x.get_mpz_t()) + 1);
  const std::size_t limbs = mpz_size(x.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i) {
    hash_combine(seed, static_cast<std::size_t>(mpz_getlimbn(x.get_mpz_t(), static_cast<mp_size_t>(i))));
  }
  return seed;
}

std::size_t hash_value(const BigRational& x) noexcept {
  std::size_t seed = hash_value(x.get_num());
  hash_combine(seed, hash_value(x.get_den()));
  return seed;
}

unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace {

using QPoly = std::vector<BigRational>;

void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

// Returns (quotient, remainder) of a / b, b nonzero and trimmed.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  trim(a);
  QPoly q;
  if (deg(a) < deg(b)) return {q, a};
  q.assign(a.size() - b.size() + 1, BigRational(0));
  const BigRational& lead = b.back();
  for (int i = deg(a); i >= deg(b); --i) {
    if (sgn(a[i]) == 0) continue;
    BigRational factor = a[i] / lead;
    const int shift = i - deg(b);
    q[shift] = factor;
    for (int j = 0; j <= deg(b); ++j) a[shift + j] -= factor * b[j];
  }
  trim(a);
  return {q, a};
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

QPoly sub(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), BigRational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

BigRational resultant(QPoly f, QPoly g) {
  trim(f);
  trim(g);
  if (f.empty() || g.empty()) return 0;
  BigRational acc = 1;
  while (true) {
    const int m = deg(f);
    const int k = deg(g);
    if (k == 0) {
      BigRational p = 1;
      for (int i = 0; i < m; ++i) p *= g[0];
      return acc * p;
    }
    QPoly r = divmod(f, g).second;
    if (r.empty()) return 0;
    if ((m * k) % 2 == 1) acc = -acc;
    for (int i = 0; i < m - deg(r); ++i) acc *= g.back();
    f = std::move(g);
    g = std::move(r);
  }
}

std::vector<BigInt> int_divide_exact(std::vector<BigInt> a, const std::vector<BigInt>& b) {
  // b monic
  const std::size_t db = b.size() - 1;
  std::vector<BigInt> q(a.size() - db, BigInt(0));
  for (std::size_t i = a.size(); i-- > db;) {
    BigInt factor = a[i];
    q[i - db] = factor;
    if (factor == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= factor * b[j];
  }
  return q;
}

std::mutex& phi_mutex() {
  static std::mutex m;
  return m;
}

std::map<unsigned, std::vector<BigInt>>& phi_cache() {
  static std::map<unsigned, std::vector<BigInt>> c;
  return c;
}

std::vector<BigInt> compute_cyclotomic(unsigned n) {
  std::vector<BigInt> p(n + 1, BigInt(0));
  p[0] = -1;
  p[n] = 1;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d == 0) p = int_divide_exact(std::move(p), cyclotomic_polynomial(d));
  }
  return p;
}

void check_order(unsigned n) {
  if (n == 0 || n > CyclotomicField::max_order) {
    throw domain_error("cyclotomic order must lie in [1, " +
                       std::to_string(CyclotomicField::max_order) + "]");
  }
}

std::vector<ComplexInterval> compute_roots(unsigned n, mpfr_prec_t precision) {
  std::vector<ComplexInterval> out;
  out.reserve(n);
  const Interval pi = Interval::pi(precision);
  const Interval zero(precision);
  const Interval one(1.0, precision);
  for (unsigned m = 0; m < n; ++m) {
    const unsigned long long m4 = 4ULL * m;
    if (m == 0) {
      out.emplace_back(one, zero);
    } else if (2ULL * m == n) {
      out.emplace_back(-one, zero);
    } else if (m4 == n) {
      out.emplace_back(zero, one);
    } else if (m4 == 3ULL * n) {
      out.emplace_back(zero, -one);
    } else {
      // The angle interval is far narrower than the distance to any
      // multiple of pi/2, so cos and sin are monotone on it.
      BigRational angle(2 * m, n);
      angle.canonicalize();
      Interval theta = pi.times(angle);
      BigFloat c[4] = {BigFloat(precision), BigFloat(precision), BigFloat(precision), BigFloat(precision)};
      BigFloat s[4] = {BigFloat(precision), BigFloat(precision), BigFloat(precision), BigFloat(precision)};
      mpfr_cos(c[0].get(), theta.lower_bound().get(), MPFR_RNDD);
      mpfr_cos(c[1].get(), theta.upper_bound().get(), MPFR_RNDD);
      mpfr_cos(c[2].get(), theta.lower_bound().get(), MPFR_RNDU);
      mpfr_cos(c[3].get(), theta.upper_bound().get(), MPFR_RNDU);
      mpfr_sin(s[0].get(), theta.lower_bound().get(), MPFR_RNDD);
      mpfr_sin(s[1].get(), theta.upper_bound().get(), MPFR_RNDD);
      mpfr_sin(s[2].get(), theta.lower_bound().get(), MPFR_RNDU);
      mpfr_sin(s[3].get(), theta.upper_bound().get(), MPFR_RNDU);
      BigFloat clo(precision), chi(precision), slo(precision), shi(precision);
      mpfr_min(clo.get(), c[0].get(), c[1].get(), MPFR_RNDD);
      mpfr_max(chi.get(), c[2].get(), c[3].get(), MPFR_RNDU);
      mpfr_min(slo.get(), s[0].get(), s[1].get(), MPFR_RNDD);
      mpfr_max(shi.get(), s[2].get(), s[3].get(), MPFR_RNDU);
      out.emplace_back(Interval(std::move(clo), std::move(chi)), Interval(std::move(slo), std::move(shi)));
    }
  }
  return out;
}

long mod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

const std::vector<BigInt>& cyclotomic_polynomial(unsigned n) {
  check_order(n);
  {
    std::lock_guard<std::mutex> lock(phi_mutex());
    auto it = phi_cache().find(n);
    if (it != phi_cache().end()) return it->second;
  }
  std::vector<BigInt> p = compute_cyclotomic(n);
  std::lock_guard<std::mutex> lock(phi_mutex());
  return phi_cache().emplace(n, std::move(p)).first->second;
}

CyclotomicField::CyclotomicField(unsigned n) : n_(n), phi_(euler_phi(n)), modulus_(cyclotomic_polynomial(n)) {
  // z^m for m < n: shift the previous row and fold the top coefficient.
  powers_.reserve(n);
  std::vector<BigInt> row(phi_, BigInt(0));
  if (phi_ == 1) {
    row[0] = 1;
    for (unsigned m = 0; m < n; ++m) {
      powers_.push_back(row);
      row[0] *= -modulus_[0];
    }
  } else {
    row[0] = 1;
    for (unsigned m = 0; m < n; ++m) {
      powers_.push_back(row);
      BigInt top = row[phi_ - 1];
      for (unsigned i = phi_ - 1; i > 0; --i) row[i] = row[i - 1];
      row[0] = 0;
      if (top != 0) {
        for (unsigned i = 0; i < phi_; ++i) row[i] -= top * modulus_[i];
      }
    }
  }
  for (unsigned k = 1; k <= n; ++k) {
    if (std::gcd(k, n) == 1) units_.push_back(k);
  }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::get(unsigned n) {
  check_order(n);
  static std::mutex m;
  static std::map<unsigned, std::shared_ptr<const CyclotomicField>> cache;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  auto field = std::make_shared<const CyclotomicField>(n);
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(n, std::move(field)).first->second;
}

std::shared_ptr<const std::vector<ComplexInterval>> CyclotomicField::roots(mpfr_prec_t precision) const {
  std::lock_guard<std::mutex> lock(roots_mutex_);
  auto it = roots_.find(precision);
  if (it != roots_.end()) return it->second;
  auto table = std::make_shared<const std::vector<ComplexInterval>>(compute_roots(n_, precision));
  roots_.emplace(precision, table);
  return table;
}

CyclotomicElement::CyclotomicElement() : order_(1), coeffs_(1, BigRational(0)) {}

CyclotomicElement::CyclotomicElement(long value) : order_(1), coeffs_(1, BigRational(value)) {}

CyclotomicElement::CyclotomicElement(const BigInt& value) : order_(1), coeffs_(1, BigRational(value)) {}

CyclotomicElement::CyclotomicElement(const BigRational& value, unsigned order) : order_(order) {
  check_order(order);
  coeffs_.assign(euler_phi(order), BigRational(0));
  coeffs_[0] = value;
  coeffs_[0].canonicalize();
}

CyclotomicElement::CyclotomicElement(unsigned order, std::vector<BigRational> poly) : order_(order) {
  check_order(order);
  for (auto& c : poly) c.canonicalize();
  reduce(std::move(poly));
}

void CyclotomicElement::reduce(std::vector<BigRational> poly) {
  const auto f = field();
  const unsigned phi = f->degree();
  coeffs_.assign(phi, BigRational(0));
  if (poly.size() <= phi) {
    for (std::size_t i = 0; i < poly.size(); ++i) coeffs_[i] = std::move(poly[i]);
    return;
  }
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (sgn(poly[j]) == 0) continue;
    if (j < phi) {
      coeffs_[j] += poly[j];
      continue;
    }
    const auto& row = f->power(static_cast<unsigned>(j % order_));
    for (unsigned i = 0; i < phi; ++i) {
      if (row[i] != 0) coeffs_[i] += poly[j] * row[i];
    }
  }
}

CyclotomicElement CyclotomicElement::zeta(unsigned n, long k) {
  check_order(n);
  const auto f = CyclotomicField::get(n);
  const auto& row = f->power(static_cast<unsigned>(mod(k, n)));
  std::vector<BigRational> c(row.begin(), row.end());
  CyclotomicElement out;
  out.order_ = n;
  out.coeffs_ = std::move(c);
  return out;
}

bool CyclotomicElement::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigRational& c) { return sgn(c) == 0; });
}

bool CyclotomicElement::is_one() const noexcept { return is_rational() && coeffs_[0] == 1; }

bool CyclotomicElement::is_rational() const noexcept {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const BigRational& c) { return sgn(c) == 0; });
}

const BigRational& CyclotomicElement::rational_value() const {
  if (!is_rational()) throw domain_error("element is not rational");
  return coeffs_[0];
}

unsigned CyclotomicElement::common_order(unsigned a, unsigned b) {
  if (a == b) return a;
  const auto fa = CyclotomicField::get(a);
  const auto fb = CyclotomicField::get(b);
  const bool a_in_b = fb->contains_root_of_unity(a);
  const bool b_in_a = fa->contains_root_of_unity(b);
  if (a_in_b && b_in_a) return std::min(a, b);
  if (a_in_b) return b;
  if (b_in_a) return a;
  return std::lcm(a, b);
}

CyclotomicElement CyclotomicElement::promote(unsigned target) const {
  if (target == order_) return *this;
  if (is_rational()) return CyclotomicElement(coeffs_[0], target);
  const auto f = CyclotomicField::get(target);
  if (!f->contains_root_of_unity(order_)) {
    throw domain_error("Q(z" + std::to_string(order_) + ") is not contained in Q(z" + std::to_string(target) + ")");
  }
  long step;
  bool negate = false;
  if (target % order_ == 0) {
    step = static_cast<long>(target / order_);
  } else {
    const long e = static_cast<long>(2 * target / order_);
    step = static_cast<long>((target + 1) / 2) * e;
    negate = (e % 2) == 1;
  }
  const unsigned phi = f->degree();
  std::vector<BigRational> out(phi, BigRational(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (sgn(coeffs_[j]) == 0) continue;
    const auto& row = f->power(static_cast<unsigned>(mod(step * static_cast<long>(j), target)));
    const bool neg = negate && (j % 2 == 1);
    for (unsigned i = 0; i < phi; ++i) {
      if (row[i] == 0) continue;
      if (neg) out[i] -= coeffs_[j] * row[i];
      else out[i] += coeffs_[j] * row[i];
    }
  }
  CyclotomicElement r;
  r.order_ = target;
  r.coeffs_ = std::move(out);
  return r;
}

namespace {

// Brings both operands to one order; rationals adopt the other operand's order.
unsigned target_order(const CyclotomicElement& a, const CyclotomicElement& b) {
  if (a.order() == b.order()) return a.order();
  if (b.is_rational() && a.is_rational()) return std::max(a.order(), b.order());
  if (b.is_rational()) return a.order();
  if (a.is_rational()) return b.order();
  return CyclotomicElement::common_order(a.order(), b.order());
}

}  // namespace

CyclotomicElement CyclotomicElement::operator-() const {
  CyclotomicElement r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CyclotomicElement& CyclotomicElement::operator+=(const CyclotomicElement& other) {
  const unsigned t = target_order(*this, other);
  if (t != order_) *this = promote(t);
  if (other.order_ != t) {
    const CyclotomicElement o = other.promote(t);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  } else {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  }
  return *this;
}

CyclotomicElement& CyclotomicElement::operator-=(const CyclotomicElement& other) {
  return *this += -other;
}

CyclotomicElement& CyclotomicElement::operator*=(const CyclotomicElement& other) {
  if (other.is_rational()) {
    const BigRational s = other.coeffs_[0];
    if (other.order_ > order_ && is_rational()) *this = promote(other.order_);
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  if (is_rational()) {
    const BigRational s = coeffs_[0];
    *this = other;
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  const unsigned t = target_order(*this, other);
  const CyclotomicElement a = promote(t);
  const CyclotomicElement b = other.promote(t);
  std::vector<BigRational> prod(a.coeffs_.size() + b.coeffs_.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (sgn(b.coeffs_[j]) == 0) continue;
      prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  order_ = t;
  reduce(std::move(prod));
  return *this;
}

CyclotomicElement& CyclotomicElement::operator/=(const CyclotomicElement& other) {
  if (other.is_zero()) throw division_by_zero();
  if (other.is_rational()) {
    const BigRational s = other.coeffs_[0];
    if (other.order_ > order_ && is_rational()) *this = promote(other.order_);
    for (auto& c : coeffs_) c /= s;
    return *this;
  }
  return *this *= other.inverse();
}

CyclotomicElement CyclotomicElement::inverse() const {
  if (is_zero()) throw division_by_zero();
  if (is_rational()) return CyclotomicElement(BigRational(1) / coeffs_[0], order_);
  const auto f = field();
  QPoly r0(f->modulus().begin(), f->modulus().end());
  QPoly r1 = coeffs_;
  trim(r1);
  QPoly s0;
  QPoly s1{BigRational(1)};
  while (deg(r1) > 0) {
    auto [q, r] = divmod(r0, r1);
    QPoly s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw domain_error("element not invertible");
  for (auto& c : s1) c /= r1[0];
  return CyclotomicElement(order_, std::move(s1));
}

CyclotomicElement CyclotomicElement::pow(unsigned long e) const {
  CyclotomicElement result(BigRational(1), order_);
  CyclotomicElement base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

CyclotomicElement CyclotomicElement::galois_conjugate(long k) const {
  const long n = static_cast<long>(order_);
  if (std::gcd(mod(k, n), n) != 1 && n != 1) {
    throw domain_error("galois_conjugate: " + std::to_string(k) + " is not coprime to " + std::to_string(n));
  }
  if (is_rational()) return *this;
  std::vector<BigRational> poly(order_, BigRational(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    poly[static_cast<std::size_t>(mod(static_cast<long>(j) * k, n))] += coeffs_[j];
  }
  return CyclotomicElement(order_, std::move(poly));
}

ComplexInterval CyclotomicElement::embed(long k, mpfr_prec_t precision) const {
  const long n = static_cast<long>(order_);
  if (n != 1 && std::gcd(mod(k, n), n) != 1) {
    throw domain_error("embed: " + std::to_string(k) + " is not coprime to " + std::to_string(n));
  }
  ComplexInterval acc(precision);
  if (is_rational()) return ComplexInterval(Interval(coeffs_[0], precision), Interval(precision));
  const auto table = field()->roots(precision);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (sgn(coeffs_[j]) == 0) continue;
    const auto& r = (*table)[static_cast<std::size_t>(mod(static_cast<long>(j) * k, n))];
    acc += r.times(Interval(coeffs_[j], precision));
  }
  return acc;
}

std::vector<ComplexInterval> CyclotomicElement::embeddings(mpfr_prec_t precision) const {
  std::vector<ComplexInterval> out;
  for (unsigned k : field()->units()) out.push_back(embed(k, precision));
  return out;
}

bool CyclotomicElement::is_algebraic_integer() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigRational& c) { return c.get_den() == 1; });
}

BigInt CyclotomicElement::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& c : coeffs_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

BigRational CyclotomicElement::field_norm() const {
  if (is_rational()) {
    BigRational p = 1;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) p *= coeffs_[0];
    return p;
  }
  const auto f = field();
  QPoly phi(f->modulus().begin(), f->modulus().end());
  return resultant(phi, coeffs_);
}

bool CyclotomicElement::is_root_of_unity() const {
  if (is_zero() || !is_algebraic_integer()) return false;
  if (is_rational()) return coeffs_[0] == 1 || coeffs_[0] == -1;
  const BigRational norm = field_norm();
  if (norm != 1 && norm != -1) return false;
  return pow(field()->roots_of_unity_order()).is_one();
}

bool operator==(const CyclotomicElement& a, const CyclotomicElement& b) {
  if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
  const unsigned t = target_order(a, b);
  return a.promote(t).coeffs_ == b.promote(t).coeffs_;
}

int CyclotomicElement::compare(const CyclotomicElement& a, const CyclotomicElement& b) {
  if (a.order_ != b.order_) return a.order_ < b.order_ ? -1 : 1;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    const int c = cmp(a.coeffs_[i], b.coeffs_[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::size_t CyclotomicElement::hash() const noexcept {
  std::size_t seed = order_;
  for (const auto& c : coeffs_) hash_combine(seed, hash_value(c));
  return seed;
}

std::string CyclotomicElement::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const BigRational& c = coeffs_[j];
    if (sgn(c) == 0) continue;
    BigRational a = abs(c);
    if (first) {
      if (sgn(c) < 0) out << '-';
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (j == 0) {
      out << a.get_str();
      continue;
    }
    if (a != 1) {
      if (a.get_den() == 1) out << a.get_str() << '*';
      else out << '(' << a.get_str() << ")*";
    }
    out << 'z' << order_;
    if (j > 1) out << '^' << j;
  }
  if (first) return "0";
  return out.str();
}

BigInt ideal_norm(const std::vector<CyclotomicElement>& generators) {
  if (generators.empty()) throw domain_error("ideal_norm: no generators");
  unsigned order = generators[0].order();
  for (const auto& g : generators) order = CyclotomicElement::common_order(order, g.order());
  std::vector<CyclotomicElement> gens;
  for (const auto& g : generators) {
    if (!g.is_algebraic_integer()) throw domain_error("ideal_norm: generator is not integral");
    if (!g.is_zero()) gens.push_back(g.promote(order));
  }
  if (gens.empty()) throw domain_error("ideal_norm: all generators are zero");
  BigInt modulus = 0;
  for (const auto& g : gens) {
    BigInt n = abs(g.field_norm().get_num());
    if (modulus == 0 || n < modulus) modulus = n;
  }
  if (modulus == 1) return 1;
  const auto f = CyclotomicField::get(order);
  const unsigned phi = f->degree();
  std::vector<std::vector<BigInt>> rows;
  const CyclotomicElement z = CyclotomicElement::zeta(order, 1);
  for (const auto& g : gens) {
    CyclotomicElement x = g;
    for (unsigned j = 0; j < phi; ++j) {
      std::vector<BigInt> row(phi);
      for (unsigned i = 0; i < phi; ++i) {
        row[i] = x.coeffs()[i].get_num();
        mpz_mod(row[i].get_mpz_t(), row[i].get_mpz_t(), modulus.get_mpz_t());
      }
      rows.push_back(std::move(row));
      x *= z;
    }
  }
  BigInt det = 1;
  for (unsigned c = 0; c < phi; ++c) {
    // Gcd-combine all rows into a single pivot row for column c.
    std::vector<BigInt> pivot(phi, BigInt(0));
    BigInt g1 = 0;
    std::vector<std::vector<BigInt>> rest;
    for (auto& row : rows) {
      if (row[c] == 0) {
        rest.push_back(std::move(row));
        continue;
      }
      if (g1 == 0) {
        pivot = std::move(row);
        g1 = pivot[c];
        continue;
      }
      BigInt g, u, v;
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), g1.get_mpz_t(), row[c].get_mpz_t());
      const BigInt a = g1 / g;
      const BigInt b = row[c] / g;
      std::vector<BigInt> np(phi), nr(phi);
      for (unsigned i = c; i < phi; ++i) {
        np[i] = u * pivot[i] + v * row[i];
        if (i > c) mpz_mod(np[i].get_mpz_t(), np[i].get_mpz_t(), modulus.get_mpz_t());
        nr[i] = a * row[i] - b * pivot[i];
        mpz_mod(nr[i].get_mpz_t(), nr[i].get_mpz_t(), modulus.get_mpz_t());
      }
      pivot = std::move(np);
      g1 = g;
      rest.push_back(std::move(nr));
    }
    // Combine with modulus * e_c, which lies in the lattice.
    BigInt g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), g1.get_mpz_t(), modulus.get_mpz_t());
    if (g1 != 0) {
      std::vector<BigInt> leftover(phi, BigInt(0));
      const BigInt scale = modulus / g;
      for (unsigned i = c + 1; i < phi; ++i) {
        leftover[i] = scale * pivot[i];
        mpz_mod(leftover[i].get_mpz_t(), leftover[i].get_mpz_t(), modulus.get_mpz_t());
      }
      rest.push_back(std::move(leftover));
    }
    det *= g;
    rows = std::move(rest);
  }
  return det;
}

}  // namespace arithdyn

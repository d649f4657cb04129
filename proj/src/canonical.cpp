#include "arithdyn/canonical.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_set>

#include "arithdyn/errors.hpp"
#include "arithdyn/parallel.hpp"
#include "arithdyn/parser.hpp"

namespace arithdyn {

namespace {

Interval symmetric(const Interval& t) { return Interval::hull(t, -t); }

Interval from_int64(std::int64_t v, mpfr_prec_t prec) { return Interval(BigInt(static_cast<long>(v)), prec); }

Interval positive_infinity(mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), 1);
  return Interval(std::move(lo), std::move(hi));
}

Interval ipow(const Interval& x, unsigned e, mpfr_prec_t prec) {
  Interval r(BigInt(1), prec);
  Interval b = x;
  while (e) {
    if (e & 1U) r *= b;
    e >>= 1U;
    if (e) b = b.square();
  }
  return r;
}

std::int64_t checked_shift(std::int64_t shift, unsigned d, long e) {
  std::int64_t out;
  if (__builtin_mul_overflow(shift, static_cast<std::int64_t>(d), &out) ||
      __builtin_add_overflow(out, static_cast<std::int64_t>(e), &out)) {
    throw cap_exceeded("height tracker exponent overflow");
  }
  return out;
}

// Magnitudes below 2^-flush relative to the largest coordinate cannot affect
// the result at this precision; they are widened to a symmetric interval so
// the exponent range stays bounded.
long flush_limit(mpfr_prec_t prec) { return 2 * static_cast<long>(prec) + 64; }

Interval flushed(mpfr_prec_t prec) {
  return symmetric(Interval(BigInt(1), prec).scaled_by_power_of_two(-flush_limit(prec)));
}

long normalize_real(std::vector<Interval>& v, mpfr_prec_t prec) {
  long e = std::numeric_limits<long>::min();
  for (const auto& x : v) e = std::max<long>(e, x.magnitude_exponent());
  for (auto& x : v) {
    if (x.is_exact() && x.contains_zero()) continue;
    x = x.scaled_by_power_of_two(-e);
    if (x.magnitude_exponent() < -flush_limit(prec)) x = flushed(prec);
  }
  return e;
}

long normalize_complex(std::vector<ComplexInterval>& v, mpfr_prec_t prec) {
  long e = std::numeric_limits<long>::min();
  for (const auto& x : v) e = std::max<long>(e, x.magnitude_exponent());
  for (auto& x : v) {
    Interval re = x.real(), im = x.imag();
    for (Interval* p : {&re, &im}) {
      if (p->is_exact() && p->contains_zero()) continue;
      *p = p->scaled_by_power_of_two(-e);
      if (p->magnitude_exponent() < -flush_limit(prec)) *p = flushed(prec);
    }
    x = ComplexInterval(std::move(re), std::move(im));
  }
  return e;
}

std::vector<Interval> per_generator_c(const SemigroupSystem& sys) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < sys.size(); ++i) out.push_back(c_bound(sys.lift(i), sys.certificate(i), sys.precision()));
  return out;
}

Interval certified_max(const SemigroupSystem& sys) {
  Interval m(sys.precision());
  for (std::size_t i = 0; i < sys.size(); ++i) m = Interval::max(m, certified_c(sys, i));
  return m;
}

BigInt big_pow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

void check_tol(double tol) {
  if (!(tol > 0)) throw domain_error("tol must be positive");
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Interval assemble(const Interval& computed, const Interval& truncation) {
  return (computed + symmetric(truncation)).nonnegative_part();
}

}  // namespace

Interval c_bound(const ProjectiveLift& lift, const Certificate& cert, mpfr_prec_t precision) {
  std::size_t mf = 0;
  for (const auto& c : lift.components) mf = std::max(mf, c.term_count());
  const Interval hf = projective_height(coefficient_vector(lift.components), precision).enclosure() +
                      Interval(BigInt(static_cast<unsigned long>(mf)), precision).log();
  const auto g = cert.flattened();
  const unsigned long mg = (lift.dimension + 1UL) * cert.max_term_count();
  const Interval hg = projective_height(coefficient_vector(g), precision).enclosure() +
                      Interval(BigInt(mg), precision).log();
  return Interval::max(hf, hg).divided_by(BigInt(lift.degree));
}

CBound c_bound(const SemigroupSystem& sys) {
  CBound out;
  out.per_generator = per_generator_c(sys);
  out.value = Interval(sys.precision());
  for (const auto& c : out.per_generator) out.value = Interval::max(out.value, c);
  return out;
}

Interval certified_c(const SemigroupSystem& sys, std::size_t i) {
  if (is_unitary_monomial_form(sys.generator(i))) return Interval(sys.precision());
  return c_bound(sys.lift(i), sys.certificate(i), sys.precision());
}

// ---------------------------------------------------------------------------
// HeightTracker

struct HeightTracker::Plan {
  struct Term {
    std::vector<unsigned> e;
    BigInt c;
  };

  explicit Plan(SemigroupSystem s) : sys(std::move(s)) {}

  SemigroupSystem sys;
  bool rational = false;
  bool integral_certificates = true;
  BigInt E = 1;
  // Integral multiples of each lift, as term lists (rational) and polynomials.
  std::vector<std::vector<std::vector<Term>>> terms;
  std::vector<std::vector<MultiPoly>> scaled;
};

std::shared_ptr<const HeightTracker::Plan> HeightTracker::plan(const SemigroupSystem& sys) {
  auto p = std::make_shared<Plan>(sys);
  p->rational = sys.is_rational();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& lift = sys.lift(i);
    const BigInt lambda = integrality_scaler(lift.components);
    const CyclotomicElement lam(BigRational(lambda), sys.order());
    const CyclotomicElement inv(BigRational(BigInt(1), lambda), sys.order());
    std::vector<MultiPoly> comps;
    for (const auto& c : lift.components) comps.push_back(c * lam);
    std::vector<MultiPoly> g = sys.certificate(i).flattened();
    for (auto& q : g) q *= inv;
    const BigInt Ei = integrality_scaler(g);
    if (Ei != 1) p->integral_certificates = false;
    p->E = lcm(p->E, Ei);
    std::vector<std::vector<Plan::Term>> t;
    if (p->rational) {
      for (const auto& c : comps) {
        std::vector<Plan::Term> row;
        for (const auto& [e, a] : c.terms()) row.push_back({std::vector<unsigned>(e.begin(), e.end()), a.rational_value().get_num()});
        t.push_back(std::move(row));
      }
    }
    p->terms.push_back(std::move(t));
    p->scaled.push_back(std::move(comps));
  }
  return p;
}

HeightTracker::HeightTracker(const SemigroupSystem& sys, const AffinePoint& x, unsigned max_steps,
                             std::size_t exact_bit_cap)
    : HeightTracker(plan(sys), x, max_steps, exact_bit_cap) {}

HeightTracker::HeightTracker(std::shared_ptr<const Plan> plan, const AffinePoint& x, unsigned max_steps,
                             std::size_t exact_bit_cap, mpfr_prec_t precision)
    : plan_(std::move(plan)), max_steps_(max_steps), bit_cap_(exact_bit_cap) {
  const SemigroupSystem& sys = plan_->sys;
  precision_ = precision ? precision : sys.precision();
  start_ = sys.normalize(x);
  // Integral lift (x_1 D, ..., x_N D, D).
  BigInt D = 1;
  for (const auto& c : start_.coords) D = lcm(D, c.denominator_lcm());
  if (plan_->rational && start_.is_rational()) {
    mode_ = Mode::rational;
    std::vector<BigInt> X;
    for (const auto& c : start_.coords) {
      const BigRational v = c.rational_value() * D;
      X.push_back(v.get_num());
    }
    X.push_back(D);
    BigInt g = 0;
    for (const auto& v : X) g = gcd(g, v);
    for (auto& v : X) v /= g;
    if (plan_->E > 1) {
      modulus_ = big_pow(plan_->E, max_steps_ + 1UL);
      for (const auto& v : X) {
        BigInt r;
        mpz_mod(r.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
        residues_.push_back(r);
      }
    }
    for (const auto& v : X) real_.emplace_back(v, precision_);
    shift_ = normalize_real(real_, precision_);
  } else if (plan_->integral_certificates) {
    mode_ = Mode::cyclotomic;
    std::vector<CyclotomicElement> X;
    const CyclotomicElement Dc(BigRational(D), sys.order());
    for (const auto& c : start_.coords) X.push_back(c * Dc);
    X.push_back(Dc);
    start_norm_ = ideal_norm(X);
    for (unsigned k : sys.units()) {
      std::vector<ComplexInterval> v;
      for (const auto& c : X) v.push_back(c.embed(k, precision_));
      shifts_.push_back(normalize_complex(v, precision_));
      complex_.push_back(std::move(v));
    }
  } else {
    mode_ = Mode::exact;
    exact_ = start_;
  }
}

void HeightTracker::step(unsigned generator) {
  const SemigroupSystem& sys = plan_->sys;
  if (generator >= sys.size()) throw domain_error("generator index out of range");
  if (history_.size() >= max_steps_) throw cap_exceeded("height tracker step budget exhausted");
  const unsigned d = sys.degree(generator);
  switch (mode_) {
    case Mode::rational: {
      const auto& comps = plan_->terms[generator];
      std::vector<Interval> next;
      for (const auto& row : comps) {
        Interval acc(precision_);
        for (const auto& t : row) {
          Interval term(t.c, precision_);
          for (std::size_t j = 0; j < t.e.size(); ++j) {
            if (t.e[j]) term *= ipow(real_[j], t.e[j], precision_);
          }
          acc += term;
        }
        next.push_back(std::move(acc));
      }
      if (plan_->E > 1) {
        std::vector<BigInt> y;
        for (const auto& row : comps) {
          BigInt acc = 0;
          for (const auto& t : row) {
            BigInt term = t.c;
            for (std::size_t j = 0; j < t.e.size(); ++j) {
              if (!t.e[j]) continue;
              BigInt p;
              mpz_powm_ui(p.get_mpz_t(), residues_[j].get_mpz_t(), t.e[j], modulus_.get_mpz_t());
              term = (term * p) % modulus_;
            }
            acc += term;
          }
          mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), modulus_.get_mpz_t());
          y.push_back(std::move(acc));
        }
        BigInt g = plan_->E;
        for (const auto& v : y) g = gcd(g, v);
        modulus_ /= g;
        for (std::size_t j = 0; j < y.size(); ++j) residues_[j] = (y[j] / g) % modulus_;
        if (g > 1) {
          for (auto& v : next) v = v.divided_by(g);
        }
      }
      real_ = std::move(next);
      shift_ = checked_shift(shift_, d, normalize_real(real_, precision_));
      break;
    }
    case Mode::cyclotomic: {
      const auto& comps = plan_->scaled[generator];
      const auto& units = sys.units();
      for (std::size_t u = 0; u < units.size(); ++u) {
        std::vector<ComplexInterval> next;
        for (const auto& c : comps) next.push_back(c.evaluate_embedded(complex_[u], units[u], precision_));
        complex_[u] = std::move(next);
        shifts_[u] = checked_shift(shifts_[u], d, normalize_complex(complex_[u], precision_));
      }
      break;
    }
    case Mode::exact: {
      exact_ = sys.apply(generator, exact_);
      if (point_bit_size(exact_) > bit_cap_) {
        throw cap_exceeded("exact iterate exceeds " + std::to_string(bit_cap_) + " bits");
      }
      break;
    }
  }
  degree_product_ *= d;
  history_.push_back(generator);
}

std::optional<Interval> HeightTracker::try_height() const {
  const Interval ln2 = Interval::log2(precision_);
  Interval h(precision_);
  switch (mode_) {
    case Mode::rational: {
      Interval m(precision_);
      for (const auto& v : real_) m = Interval::max(m, v.abs());
      if (!m.certainly_positive()) return std::nullopt;
      h = from_int64(shift_, precision_) * ln2 + m.log();
      break;
    }
    case Mode::cyclotomic: {
      Interval sum(precision_);
      for (std::size_t u = 0; u < complex_.size(); ++u) {
        Interval m(precision_);
        for (const auto& v : complex_[u]) m = Interval::max(m, v.abs());
        if (!m.certainly_positive()) return std::nullopt;
        sum += from_int64(shifts_[u], precision_) * ln2 + m.log();
      }
      sum -= Interval(start_norm_, precision_).log().times(BigRational(degree_product_));
      h = sum.divided_by(BigInt(static_cast<unsigned long>(complex_.size())));
      break;
    }
    case Mode::exact:
      return weil_height(exact_, precision_).enclosure();
  }
  if (h.radius() > 1e-20) return std::nullopt;
  return h.nonnegative_part();
}

Interval HeightTracker::height() const {
  if (auto h = try_height()) return *h;
  for (mpfr_prec_t p = 2 * precision_; p <= 16384; p *= 2) {
    HeightTracker t(plan_, start_, max_steps_, bit_cap_, p);
    for (unsigned g : history_) t.step(g);
    if (auto h = t.try_height()) return *h;
  }
  throw cap_exceeded("height tracker lost accuracy at 16384 bits");
}

// ---------------------------------------------------------------------------
// Words

WordStream WordStream::periodic(Word pattern) {
  if (pattern.empty()) throw domain_error("periodic word pattern is empty");
  WordStream w;
  w.pattern_ = std::move(pattern);
  return w;
}

WordStream WordStream::random(const SemigroupSystem& sys, std::uint64_t seed) {
  WordStream w;
  w.random_ = true;
  for (std::size_t i = 0; i < sys.size(); ++i) w.weights_.push_back(sys.degree(i));
  w.rng_.seed(seed);
  return w;
}

unsigned WordStream::next() {
  if (!random_) return pattern_[pos_++ % pattern_.size()];
  std::uint64_t total = 0;
  for (unsigned x : weights_) total += x;
  // Rejection sampling keeps the draw exactly uniform on [0, total).
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % total;
  std::uint64_t r;
  do {
    r = rng_();
  } while (r >= limit);
  r %= total;
  ++pos_;
  for (unsigned i = 0; i < weights_.size(); ++i) {
    if (r < weights_[i]) return i;
    r -= weights_[i];
  }
  return static_cast<unsigned>(weights_.size() - 1);
}

Word WordStream::prefix(std::size_t n) const {
  WordStream copy = *this;
  Word w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(copy.next());
  return w;
}

// ---------------------------------------------------------------------------
// Canonical heights

namespace {

const char* mode_name(HeightTracker::Mode m) {
  switch (m) {
    case HeightTracker::Mode::rational:
      return "rational";
    case HeightTracker::Mode::cyclotomic:
      return "cyclotomic";
    case HeightTracker::Mode::exact:
      return "exact";
  }
  return "exact";
}

constexpr unsigned max_depth = 4096;

CanonicalEstimate along(const SemigroupSystem& sys, const Word& w, const AffinePoint& x, const Interval& truncation) {
  HeightTracker t(sys, x, static_cast<unsigned>(w.size()));
  for (unsigned g : w) t.step(g);
  CanonicalEstimate out;
  out.depth = static_cast<unsigned>(w.size());
  out.truncation = truncation;
  out.computed = t.height().divided_by(t.degree_product());
  out.estimate = HeightEstimate(assemble(out.computed, truncation));
  out.tracker = mode_name(t.mode());
  return out;
}

}  // namespace

CanonicalEstimate canonical_height_map(const SemigroupSystem& sys, std::size_t generator, const AffinePoint& x,
                                       double tol) {
  check_tol(tol);
  if (generator >= sys.size()) throw domain_error("generator index out of range");
  const Interval two_c = certified_c(sys, generator).times(BigRational(2));
  const BigInt d = sys.degree(generator);
  BigInt dn = 1;
  Word w;
  while (!(two_c.divided_by(dn).upper() < tol)) {
    if (w.size() >= max_depth) throw cap_exceeded("depth exceeds " + std::to_string(max_depth));
    w.push_back(static_cast<unsigned>(generator));
    dn *= d;
  }
  return along(sys, w, x, two_c.divided_by(dn));
}

CanonicalEstimate canonical_height_word(const SemigroupSystem& sys, WordStream words, const AffinePoint& x,
                                        double tol) {
  check_tol(tol);
  const Interval two_c = certified_max(sys).times(BigRational(2));
  BigInt prod = 1;
  Word w;
  while (!(two_c.divided_by(prod).upper() < tol)) {
    if (w.size() >= max_depth) throw cap_exceeded("depth exceeds " + std::to_string(max_depth));
    const unsigned j = words.next();
    if (j >= sys.size()) throw domain_error("word index out of range");
    w.push_back(j);
    prod *= sys.degree(j);
  }
  return along(sys, w, x, two_c.divided_by(prod));
}

namespace {

Interval leaf_sum(const HeightTracker& t, unsigned remaining, std::size_t s) {
  if (remaining == 0) return t.height();
  Interval acc(t.height().precision());
  for (std::size_t j = 0; j < s; ++j) {
    HeightTracker next = t;
    next.step(static_cast<unsigned>(j));
    acc += leaf_sum(next, remaining - 1, s);
  }
  return acc;
}

SemigroupEstimate exact_sum(const SemigroupSystem& sys, const AffinePoint& x, double tol,
                            const SemigroupOptions& opt) {
  const std::size_t s = sys.size();
  const BigInt D = sys.degree_sum();
  const BigRational ratio(BigInt(static_cast<unsigned long>(s)), D);
  const Interval two_c = certified_max(sys).times(BigRational(2));
  BigRational r = 1;
  unsigned n = 0;
  while (!(two_c.times(r).upper() < tol)) {
    if (n >= max_depth) throw cap_exceeded("depth exceeds " + std::to_string(max_depth));
    ++n;
    r *= ratio;
  }
  SemigroupEstimate out;
  out.depth = n;
  out.truncation = two_c.times(r);
  const mpfr_prec_t prec = sys.precision();
  const auto lv = orbit_levels(sys, x, n, opt.caps);
  Interval total(prec);
  if (!lv.truncated) {
    for (const auto& e : lv.levels[n]) {
      total += weil_height(e.point, prec).enclosure().times(BigRational(e.multiplicity));
      out.words += 1;
    }
  } else {
    const auto& roots = lv.levels.back();
    const unsigned k = static_cast<unsigned>(lv.levels.size() - 1);
    const BigInt leaves = BigInt(static_cast<unsigned long>(roots.size())) * big_pow(BigInt(static_cast<unsigned long>(s)), n - k);
    if (leaves > BigInt(static_cast<unsigned long>(opt.max_words))) {
      throw cap_exceeded("exact word sum needs " + leaves.get_str() + " words at depth " + std::to_string(n) +
                         " (cap " + std::to_string(opt.max_words) + "); use monte-carlo mode");
    }
    const auto plan = HeightTracker::plan(sys);
    std::vector<Interval> partial(roots.size(), Interval(prec));
    parallel_for(roots.size(), [&](std::size_t t) {
      HeightTracker root(plan, roots[t].point, n - k);
      partial[t] = leaf_sum(root, n - k, s).times(BigRational(roots[t].multiplicity));
    });
    for (const auto& p : partial) total += p;
    out.words = leaves.get_ui();
  }
  const Interval value = total.divided_by(big_pow(D, n));
  out.estimate = HeightEstimate(assemble(value, out.truncation));
  return out;
}

SemigroupEstimate monte_carlo(const SemigroupSystem& sys, const AffinePoint& x, double tol,
                              const SemigroupOptions& opt) {
  if (opt.samples == 0) throw domain_error("monte-carlo mode needs at least one sample");
  std::vector<CanonicalEstimate> runs(opt.samples);
  parallel_for(opt.samples, [&](std::size_t t) {
    runs[t] = canonical_height_word(sys, WordStream::random(sys, splitmix(opt.seed + t)), x, tol);
  });
  const mpfr_prec_t prec = sys.precision();
  Interval sum(prec);
  Interval trunc(prec);
  double mean = 0;
  SemigroupEstimate out;
  for (const auto& r : runs) {
    sum += r.estimate.enclosure();
    trunc = Interval::max(trunc, r.truncation);
    mean += r.estimate.value();
    out.depth = std::max(out.depth, r.depth);
  }
  const double n = static_cast<double>(opt.samples);
  mean /= n;
  double var = 0;
  for (const auto& r : runs) var += (r.estimate.value() - mean) * (r.estimate.value() - mean);
  var = opt.samples > 1 ? var / (n - 1) : 0;
  out.estimate = HeightEstimate(sum.divided_by(BigInt(static_cast<unsigned long>(opt.samples))));
  out.truncation = trunc;
  out.mean = mean;
  out.standard_error = std::sqrt(var / n);
  out.words = opt.samples;
  return out;
}

}  // namespace

SemigroupEstimate canonical_height_semigroup(const SemigroupSystem& sys, const AffinePoint& x, double tol,
                                             const SemigroupOptions& options) {
  check_tol(tol);
  if (options.mode == SemigroupOptions::Mode::monte_carlo) return monte_carlo(sys, x, tol, options);
  return exact_sum(sys, x, tol, options);
}

// ---------------------------------------------------------------------------
// Preperiodicity

std::string to_string(Preperiodicity p) {
  switch (p) {
    case Preperiodicity::preperiodic_confirmed:
      return "preperiodic-confirmed";
    case Preperiodicity::nonpreperiodic_certified:
      return "nonpreperiodic-certified";
    case Preperiodicity::undecided:
      return "undecided";
  }
  return "undecided";
}

PreperiodicVerdict preperiodic_by_height(const SemigroupSystem& sys, const AffinePoint& x, double tol, unsigned k_max,
                                         unsigned l_max) {
  check_tol(tol);
  PreperiodicVerdict out;
  const OrbitCaps caps{4096, 1 << 16};
  // A positive height along one generator already makes the orbit infinite,
  // and costs one path instead of s^n words.
  for (std::size_t j = 0; j < sys.size(); ++j) {
    try {
      const auto est = canonical_height_map(sys, j, x, tol);
      if (est.estimate.enclosure().certainly_positive()) {
        out.estimate = est.estimate;
        out.verdict = Preperiodicity::nonpreperiodic_certified;
        out.note = "height along " + sys.name(j) + " alone is positive";
        out.pi.k_max = k_max;
        out.pi.l_max = l_max;
        return out;
      }
    } catch (const cap_exceeded&) {
    }
  }
  const auto lv = orbit_levels(sys, x, k_max + l_max, caps);
  std::unordered_set<AffinePoint, PointHash> seen;
  for (const auto& e : lv.levels[0]) seen.insert(e.point);
  for (unsigned k = 1; k < lv.levels.size() && !out.closed_at; ++k) {
    bool inside = true;
    for (const auto& e : lv.levels[k]) {
      if (!seen.count(e.point)) {
        inside = false;
        break;
      }
    }
    if (inside) {
      out.closed_at = k;
    } else {
      for (const auto& e : lv.levels[k]) seen.insert(e.point);
    }
  }
  out.pi = pi_membership(sys, x, k_max, l_max, caps);
  try {
    const auto est = canonical_height_semigroup(sys, x, tol);
    out.estimate = est.estimate;
    if (!out.closed_at && est.estimate.enclosure().certainly_positive()) {
      out.verdict = Preperiodicity::nonpreperiodic_certified;
      out.note = "semigroup height is positive (exact word sum at depth " + std::to_string(est.depth) + ")";
      return out;
    }
  } catch (const cap_exceeded&) {
    out.note = "exact word sum exceeded its cap";
  }
  if (out.closed_at) {
    out.verdict = Preperiodicity::preperiodic_confirmed;
    out.note = "orbit closes at level " + std::to_string(*out.closed_at) + " (" + std::to_string(seen.size()) +
               " points)";
    return out;
  }
  out.verdict = Preperiodicity::undecided;
  std::string why = lv.truncated ? lv.cap_hit : "orbit did not close within " + std::to_string(k_max + l_max) + " levels";
  out.note = out.note.empty() ? why : out.note + "; " + why;
  return out;
}

// ---------------------------------------------------------------------------
// Collisions

Interval collision_height_bound(const SemigroupSystem& sys, unsigned n_max) {
  const mpfr_prec_t prec = sys.precision();
  const unsigned dmin = sys.min_degree();
  const Interval cp = c_bound(sys).value.times(BigRational(BigInt(dmin), BigInt(dmin - 1)));
  std::vector<std::vector<BigInt>> degs(1, {BigInt(1)});
  for (unsigned k = 1; k <= n_max; ++k) {
    std::vector<BigInt> next;
    for (const auto& a : degs.back()) {
      for (std::size_t i = 0; i < sys.size(); ++i) next.push_back(a * sys.degree(i));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    degs.push_back(std::move(next));
  }
  BigRational worst = 0;
  for (unsigned n = 2; n <= n_max; ++n) {
    for (unsigned m = 1; m < n; ++m) {
      for (const auto& a : degs[n]) {
        for (const auto& b : degs[m]) {
          if (a == b) return positive_infinity(prec);
          const BigInt big = std::max(a, b), small = std::min(a, b);
          BigRational q(2 * (small + 1), big - small);
          q.canonicalize();
          worst = std::max(worst, q);
        }
      }
    }
  }
  return cp + cp.times(worst);
}

CollisionExperiment collision_bound_experiment(const SemigroupSystem& sys, const CandidateBox& box, unsigned n_max,
                                               const OrbitCaps& caps, std::size_t max_candidates) {
  const mpfr_prec_t prec = sys.precision();
  CollisionExperiment out;
  out.n_max = n_max;
  out.bound = collision_height_bound(sys, n_max);
  out.max_height = Interval(prec);
  const auto pts = box.enumerate(max_candidates);
  out.candidates = pts.size();
  std::vector<CollisionReport> reports(pts.size());
  parallel_for(pts.size(), [&](std::size_t t) { reports[t] = collision_search(sys, pts[t], n_max, caps); });
  for (std::size_t t = 0; t < pts.size(); ++t) {
    const auto& r = reports[t];
    out.truncated = out.truncated || r.truncated;
    if (r.collisions.empty()) continue;
    CollisionRow row{sys.normalize(pts[t]), weil_height(pts[t], prec), r.collisions.front()};
    out.max_height = Interval::max(out.max_height, row.height.enclosure());
    out.max_n = std::max(out.max_n, row.first.m);
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Split multilinear forms

void SplitMultilinearForm::validate(unsigned dimension) const {
  if (arity == 0) throw domain_error("split form has no variables");
  if (blocks.empty() || blocks.size() != coeffs.size()) throw domain_error("split form needs one coefficient per block");
  std::vector<bool> used(arity, false);
  for (const auto& b : blocks) {
    if (b.empty()) throw domain_error("split form block is empty");
    for (unsigned j : b) {
      if (j >= arity) throw domain_error("split form variable out of range");
      if (used[j]) throw domain_error("split form blocks overlap at T" + std::to_string(j + 1));
      used[j] = true;
    }
  }
  for (unsigned j = 0; j < arity; ++j) {
    if (!used[j]) throw domain_error("split form blocks miss T" + std::to_string(j + 1));
  }
  for (const auto& c : coeffs) {
    if (c.dimension() != dimension) throw domain_error("split form coefficient has the wrong dimension");
    for (const auto& x : c.coords) {
      if (x.is_zero()) throw domain_error("split form coefficients must have nonzero coordinates");
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Splits at c where the parenthesis depth is zero.
std::vector<std::string> split_top(const std::string& s, char c) {
  std::vector<std::string> out(1);
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == c && depth == 0) {
      out.emplace_back();
      continue;
    }
    out.back() += ch;
  }
  return out;
}

bool variable_index(const std::string& f, unsigned& index) {
  if (f.size() < 2 || f[0] != 'T') return false;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(f[i]))) return false;
  }
  index = static_cast<unsigned>(std::stoul(f.substr(1)));
  return index >= 1;
}

unsigned common_order_of(const AffinePoint& a, const AffinePoint& b) {
  return CyclotomicElement::common_order(a.order(), b.order());
}

AffinePoint coordinatewise(const AffinePoint& a, const AffinePoint& b, bool multiply) {
  const unsigned o = common_order_of(a, b);
  const AffinePoint x = a.promote(o), y = b.promote(o);
  std::vector<CyclotomicElement> c;
  for (std::size_t i = 0; i < x.dimension(); ++i) c.push_back(multiply ? x.coords[i] * y.coords[i] : x.coords[i] + y.coords[i]);
  return AffinePoint(std::move(c));
}

bool is_zero_point(const AffinePoint& p) {
  return std::all_of(p.coords.begin(), p.coords.end(), [](const CyclotomicElement& c) { return c.is_zero(); });
}

bool in_torus(const AffinePoint& p) {
  return std::none_of(p.coords.begin(), p.coords.end(), [](const CyclotomicElement& c) { return c.is_zero(); });
}

}  // namespace

SplitMultilinearForm parse_split_form(const std::string& text, unsigned dimension, unsigned order) {
  // Terms are split at top-level + and - that follow an operand.
  std::vector<std::pair<bool, std::string>> terms;
  std::string cur;
  bool negative = false;
  int depth = 0;
  auto flush = [&] {
    if (trim(cur).empty()) throw parse_error("empty term in split form", 1, 1);
    terms.emplace_back(negative, trim(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      const std::string t = trim(cur);
      if (t.empty() || t.back() == '*' || t.back() == '/' || t.back() == '^') {
        if (t.empty() && ch == '-') negative = !negative;
        if (!t.empty()) cur += ch;
        continue;
      }
      flush();
      negative = ch == '-';
      continue;
    }
    cur += ch;
  }
  flush();

  SplitMultilinearForm form;
  const CyclotomicElement one(BigRational(1), order);
  for (const auto& [neg, body] : terms) {
    std::vector<CyclotomicElement> unit(dimension, neg ? -one : one);
    AffinePoint coeff(unit);
    std::vector<unsigned> block;
    for (const auto& raw : split_top(body, '*')) {
      const std::string f = trim(raw);
      unsigned idx = 0;
      if (variable_index(f, idx)) {
        block.push_back(idx - 1);
        form.arity = std::max(form.arity, idx);
      } else if (f.size() > 2 && f.front() == '(' && f.back() == ')' && split_top(f.substr(1, f.size() - 2), ',').size() > 1) {
        coeff = coordinatewise(coeff, parse_point(f.substr(1, f.size() - 2), dimension, order), true);
      } else {
        const CyclotomicElement c = parse_constant(f, order);
        coeff = coordinatewise(coeff, AffinePoint(std::vector<CyclotomicElement>(dimension, c)), true);
      }
    }
    if (block.empty()) throw parse_error("split form term without a variable: " + body, 1, 1);
    std::sort(block.begin(), block.end());
    form.blocks.push_back(std::move(block));
    form.coeffs.push_back(std::move(coeff));
  }
  form.validate(dimension);
  return form;
}

AffinePoint split_form_eval(const SplitMultilinearForm& form, const std::vector<AffinePoint>& args) {
  if (args.size() != form.arity) throw domain_error("split form expects " + std::to_string(form.arity) + " arguments");
  const unsigned dim = static_cast<unsigned>(args[0].dimension());
  form.validate(dim);
  for (const auto& a : args) {
    if (a.dimension() != dim) throw domain_error("split form arguments must share the dimension");
  }
  AffinePoint sum(std::vector<CyclotomicElement>(dim, CyclotomicElement(BigRational(0), args[0].order())));
  for (std::size_t i = 0; i < form.blocks.size(); ++i) {
    AffinePoint term = form.coeffs[i];
    for (unsigned j : form.blocks[i]) term = coordinatewise(term, args[j], true);
    sum = coordinatewise(sum, term, false);
  }
  return sum;
}

namespace {

// All strictly decreasing tuples top = n_1 > n_2 > ... > n_k >= 0.
void decreasing_tuples(unsigned top, unsigned k, std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> cur{top};
  std::function<void()> rec = [&] {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    const unsigned need = k - static_cast<unsigned>(cur.size());
    for (unsigned v = cur.back(); v-- > 0;) {
      if (v + 1 < need) break;
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  if (top + 1 >= k) rec();
}

struct PointResult {
  std::vector<SplitHit> hits;
  bool truncated = false;
  std::string cap_hit;
};

}  // namespace

SplitReport split_form_zero_search(const SemigroupSystem& sys, const SplitMultilinearForm& form,
                                   const CandidateBox& box, unsigned n_cap, SplitMode mode, std::size_t max_words,
                                   std::size_t max_candidates) {
  const unsigned N = sys.dimension();
  const mpfr_prec_t prec = sys.precision();
  form.validate(N);
  SplitReport out;
  if (mode == SplitMode::single_sequence) {
    for (std::size_t i = 0; i < sys.size(); ++i) {
      if (sys.degree(i) <= N) {
        throw hypothesis_error("d_i > N fails: " + sys.name(i) + " has degree " + std::to_string(sys.degree(i)) +
                               " and N = " + std::to_string(N));
      }
    }
    out.hypothesis = "d_i > N (min degree " + std::to_string(sys.min_degree()) + ", N = " + std::to_string(N) + ")";
  } else {
    const auto d = sys.common_degree();
    if (!d) throw hypothesis_error("d >= (3N+2)/2 needs a common degree; the generators differ");
    if (2 * *d < 3 * N + 2) {
      throw hypothesis_error("d >= (3N+2)/2 fails: d = " + std::to_string(*d) + ", N = " + std::to_string(N));
    }
    out.hypothesis = "d >= (3N+2)/2 (d = " + std::to_string(*d) + ", N = " + std::to_string(N) + ")";
  }

  const Interval c = c_bound(sys).value;
  Interval hsum(prec);
  for (const auto& ci : form.coeffs) hsum += weil_height(ci, prec).enclosure();
  const std::size_t r = form.blocks.size();
  const Interval logr = Interval(BigInt(static_cast<unsigned long>(std::max<std::size_t>(1, r - 1))), prec).log();
  out.bound = hsum.times(BigRational(N)) + logr + c.times(BigRational(2UL * (1 + N * form.arity)));

  std::vector<AffinePoint> pts;
  for (auto& p : box.enumerate(max_candidates)) {
    if (in_torus(p)) pts.push_back(sys.normalize(p));
  }
  out.candidates = pts.size();
  const std::size_t s = sys.size();
  const unsigned k = form.arity;

  // Single mode uses every word of length depth; the depth is cut so the word count fits.
  unsigned depth = n_cap;
  std::string word_cap;
  if (mode == SplitMode::single_sequence) {
    BigInt words = 1;
    unsigned ok = 0;
    for (unsigned L = 1; L <= n_cap; ++L) {
      words *= static_cast<unsigned long>(s);
      if (words > BigInt(static_cast<unsigned long>(max_words))) break;
      ok = L;
    }
    if (ok < n_cap) {
      depth = ok;
      word_cap = "word count exceeds " + std::to_string(max_words) + " beyond depth " + std::to_string(ok);
    }
  }
  const OrbitCaps caps;
  std::vector<std::vector<std::vector<unsigned>>> tuples(depth + 1);
  for (unsigned L = 0; L <= depth; ++L) decreasing_tuples(L, k, tuples[L]);

  std::vector<PointResult> results(pts.size());
  parallel_for(pts.size(), [&](std::size_t t) {
    PointResult& res = results[t];
    const AffinePoint& P = pts[t];
    auto hit = [&](std::vector<Word> words, std::vector<unsigned> ns) {
      SplitHit h;
      h.point = P;
      h.words = std::move(words);
      h.ns = std::move(ns);
      h.height = weil_height(P, prec);
      h.within_bound = !out.bound.certainly_less(h.height.enclosure());
      res.hits.push_back(std::move(h));
    };
    if (mode == SplitMode::single_sequence) {
      std::vector<AffinePoint> vals{P};
      Word w;
      std::function<void()> dfs = [&] {
        const unsigned L = static_cast<unsigned>(w.size());
        for (const auto& tup : tuples[L]) {
          std::vector<AffinePoint> args;
          for (unsigned n : tup) args.push_back(vals[n]);
          if (is_zero_point(split_form_eval(form, args))) hit({w}, tup);
        }
        if (L == depth) return;
        for (std::size_t j = 0; j < s; ++j) {
          AffinePoint next = sys.apply(j, vals.back());
          if (point_bit_size(next) > caps.max_point_bits) {
            res.truncated = true;
            res.cap_hit = "point size exceeds " + std::to_string(caps.max_point_bits) + " bits";
            continue;
          }
          vals.push_back(std::move(next));
          w.push_back(static_cast<unsigned>(j));
          dfs();
          w.pop_back();
          vals.pop_back();
        }
      };
      dfs();
      return;
    }
    const auto lv = orbit_levels(sys, P, depth, caps);
    if (lv.truncated) {
      res.truncated = true;
      res.cap_hit = lv.cap_hit;
    }
    std::size_t combos = 0;
    for (unsigned L = 0; L < lv.levels.size(); ++L) {
      for (const auto& tup : tuples[L]) {
        std::vector<std::size_t> idx(k, 0);
        for (;;) {
          if (++combos > max_words) {
            res.truncated = true;
            res.cap_hit = "argument combinations exceed " + std::to_string(max_words);
            return;
          }
          std::vector<AffinePoint> args;
          std::vector<Word> words;
          for (unsigned a = 0; a < k; ++a) {
            const auto& e = lv.levels[tup[a]][idx[a]];
            args.push_back(e.point);
            words.push_back(e.witness);
          }
          if (is_zero_point(split_form_eval(form, args))) hit(std::move(words), tup);
          unsigned a = 0;
          while (a < k && ++idx[a] == lv.levels[tup[a]].size()) idx[a++] = 0;
          if (a == k) break;
        }
      }
    }
  });
  if (!word_cap.empty()) {
    out.truncated = true;
    out.cap_hit = word_cap;
  }
  for (auto& r : results) {
    if (r.truncated) {
      out.truncated = true;
      if (out.cap_hit.empty()) out.cap_hit = r.cap_hit;
    }
    for (auto& h : r.hits) out.hits.push_back(std::move(h));
  }
  return out;
}

}  // namespace arithdyn

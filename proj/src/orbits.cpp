#include "arithdyn/orbits.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "arithdyn/errors.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

std::string word_to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(w[i] + 1);
  }
  return out;
}

struct SemigroupSystem::State {
  struct Lazy {
    std::once_flag once;
    std::optional<Certificate> cert;
    std::optional<EffectiveConstants> constants;
  };

  std::vector<AffineMorphism> generators;
  std::vector<std::string> names;
  unsigned order = 1;
  unsigned e_max = 0;
  mpfr_prec_t precision = default_precision;
  std::vector<ProjectiveLift> lifts;
  std::vector<unsigned> units;
  std::vector<std::unique_ptr<Lazy>> lazy;

  Lazy& ensure(std::size_t i) {
    Lazy& z = *lazy.at(i);
    std::call_once(z.once, [&] {
      const unsigned cap = e_max ? std::max(e_max, lifts[i].degree) : default_e_max(lifts[i]);
      auto c = find_certificate(lifts[i], cap);
      if (!c) {
        throw hypothesis_error("lift of " + names[i] + " has no certificate up to e = " + std::to_string(cap) +
                               " (common zero suspected)");
      }
      z.constants = effective_constants(lifts[i], *c, precision);
      z.cert = std::move(c);
    });
    return z;
  }
};

SemigroupSystem::SemigroupSystem(std::vector<AffineMorphism> generators, unsigned order,
                                 std::vector<std::string> names, unsigned e_max, mpfr_prec_t precision)
    : state_(std::make_shared<State>()) {
  if (generators.empty()) throw domain_error("a system needs at least one generator");
  if (!names.empty() && names.size() != generators.size()) throw domain_error("one name per generator");
  const unsigned n = generators[0].dimension();
  auto& st = *state_;
  st.order = order;
  st.e_max = e_max;
  st.precision = precision;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    if (g.dimension() != n) throw domain_error("generators must share the dimension");
    if (g.degree() < 2) throw domain_error("generator degrees must be at least 2");
    st.generators.push_back(g.promote(order));
    st.names.push_back(names.empty() ? "f" + std::to_string(i + 1) : names[i]);
    st.lifts.push_back(arithdyn::lift(st.generators.back()));
    st.lazy.push_back(std::make_unique<State::Lazy>());
  }
  st.units = CyclotomicField::get(order)->units();
}

std::size_t SemigroupSystem::size() const { return state_->generators.size(); }
unsigned SemigroupSystem::dimension() const { return state_->generators[0].dimension(); }
unsigned SemigroupSystem::order() const { return state_->order; }
mpfr_prec_t SemigroupSystem::precision() const { return state_->precision; }
const AffineMorphism& SemigroupSystem::generator(std::size_t i) const { return state_->generators.at(i); }
const std::vector<AffineMorphism>& SemigroupSystem::generators() const { return state_->generators; }
const std::string& SemigroupSystem::name(std::size_t i) const { return state_->names.at(i); }
unsigned SemigroupSystem::degree(std::size_t i) const { return state_->generators.at(i).degree(); }
const ProjectiveLift& SemigroupSystem::lift(std::size_t i) const { return state_->lifts.at(i); }
const std::vector<unsigned>& SemigroupSystem::units() const { return state_->units; }

std::optional<unsigned> SemigroupSystem::common_degree() const {
  const unsigned d = degree(0);
  for (std::size_t i = 1; i < size(); ++i) {
    if (degree(i) != d) return std::nullopt;
  }
  return d;
}

unsigned SemigroupSystem::degree_sum() const {
  unsigned s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += degree(i);
  return s;
}

unsigned SemigroupSystem::min_degree() const {
  unsigned m = degree(0);
  for (std::size_t i = 1; i < size(); ++i) m = std::min(m, degree(i));
  return m;
}

bool SemigroupSystem::is_rational() const {
  for (const auto& g : state_->generators) {
    for (const auto& c : g.components()) {
      for (const auto& [e, a] : c.terms()) {
        if (!a.is_rational()) return false;
      }
    }
  }
  return true;
}

const Certificate& SemigroupSystem::certificate(std::size_t i) const { return *state_->ensure(i).cert; }

const EffectiveConstants& SemigroupSystem::constants(std::size_t i) const { return *state_->ensure(i).constants; }

BigRational SemigroupSystem::C() const {
  BigRational c = constants(0).C;
  for (std::size_t i = 1; i < size(); ++i) c = std::min(c, constants(i).C);
  return c;
}

BigRational SemigroupSystem::D() const {
  BigRational d = constants(0).D;
  for (std::size_t i = 1; i < size(); ++i) d = std::max(d, constants(i).D);
  return d;
}

Interval SemigroupSystem::g_norm(std::size_t idx) const {
  Interval m = constants(0).g_norm.at(idx);
  for (std::size_t i = 1; i < size(); ++i) m = Interval::max(m, constants(i).g_norm.at(idx));
  return m;
}

Interval SemigroupSystem::f_norm(std::size_t idx) const {
  Interval m = constants(0).f_norm.at(idx);
  for (std::size_t i = 1; i < size(); ++i) m = Interval::max(m, constants(i).f_norm.at(idx));
  return m;
}

AffinePoint SemigroupSystem::normalize(const AffinePoint& p) const {
  if (p.dimension() != dimension()) {
    throw domain_error("point has dimension " + std::to_string(p.dimension()) + ", system has " +
                       std::to_string(dimension()));
  }
  return p.promote(order());
}

AffinePoint SemigroupSystem::apply(std::size_t i, const AffinePoint& p) const {
  return generator(i).evaluate(p).promote(order());
}

AffinePoint SemigroupSystem::apply(const Word& w, const AffinePoint& p) const {
  AffinePoint x = normalize(p);
  for (unsigned i : w) {
    if (i >= size()) throw domain_error("word index out of range");
    x = apply(i, x);
  }
  return x;
}

std::size_t point_bit_size(const AffinePoint& p) {
  std::size_t bits = 0;
  for (const auto& c : p.coords) {
    for (const auto& q : c.coeffs()) {
      bits += mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
    }
  }
  return bits;
}

std::optional<std::size_t> OrbitLevels::find(std::size_t k, const AffinePoint& p) const {
  if (k >= levels.size()) return std::nullopt;
  const auto& lv = levels[k];
  auto it = std::lower_bound(lv.begin(), lv.end(), p,
                             [](const OrbitEntry& e, const AffinePoint& q) { return compare(e.point, q) < 0; });
  if (it == lv.end() || it->point != p) return std::nullopt;
  return static_cast<std::size_t>(it - lv.begin());
}

namespace {

// Images of a level under every generator, deduplicated and sorted.
// Returns nullopt when a cap is hit, with the reason in cap_hit.
std::optional<std::vector<OrbitEntry>> next_level(const SemigroupSystem& sys, const std::vector<OrbitEntry>& cur,
                                                  const OrbitCaps& caps, std::string& cap_hit) {
  const std::size_t s = sys.size();
  std::vector<AffinePoint> images(cur.size() * s);
  parallel_for(images.size(), [&](std::size_t t) { images[t] = sys.apply(t % s, cur[t / s].point); });
  std::unordered_map<AffinePoint, std::size_t, PointHash> index;
  std::vector<OrbitEntry> out;
  for (std::size_t t = 0; t < images.size(); ++t) {
    const OrbitEntry& parent = cur[t / s];
    auto it = index.find(images[t]);
    if (it != index.end()) {
      out[it->second].multiplicity += parent.multiplicity;
      continue;
    }
    if (out.size() >= caps.max_level_size) {
      cap_hit = "level size exceeds " + std::to_string(caps.max_level_size);
      return std::nullopt;
    }
    if (point_bit_size(images[t]) > caps.max_point_bits) {
      cap_hit = "point size exceeds " + std::to_string(caps.max_point_bits) + " bits";
      return std::nullopt;
    }
    index.emplace(images[t], out.size());
    Word w = parent.witness;
    w.push_back(static_cast<unsigned>(t % s));
    out.push_back({std::move(images[t]), std::move(w), parent.multiplicity});
  }
  std::sort(out.begin(), out.end(), [](const OrbitEntry& a, const OrbitEntry& b) { return compare(a.point, b.point) < 0; });
  return out;
}

AffinePoint zero_point(unsigned dim, unsigned order) {
  return AffinePoint(std::vector<CyclotomicElement>(dim, CyclotomicElement(BigRational(0), order)));
}

AffinePoint add(const AffinePoint& a, const AffinePoint& b) {
  std::vector<CyclotomicElement> c;
  for (std::size_t i = 0; i < a.dimension(); ++i) c.push_back(a.coords[i] + b.coords[i]);
  return AffinePoint(std::move(c));
}

AffinePoint hadamard(const AffinePoint& a, const AffinePoint& b) {
  std::vector<CyclotomicElement> c;
  for (std::size_t i = 0; i < a.dimension(); ++i) c.push_back(a.coords[i] * b.coords[i]);
  return AffinePoint(std::move(c));
}

AffinePoint scaled(const AffinePoint& a, const BigInt& k) {
  std::vector<CyclotomicElement> c;
  const CyclotomicElement f(k);
  for (const auto& x : a.coords) c.push_back(x * f);
  return AffinePoint(std::move(c));
}

BigRational rational_pow(const BigRational& a, const BigInt& e) {
  if (!e.fits_ulong_p()) throw cap_exceeded("exponent too large");
  BigRational r;
  mpz_pow_ui(r.get_num_mpz_t(), a.get_num_mpz_t(), e.get_ui());
  mpz_pow_ui(r.get_den_mpz_t(), a.get_den_mpz_t(), e.get_ui());
  return r;
}

}  // namespace

OrbitLevels orbit_levels(const SemigroupSystem& sys, const AffinePoint& p, unsigned depth, const OrbitCaps& caps) {
  OrbitLevels out;
  out.levels.push_back({OrbitEntry{sys.normalize(p), {}, BigInt(1)}});
  for (unsigned k = 1; k <= depth; ++k) {
    auto next = next_level(sys, out.levels.back(), caps, out.cap_hit);
    if (!next) {
      out.truncated = true;
      break;
    }
    out.levels.push_back(std::move(*next));
  }
  return out;
}

CollisionReport collision_search(const SemigroupSystem& sys, const AffinePoint& p, unsigned n_max,
                                 const OrbitCaps& caps) {
  if (n_max < 1) throw domain_error("n_max must be at least 1");
  const auto lv = orbit_levels(sys, p, n_max, caps);
  CollisionReport out;
  out.truncated = lv.truncated;
  out.cap_hit = lv.cap_hit;
  out.levels_computed = static_cast<unsigned>(lv.levels.size() - 1);
  for (unsigned n = 1; n < lv.levels.size(); ++n) {
    for (unsigned m = n + 1; m < lv.levels.size(); ++m) {
      for (const auto& e : lv.levels[n]) {
        if (auto j = lv.find(m, e.point)) {
          out.collisions.push_back({n, m, e.point, e.witness, lv.levels[m][*j].witness});
          break;
        }
      }
    }
  }
  return out;
}

PiReport pi_membership(const SemigroupSystem& sys, const AffinePoint& p, unsigned k_max, unsigned l_max,
                       const OrbitCaps& caps) {
  PiReport out;
  out.k_max = k_max;
  out.l_max = l_max;
  const auto path = orbit_levels(sys, p, k_max, caps);
  if (path.truncated) {
    out.truncated = true;
    out.cap_hit = path.cap_hit;
  }
  for (unsigned k = 0; k < path.levels.size(); ++k) {
    for (const auto& q : path.levels[k]) {
      std::vector<OrbitEntry> cur{OrbitEntry{q.point, {}, BigInt(1)}};
      for (unsigned l = 1; l <= l_max; ++l) {
        std::string hit;
        auto next = next_level(sys, cur, caps, hit);
        if (!next) {
          out.truncated = true;
          if (out.cap_hit.empty()) out.cap_hit = hit;
          break;
        }
        cur = std::move(*next);
        auto it = std::lower_bound(cur.begin(), cur.end(), q.point, [](const OrbitEntry& e, const AffinePoint& x) {
          return compare(e.point, x) < 0;
        });
        if (it != cur.end() && it->point == q.point) {
          out.witness = PiWitness{k, l, q.witness, it->witness, q.point};
          return out;
        }
      }
    }
  }
  return out;
}

GrowthReport growth_check(const SemigroupSystem& sys, const AffinePoint& p, const RationalPlace& v, const Word& word) {
  if (!sys.is_rational()) throw domain_error("growth_check needs rational coefficients");
  AffinePoint x = sys.normalize(p);
  if (!x.is_rational()) throw domain_error("growth_check needs a rational point");
  for (unsigned i : word) {
    if (i >= sys.size()) throw domain_error("word index out of range");
  }
  auto abs_max = [&](const AffinePoint& q) {
    std::vector<BigRational> r;
    for (const auto& c : q.coords) r.push_back(c.rational_value());
    return rational_abs_max(r, v);
  };
  GrowthReport out;
  BigRational g = 0;
  for (std::size_t i = 0; i < sys.size(); ++i) g = std::max(g, rational_poly_norm(sys.certificate(i).flattened(), v));
  if (v.is_archimedean()) g /= sys.C();
  out.threshold = std::max(BigRational(1), g);
  out.values.push_back(abs_max(x));
  for (unsigned i : word) {
    x = sys.apply(i, x);
    out.values.push_back(abs_max(x));
  }
  out.precondition_met = out.values[0] > out.threshold;
  out.strictly_increasing = true;
  for (std::size_t j = 1; j < out.values.size(); ++j) {
    if (!(out.values[j] > out.values[j - 1])) out.strictly_increasing = false;
  }
  return out;
}

Interval house_bound_L(const SemigroupSystem& sys, const BigRational& A) {
  if (sgn(A) < 0) throw domain_error("A must be non-negative");
  const mpfr_prec_t prec = sys.precision();
  const BigRational inv_c = 1 / sys.C();
  Interval L(A, prec);
  L = Interval::max(L, Interval(BigRational(1), prec));
  for (std::size_t idx = 0; idx < sys.units().size(); ++idx) L = Interval::max(L, sys.g_norm(idx).times(inv_c));
  return L;
}

HouseBoundM house_bound_M(const SemigroupSystem& sys, const BigRational& A) {
  const auto d = sys.common_degree();
  if (!d) throw hypothesis_error("the bound M needs a common degree for all generators");
  if (*d < 3) throw hypothesis_error("the bound M needs common degree d >= 3, got d = " + std::to_string(*d));
  if (A < 1) throw domain_error("A must be at least 1");
  const mpfr_prec_t prec = sys.precision();
  HouseBoundM out;
  out.d = *d;
  out.s = sys.size();
  out.C = sys.C();
  out.D = sys.D();
  // m is the least integer above max |sigma(G_i)| / C, using the upper endpoint.
  const BigRational inv_c = 1 / out.C;
  Interval ratio(prec);
  for (std::size_t idx = 0; idx < sys.units().size(); ++idx) {
    ratio = Interval::max(ratio, sys.g_norm(idx).times(inv_c));
  }
  mpfr_get_z(out.m.get_mpz_t(), ratio.upper_bound().get(), MPFR_RNDD);
  out.m += 1;
  const BigRational first = 2 * BigRational(static_cast<unsigned long>(out.s)) * BigRational(out.m * out.m) * A;
  Interval M(prec);
  for (std::size_t idx = 0; idx < sys.units().size(); ++idx) {
    M = Interval::max(M, Interval(first, prec) + sys.f_norm(idx).times(out.D));
  }
  out.M = M;
  return out;
}

BigInt integrality_scaler(const SemigroupSystem& sys) {
  std::vector<MultiPoly> polys;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& l = sys.lift(i);
    polys.insert(polys.end(), l.components.begin(), l.components.end());
    const auto g = sys.certificate(i).flattened();
    polys.insert(polys.end(), g.begin(), g.end());
  }
  return integrality_scaler(polys);
}

CandidateBox CandidateBox::rational(unsigned dimension, long num_bound, long den_bound) {
  if (dimension == 0 || num_bound < 0 || den_bound < 1) throw domain_error("invalid rational box");
  CandidateBox b;
  b.kind_ = Kind::rational;
  b.dimension_ = dimension;
  b.num_bound_ = num_bound;
  b.den_bound_ = den_bound;
  return b;
}

CandidateBox CandidateBox::cyclotomic_integers(unsigned dimension, unsigned order, long coeff_bound) {
  if (dimension == 0 || coeff_bound < 0) throw domain_error("invalid cyclotomic box");
  CandidateBox b;
  b.kind_ = Kind::cyclotomic_integer;
  b.dimension_ = dimension;
  b.order_ = order;
  b.coeff_bound_ = coeff_bound;
  CyclotomicField::get(order);
  return b;
}

std::vector<CyclotomicElement> CandidateBox::coordinate_values() const {
  std::vector<CyclotomicElement> out;
  if (kind_ == Kind::rational) {
    std::vector<BigRational> q;
    for (long b = 1; b <= den_bound_; ++b) {
      for (long a = -num_bound_; a <= num_bound_; ++a) {
        if (std::gcd(a < 0 ? -a : a, b) != 1) continue;
        q.emplace_back(a, b);
      }
    }
    for (auto& x : q) x.canonicalize();
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    for (const auto& x : q) out.emplace_back(x);
    return out;
  }
  const unsigned phi = CyclotomicField::get(order_)->degree();
  const long width = 2 * coeff_bound_ + 1;
  std::vector<long> digits(phi, 0);
  for (;;) {
    std::vector<BigRational> c;
    for (long x : digits) c.emplace_back(x - coeff_bound_);
    out.emplace_back(order_, std::move(c));
    unsigned i = phi;
    while (i > 0 && ++digits[i - 1] == width) digits[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

BigInt CandidateBox::size() const {
  BigInt per;
  if (kind_ == Kind::rational) {
    per = static_cast<unsigned long>(coordinate_values().size());
  } else {
    mpz_ui_pow_ui(per.get_mpz_t(), static_cast<unsigned long>(2 * coeff_bound_ + 1),
                  CyclotomicField::get(order_)->degree());
  }
  BigInt total;
  mpz_pow_ui(total.get_mpz_t(), per.get_mpz_t(), dimension_);
  return total;
}

std::vector<AffinePoint> CandidateBox::enumerate(std::size_t cap) const {
  if (size() > BigInt(static_cast<unsigned long>(cap))) {
    throw cap_exceeded("box has " + size().get_str() + " points, cap is " + std::to_string(cap));
  }
  const auto values = coordinate_values();
  std::vector<AffinePoint> out;
  std::vector<std::size_t> idx(dimension_, 0);
  for (;;) {
    std::vector<CyclotomicElement> c;
    for (std::size_t i : idx) c.push_back(values[i]);
    out.emplace_back(std::move(c));
    unsigned i = dimension_;
    while (i > 0 && ++idx[i - 1] == values.size()) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

namespace {

struct WordValue {
  Word word;
  AffinePoint value;
};

struct SumNode {
  AffinePoint sum;
  std::size_t prev;
  std::size_t gamma;
};

struct CandidateResult {
  std::optional<SigmaHit> hit;
  std::string cap_hit;
};

CandidateResult search_candidate(const SemigroupSystem& sys, const AffinePoint& p, unsigned d, const BigRational& A,
                                 const std::vector<AffinePoint>& gammas, const std::vector<Interval>& gamma_house,
                                 const SigmaOptions& opt) {
  CandidateResult res;
  const std::size_t s = sys.size();
  std::vector<std::vector<WordValue>> by_length{{WordValue{{}, p}}};
  std::size_t words = 1;
  for (unsigned n = 1; n <= opt.n_max; ++n) {
    const auto& prev = by_length.back();
    if (words + prev.size() * s > opt.max_words) {
      res.cap_hit = "word count exceeds " + std::to_string(opt.max_words);
      return res;
    }
    std::vector<WordValue> cur;
    for (const auto& wv : prev) {
      for (unsigned i = 0; i < s; ++i) {
        WordValue next{wv.word, sys.apply(i, wv.value)};
        next.word.push_back(i);
        if (point_bit_size(next.value) > opt.caps.max_point_bits) {
          res.cap_hit = "point size exceeds " + std::to_string(opt.caps.max_point_bits) + " bits";
          return res;
        }
        cur.push_back(std::move(next));
      }
    }
    words += cur.size();

    // Coefficients allowed at this level: house at most A^{d^{n-1}}.
    BigInt e;
    mpz_ui_pow_ui(e.get_mpz_t(), d, n - 1);
    const Interval limit(rational_pow(A, e), sys.precision());
    std::vector<std::size_t> usable;
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      if (!limit.certainly_less(gamma_house[g])) usable.push_back(g);
    }
    std::vector<const WordValue*> shorter;
    for (const auto& lv : by_length) {
      for (const auto& wv : lv) shorter.push_back(&wv);
    }
    by_length.push_back(std::move(cur));
    if (usable.empty()) continue;
    const auto& targets = by_length.back();

    auto make_hit = [&](const WordValue& target, std::vector<std::size_t> choice) {
      SigmaHit h{p, n, target.word, {}, HeightEstimate(Interval(sys.precision())), true, true};
      for (std::size_t t = 0; t < shorter.size(); ++t) h.gammas.emplace_back(shorter[t]->word, choice[t]);
      return h;
    };

    if (opt.mode == GammaMode::constant) {
      AffinePoint total = zero_point(sys.dimension(), sys.order());
      for (const auto* wv : shorter) total = add(total, wv->value);
      for (std::size_t g : usable) {
        const AffinePoint value = hadamard(gammas[g], total);
        for (const auto& t : targets) {
          if (t.value == value) {
            res.hit = make_hit(t, std::vector<std::size_t>(shorter.size(), g));
            return res;
          }
        }
      }
      continue;
    }

    // Layered sumset with back pointers; layer t holds the sums over the first t words.
    std::vector<std::vector<SumNode>> layers{{SumNode{zero_point(sys.dimension(), sys.order()), 0, 0}}};
    std::size_t stored = 1;
    bool overflow = false;
    for (const auto* wv : shorter) {
      std::unordered_map<AffinePoint, std::size_t, PointHash> seen;
      std::vector<SumNode> next;
      const auto& last = layers.back();
      for (std::size_t j = 0; j < last.size() && !overflow; ++j) {
        for (std::size_t g : usable) {
          AffinePoint sum = add(last[j].sum, hadamard(gammas[g], wv->value));
          if (seen.count(sum)) continue;
          if (++stored > opt.max_sums) {
            overflow = true;
            break;
          }
          seen.emplace(sum, next.size());
          next.push_back(SumNode{std::move(sum), j, g});
        }
      }
      if (overflow) break;
      layers.push_back(std::move(next));
    }
    if (overflow) {
      res.cap_hit = "gamma combinations exceed " + std::to_string(opt.max_sums);
      return res;
    }
    std::unordered_map<AffinePoint, std::size_t, PointHash> final_sums;
    for (std::size_t j = 0; j < layers.back().size(); ++j) final_sums.emplace(layers.back()[j].sum, j);
    for (const auto& t : targets) {
      auto it = final_sums.find(t.value);
      if (it == final_sums.end()) continue;
      std::vector<std::size_t> choice(shorter.size());
      std::size_t j = it->second;
      for (std::size_t layer = layers.size() - 1; layer > 0; --layer) {
        choice[layer - 1] = layers[layer][j].gamma;
        j = layers[layer][j].prev;
      }
      res.hit = make_hit(t, std::move(choice));
      return res;
    }
  }
  return res;
}

}  // namespace

SigmaReport sigma_A_search(const SemigroupSystem& sys, const BigRational& A, const std::vector<AffinePoint>& gamma_set,
                           const CandidateBox& box, const SigmaOptions& options) {
  const auto d = sys.common_degree();
  if (!d) throw hypothesis_error("the Sigma_A search needs a common degree for all generators");
  if (A < 1) throw domain_error("A must be at least 1");
  if (box.dimension() != sys.dimension()) throw domain_error("box dimension does not match the system");
  std::vector<AffinePoint> gammas;
  std::vector<Interval> gamma_house;
  for (const auto& g : gamma_set) {
    gammas.push_back(sys.normalize(g));
    if (!gammas.back().is_integral()) {
      throw hypothesis_error("gamma " + g.to_string() + " does not have algebraic integer coordinates");
    }
    gamma_house.push_back(house(gammas.back(), sys.precision()).enclosure());
  }

  SigmaReport out;
  out.empirical_max_house = Interval(sys.precision());
  out.E = integrality_scaler(sys);
  if (*d >= 3) out.bound = house_bound_M(sys, A);
  std::vector<AffinePoint> points;
  for (const auto& q : box.enumerate(options.max_candidates)) points.push_back(sys.normalize(q));
  out.candidates = points.size();
  if (gammas.empty()) return out;

  std::vector<CandidateResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    results[i] = search_candidate(sys, points[i], *d, A, gammas, gamma_house, options);
  });
  for (auto& r : results) {
    if (!r.cap_hit.empty()) {
      out.truncated = true;
      if (out.cap_hit.empty()) out.cap_hit = r.cap_hit;
    }
    if (!r.hit) continue;
    SigmaHit& h = *r.hit;
    h.house = house(h.point, sys.precision());
    if (out.bound) h.house_ok = !out.bound->M.certainly_less(h.house.enclosure());
    h.integral_ok = scaled(h.point, out.E).is_integral();
    out.empirical_max_house = Interval::max(out.empirical_max_house, h.house.enclosure());
    out.hits.push_back(std::move(h));
  }
  std::sort(out.hits.begin(), out.hits.end(),
            [](const SigmaHit& a, const SigmaHit& b) { return compare(a.point, b.point) < 0; });
  return out;
}

}  // namespace arithdyn

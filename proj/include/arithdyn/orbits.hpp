#pragma once

// Semigroup orbits, preperiodicity and collision searches, the growth
// checks above the size threshold, the house bounds L and M, and the Sigma_A
// search.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/nullstellensatz.hpp"
#include "arithdyn/point.hpp"
#include "arithdyn/polymaps.hpp"

namespace arithdyn {

/// Generator indices, 0-based; w[0] is applied first, so w = (i_1, ..., i_k)
/// stands for F_{i_k} o ... o F_{i_1}.
using Word = std::vector<unsigned>;

/// "1 2 1" style, 1-based.
std::string word_to_string(const Word& w);

class SemigroupSystem {
 public:
  /// Every generator is rewritten over Q(zeta_order). Names default to f1, f2, ...
  SemigroupSystem(std::vector<AffineMorphism> generators, unsigned order = 1,
                  std::vector<std::string> names = {}, unsigned e_max = 0,
                  mpfr_prec_t precision = default_precision);

  std::size_t size() const;
  unsigned dimension() const;
  unsigned order() const;
  mpfr_prec_t precision() const;
  const AffineMorphism& generator(std::size_t i) const;
  const std::vector<AffineMorphism>& generators() const;
  const std::string& name(std::size_t i) const;
  unsigned degree(std::size_t i) const;
  std::optional<unsigned> common_degree() const;
  unsigned degree_sum() const;
  unsigned min_degree() const;
  /// All coefficients lie in Q.
  bool is_rational() const;

  const ProjectiveLift& lift(std::size_t i) const;
  /// Computed on first use; throws hypothesis_error if the lift components
  /// have a common zero (no certificate up to e_max).
  const Certificate& certificate(std::size_t i) const;
  const EffectiveConstants& constants(std::size_t i) const;
  /// min_i C_i and max_i D_i.
  BigRational C() const;
  BigRational D() const;
  /// max_i |sigma_k(G_i)| and max_i |sigma_k(F~_i)| at the unit with index idx.
  Interval g_norm(std::size_t idx) const;
  Interval f_norm(std::size_t idx) const;
  const std::vector<unsigned>& units() const;

  /// P rewritten over the system field; throws domain_error on a dimension
  /// mismatch or a field the system does not contain.
  AffinePoint normalize(const AffinePoint& p) const;
  AffinePoint apply(std::size_t i, const AffinePoint& p) const;
  AffinePoint apply(const Word& w, const AffinePoint& p) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

struct OrbitCaps {
  std::size_t max_level_size = std::size_t{1} << 20;
  /// Bound on the total coefficient size of any one point.
  std::size_t max_point_bits = std::size_t{1} << 22;
};

/// Numerator plus denominator bits over all coordinates.
std::size_t point_bit_size(const AffinePoint& p);

struct OrbitEntry {
  AffinePoint point;
  /// First word in (parent order, generator index) order reaching the point.
  Word witness;
  /// Number of words of this length reaching the point.
  BigInt multiplicity;
};

struct OrbitLevels {
  /// levels[k] is F_k(P) in canonical point order.
  std::vector<std::vector<OrbitEntry>> levels;
  bool truncated = false;
  std::string cap_hit;

  /// Index of p in levels[k], if present.
  std::optional<std::size_t> find(std::size_t k, const AffinePoint& p) const;
};

OrbitLevels orbit_levels(const SemigroupSystem& sys, const AffinePoint& p, unsigned depth, const OrbitCaps& caps = {});

struct Collision {
  unsigned n = 0;
  unsigned m = 0;
  /// Least common point of levels n and m in canonical order.
  AffinePoint witness;
  Word word_n;
  Word word_m;
};

struct CollisionReport {
  std::vector<Collision> collisions;
  unsigned levels_computed = 0;
  bool truncated = false;
  std::string cap_hit;
};

/// Pairs 1 <= n < m <= n_max with F_n(P) and F_m(P) meeting.
CollisionReport collision_search(const SemigroupSystem& sys, const AffinePoint& p, unsigned n_max,
                                 const OrbitCaps& caps = {});

struct PiWitness {
  unsigned k = 0;
  unsigned l = 0;
  Word path;
  Word ret;
  /// The path point Q = path(P), which satisfies Q = ret(Q).
  AffinePoint point;
};

struct PiReport {
  std::optional<PiWitness> witness;
  unsigned k_max = 0;
  unsigned l_max = 0;
  bool truncated = false;
  std::string cap_hit;

  bool found() const { return witness.has_value(); }
};

/// Searches path points Q of length k <= k_max for Q in F_l(Q), 1 <= l <= l_max,
/// by increasing k, then canonical order of Q, then increasing l.
PiReport pi_membership(const SemigroupSystem& sys, const AffinePoint& p, unsigned k_max, unsigned l_max,
                       const OrbitCaps& caps = {});

struct GrowthReport {
  BigRational threshold;
  bool precondition_met = false;
  /// |P|_v, |F_{i_1}(P)|_v, |F_{i_2}(F_{i_1}(P))|_v, ...
  std::vector<BigRational> values;
  bool strictly_increasing = false;
};

/// Exact check over Q. The threshold is max(1, max_i |G_i|_v) at a prime and
/// max(1, C^{-1} max_i |G_i|) at infinity.
GrowthReport growth_check(const SemigroupSystem& sys, const AffinePoint& p, const RationalPlace& v, const Word& word);

/// L = max over embeddings of max(max_i max(1, C^{-1}|sigma(G_i)|), A).
Interval house_bound_L(const SemigroupSystem& sys, const BigRational& A);

struct HouseBoundM {
  unsigned d = 0;
  std::size_t s = 0;
  BigInt m;
  BigRational C;
  BigRational D;
  Interval M;
};

/// Requires a common degree d >= 3 (hypothesis_error otherwise) and A >= 1.
HouseBoundM house_bound_M(const SemigroupSystem& sys, const BigRational& A);

/// Least positive integer making every coefficient of every lift component
/// and every certificate polynomial integral.
BigInt integrality_scaler(const SemigroupSystem& sys);

class CandidateBox {
 public:
  enum class Kind { rational, cyclotomic_integer };

  /// Coordinates a/b with gcd(a, b) = 1, |a| <= num_bound, 1 <= b <= den_bound.
  static CandidateBox rational(unsigned dimension, long num_bound, long den_bound);
  /// Coordinates sum_j c_j z^j in the power basis of Q(zeta_order), |c_j| <= coeff_bound.
  static CandidateBox cyclotomic_integers(unsigned dimension, unsigned order, long coeff_bound);

  Kind kind() const { return kind_; }
  unsigned dimension() const { return dimension_; }
  unsigned order() const { return order_; }
  long num_bound() const { return num_bound_; }
  long den_bound() const { return den_bound_; }
  long coeff_bound() const { return coeff_bound_; }

  /// Values one coordinate ranges over, ascending for the rational kind.
  std::vector<CyclotomicElement> coordinate_values() const;
  BigInt size() const;
  /// All points, lexicographic in coordinate_values order; cap_exceeded if
  /// there are more than cap.
  std::vector<AffinePoint> enumerate(std::size_t cap) const;

 private:
  Kind kind_ = Kind::rational;
  unsigned dimension_ = 1;
  unsigned order_ = 1;
  long num_bound_ = 0;
  long den_bound_ = 1;
  long coeff_bound_ = 0;
};

enum class GammaMode {
  /// Every shorter word gets its own coefficient from the set.
  free,
  /// One coefficient from the set shared by all shorter words.
  constant,
};

struct SigmaOptions {
  unsigned n_max = 1;
  GammaMode mode = GammaMode::free;
  std::size_t max_words = std::size_t{1} << 12;
  std::size_t max_sums = std::size_t{1} << 16;
  std::size_t max_candidates = std::size_t{1} << 20;
  OrbitCaps caps;
};

struct SigmaHit {
  AffinePoint point;
  unsigned n = 0;
  /// Word of length n whose value is the combination.
  Word word;
  /// (shorter word, index into gamma_set) for every shorter word.
  std::vector<std::pair<Word, std::size_t>> gammas;
  HeightEstimate house;
  bool house_ok = true;
  bool integral_ok = true;
};

struct SigmaReport {
  std::vector<SigmaHit> hits;
  /// Absent when the common degree is below 3.
  std::optional<HouseBoundM> bound;
  BigInt E;
  std::size_t candidates = 0;
  bool truncated = false;
  std::string cap_hit;
  /// max house over hits (0 when there are none).
  Interval empirical_max_house;
};

/// Gammas are points of A^N acting coordinate by coordinate; each must be
/// integral (hypothesis_error otherwise). At level n only gammas with house at
/// most A^{d^{n-1}} are used.
SigmaReport sigma_A_search(const SemigroupSystem& sys, const BigRational& A, const std::vector<AffinePoint>& gamma_set,
                           const CandidateBox& box, const SigmaOptions& options = {});

}  // namespace arithdyn

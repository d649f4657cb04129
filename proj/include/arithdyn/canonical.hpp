#pragma once

// Canonical heights along single maps, sequences of maps and the whole
// semigroup, with enclosures that include the truncation error; height
// tests for preperiodicity; collision and split-form experiments.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/orbits.hpp"

namespace arithdyn {

struct CBound {
  /// c^(F_i) per generator and their maximum.
  std::vector<Interval> per_generator;
  Interval value;
};

/// c^(F) = (1/d) max(h(F~ coeffs) + log m_F, h(G coeffs) + log((N+1) m_G)),
/// so |h(F(P))/d - h(P)| <= c^(F) for every P.
Interval c_bound(const ProjectiveLift& lift, const Certificate& cert, mpfr_prec_t precision = default_precision);
CBound c_bound(const SemigroupSystem& sys);

/// A constant valid in place of c^ when choosing iteration depth: 0 when the
/// generator is a unitary monomial map (h(F(P)) = d h(P) exactly), c^ otherwise.
Interval certified_c(const SemigroupSystem& sys, std::size_t i);

/// Encloses h along a path x, F_{i_1}(x), F_{i_2}(F_{i_1}(x)), ... without
/// storing the exact iterates when the data allow it.
///
/// Over Q the primitive integral lift is followed through its residues modulo
/// a power of E (the gcd after each step divides E) and through an interval
/// copy rescaled by powers of two. Over Q(zeta_n) with integral certificates
/// the content ideal is exactly the d-th power of the previous one, so only
/// the embeddings are tracked. Otherwise the iterates are kept exactly.
class HeightTracker {
 public:
  enum class Mode { rational, cyclotomic, exact };
  /// Per-system data shared between trackers.
  struct Plan;

  static std::shared_ptr<const Plan> plan(const SemigroupSystem& sys);

  /// max_steps bounds the number of step() calls (it sizes the residue modulus).
  HeightTracker(const SemigroupSystem& sys, const AffinePoint& x, unsigned max_steps,
                std::size_t exact_bit_cap = std::size_t{1} << 22);
  HeightTracker(std::shared_ptr<const Plan> plan, const AffinePoint& x, unsigned max_steps,
                std::size_t exact_bit_cap = std::size_t{1} << 22, mpfr_prec_t precision = 0);

  Mode mode() const { return mode_; }
  unsigned steps() const { return static_cast<unsigned>(history_.size()); }
  /// Product of the degrees applied so far.
  const BigInt& degree_product() const { return degree_product_; }
  /// Throws cap_exceeded past max_steps or the exact bit cap.
  void step(unsigned generator);
  /// Enclosure of h of the current point; retries at higher precision when
  /// the interval copy has lost too much accuracy.
  Interval height() const;

 private:
  std::optional<Interval> try_height() const;

  std::shared_ptr<const Plan> plan_;
  Mode mode_ = Mode::exact;
  AffinePoint start_;
  Word history_;
  unsigned max_steps_;
  std::size_t bit_cap_;
  mpfr_prec_t precision_;
  BigInt degree_product_ = 1;
  // rational mode
  BigInt modulus_;
  std::vector<BigInt> residues_;
  std::vector<Interval> real_;
  std::int64_t shift_ = 0;
  // cyclotomic mode
  std::vector<std::vector<ComplexInterval>> complex_;
  std::vector<std::int64_t> shifts_;
  BigInt start_norm_;
  // exact mode
  AffinePoint exact_;
};

/// A source of generator indices: a repeated pattern, or i.i.d. draws with
/// probability d_j / (d_1 + ... + d_s).
class WordStream {
 public:
  static WordStream periodic(Word pattern);
  static WordStream random(const SemigroupSystem& sys, std::uint64_t seed);

  unsigned next();
  /// The first n indices, leaving the stream unchanged.
  Word prefix(std::size_t n) const;

 private:
  WordStream() = default;
  Word pattern_;
  std::vector<unsigned> weights_;
  std::mt19937_64 rng_;
  std::size_t pos_ = 0;
  bool random_ = false;
};

struct CanonicalEstimate {
  HeightEstimate estimate{Interval()};
  /// Depth used and the truncation bound included in the enclosure.
  unsigned depth = 0;
  Interval truncation;
  /// Enclosure of the truncated value alone.
  Interval computed;
  std::string tracker;
};

/// h(f^n(x))/d^n with n minimal so that the truncation bound is below tol.
CanonicalEstimate canonical_height_map(const SemigroupSystem& sys, std::size_t generator, const AffinePoint& x,
                                       double tol);
/// Along the sequence given by the stream.
CanonicalEstimate canonical_height_word(const SemigroupSystem& sys, WordStream words, const AffinePoint& x,
                                        double tol);

struct SemigroupOptions {
  enum class Mode { exact_sum, monte_carlo };
  Mode mode = Mode::exact_sum;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  /// Cap on tracked leaves in exact-sum mode.
  std::size_t max_words = std::size_t{1} << 16;
  OrbitCaps caps{4096, 1 << 16};
};

struct SemigroupEstimate {
  HeightEstimate estimate{Interval()};
  unsigned depth = 0;
  Interval truncation;
  /// Monte-carlo only: sample mean and its standard error.
  std::optional<double> mean;
  std::optional<double> standard_error;
  std::size_t words = 0;
};

/// exact-sum: (1/D^n) sum over words of length n of h(g_w(x)); throws
/// cap_exceeded beyond max_words. monte-carlo: mean over sampled sequences.
SemigroupEstimate canonical_height_semigroup(const SemigroupSystem& sys, const AffinePoint& x, double tol,
                                             const SemigroupOptions& options = {});

enum class Preperiodicity { preperiodic_confirmed, nonpreperiodic_certified, undecided };
std::string to_string(Preperiodicity p);

struct PreperiodicVerdict {
  Preperiodicity verdict = Preperiodicity::undecided;
  std::optional<HeightEstimate> estimate;
  /// Level at which the orbit closed, when it did.
  std::optional<unsigned> closed_at;
  PiReport pi;
  std::string note;
};

PreperiodicVerdict preperiodic_by_height(const SemigroupSystem& sys, const AffinePoint& x, double tol,
                                         unsigned k_max = 8, unsigned l_max = 8);

/// Height bound for points with a collision within n_max levels.
Interval collision_height_bound(const SemigroupSystem& sys, unsigned n_max);

struct CollisionRow {
  AffinePoint point;
  HeightEstimate height{Interval()};
  Collision first;
};

struct CollisionExperiment {
  std::vector<CollisionRow> rows;
  Interval max_height;
  unsigned max_n = 0;
  Interval bound;
  unsigned n_max = 0;
  std::size_t candidates = 0;
  bool truncated = false;
};

CollisionExperiment collision_bound_experiment(const SemigroupSystem& sys, const CandidateBox& box, unsigned n_max,
                                               const OrbitCaps& caps = {}, std::size_t max_candidates = 1 << 16);

struct SplitMultilinearForm {
  unsigned arity = 0;
  /// Disjoint blocks covering {0, ..., arity-1}.
  std::vector<std::vector<unsigned>> blocks;
  /// One coefficient point per block, with all coordinates nonzero.
  std::vector<AffinePoint> coeffs;

  /// Throws domain_error when the partition or coefficients are malformed.
  void validate(unsigned dimension) const;
};

/// Parses "c1*T1*T2 + c2*T3" style forms where each coefficient is a point
/// "(a, b)" or a scalar applied to every coordinate.
SplitMultilinearForm parse_split_form(const std::string& text, unsigned dimension, unsigned order);

AffinePoint split_form_eval(const SplitMultilinearForm& form, const std::vector<AffinePoint>& args);

enum class SplitMode { single_sequence, multi_sequence };

struct SplitHit {
  AffinePoint point;
  /// One word (single) or one word per argument (multi).
  std::vector<Word> words;
  std::vector<unsigned> ns;
  HeightEstimate height{Interval()};
  bool within_bound = true;
};

struct SplitReport {
  std::vector<SplitHit> hits;
  Interval bound;
  std::string hypothesis;
  std::size_t candidates = 0;
  bool truncated = false;
  std::string cap_hit;
};

/// Points P of the box in G_m^N with F(values at n_1 > ... > n_k) = 0 for some
/// n_1 <= n_cap. Throws hypothesis_error when the degree hypothesis fails.
SplitReport split_form_zero_search(const SemigroupSystem& sys, const SplitMultilinearForm& form,
                                   const CandidateBox& box, unsigned n_cap, SplitMode mode,
                                   std::size_t max_words = 1 << 12, std::size_t max_candidates = 1 << 16);

}  // namespace arithdyn

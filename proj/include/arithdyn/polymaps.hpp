#pragma once

// Sparse multivariate polynomials over Q(zeta_n) and polynomial self-maps of
// affine space.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arithdyn/cyclotomic.hpp"
#include "arithdyn/point.hpp"

namespace arithdyn {

using Exponent = std::vector<std::uint32_t>;

unsigned total_degree(const Exponent& e);

/// Descending total degree, then descending lexicographic.
struct GradedDescending {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class MultiPoly {
 public:
  using TermMap = std::map<Exponent, CyclotomicElement, GradedDescending>;

  explicit MultiPoly(unsigned nvars = 1, unsigned order = 1);

  static MultiPoly constant(unsigned nvars, const CyclotomicElement& c);
  /// X_{index+1}.
  static MultiPoly variable(unsigned nvars, unsigned index, unsigned order = 1);
  static MultiPoly monomial(unsigned nvars, Exponent e, const CyclotomicElement& c);

  unsigned nvars() const noexcept { return nvars_; }
  unsigned order() const noexcept { return order_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero if absent).
  CyclotomicElement constant_term() const;
  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const;
  bool is_homogeneous() const;
  /// Adds c X^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const CyclotomicElement& c);
  MultiPoly promote(unsigned target) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly& operator*=(const CyclotomicElement& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const MultiPoly& b) { return a *= b; }
  friend MultiPoly operator*(MultiPoly a, const CyclotomicElement& c) { return a *= c; }
  MultiPoly pow(unsigned e) const;

  CyclotomicElement evaluate(const std::vector<CyclotomicElement>& x) const;
  /// Value at the given embedding of the coefficients and the point.
  ComplexInterval evaluate_embedded(const std::vector<ComplexInterval>& x, long k, mpfr_prec_t precision) const;
  /// Replaces X_i with subs[i]; subs must share a variable count.
  MultiPoly substitute(const std::vector<MultiPoly>& subs) const;
  MultiPoly galois_conjugate(long k) const;
  /// Homogenization to the given degree with a new last variable.
  MultiPoly homogenize(unsigned degree) const;
  /// Sets the last variable to 1 and drops it.
  MultiPoly dehomogenize() const;
  BigInt denominator_lcm() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  /// Round-trippable text in the polynomial grammar.
  std::string to_string() const;

 private:
  unsigned nvars_;
  unsigned order_;
  TermMap terms_;
};

class AffineMorphism {
 public:
  AffineMorphism() = default;
  /// Requires one component per variable, all with the same variable count.
  explicit AffineMorphism(std::vector<MultiPoly> components);

  unsigned dimension() const noexcept { return static_cast<unsigned>(components_.size()); }
  unsigned degree() const;
  unsigned order() const noexcept { return order_; }
  const std::vector<MultiPoly>& components() const noexcept { return components_; }
  AffineMorphism promote(unsigned target) const;

  AffinePoint evaluate(const AffinePoint& p) const;
  friend bool operator==(const AffineMorphism& a, const AffineMorphism& b) { return a.components_ == b.components_; }
  std::string to_string() const;

 private:
  std::vector<MultiPoly> components_;
  unsigned order_ = 1;
};

/// F o G.
AffineMorphism compose(const AffineMorphism& f, const AffineMorphism& g);
AffineMorphism conjugate_map(const AffineMorphism& f, long k);

/// Homogeneous components (f~_1, ..., f~_N, X_{N+1}^d) in N+1 variables.
struct ProjectiveLift {
  unsigned dimension = 0;  // N
  unsigned degree = 0;     // d
  std::vector<MultiPoly> components;

  unsigned order() const { return components.empty() ? 1 : components[0].order(); }
  std::vector<CyclotomicElement> evaluate(const std::vector<CyclotomicElement>& x) const;
};

ProjectiveLift lift(const AffineMorphism& f);

/// Univariate Laurent polynomial in t.
class LaurentPoly {
 public:
  explicit LaurentPoly(unsigned order = 1) : order_(order) {}
  static LaurentPoly monomial(long exponent, const CyclotomicElement& c);

  const std::map<long, CyclotomicElement>& terms() const noexcept { return terms_; }
  void add_term(long exponent, const CyclotomicElement& c);
  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);
  friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
  /// Number of terms with nonzero exponent.
  std::size_t nonconstant_terms() const;

 private:
  unsigned order_;
  std::map<long, CyclotomicElement> terms_;
};

/// max_i number of nonconstant terms of f_i(q_1(t), ..., q_N(t)).
std::size_t nonconstant_term_count(const AffineMorphism& f, const std::vector<LaurentPoly>& q);

/// F_i = c_i X_{perm[i]}^exponent with every c_i a root of unity.
struct MonomialForm {
  std::vector<unsigned> permutation;
  std::vector<CyclotomicElement> diagonal;
  unsigned exponent = 0;
};

std::optional<MonomialForm> is_unitary_monomial_form(const AffineMorphism& f);
AffineMorphism recompose(const MonomialForm& form, unsigned order);

}  // namespace arithdyn

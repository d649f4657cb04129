#include "arithdyn/polymaps.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "arithdyn/errors.hpp"

namespace arithdyn {

unsigned total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0U);
}

bool GradedDescending::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

MultiPoly::MultiPoly(unsigned nvars, unsigned order) : nvars_(nvars), order_(order) {
  if (nvars == 0) throw domain_error("polynomial needs at least one variable");
}

MultiPoly MultiPoly::constant(unsigned nvars, const CyclotomicElement& c) {
  MultiPoly p(nvars, c.order());
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(unsigned nvars, unsigned index, unsigned order) {
  if (index >= nvars) throw domain_error("variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  MultiPoly p(nvars, order);
  p.add_term(e, CyclotomicElement(BigRational(1), order));
  return p;
}

MultiPoly MultiPoly::monomial(unsigned nvars, Exponent e, const CyclotomicElement& c) {
  if (e.size() != nvars) throw domain_error("exponent length mismatch");
  MultiPoly p(nvars, c.order());
  p.add_term(e, c);
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

CyclotomicElement MultiPoly::constant_term() const {
  auto it = terms_.find(Exponent(nvars_, 0));
  if (it == terms_.end()) return CyclotomicElement(BigRational(0), order_);
  return it->second;
}

unsigned MultiPoly::degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return total_degree(t.first) == d; });
}

void MultiPoly::add_term(const Exponent& e, const CyclotomicElement& c) {
  if (e.size() != nvars_) throw domain_error("exponent length mismatch");
  if (c.is_zero()) return;
  if (c.order() != order_ && !c.is_rational()) {
    const unsigned t = CyclotomicElement::common_order(order_, c.order());
    if (t != order_) *this = promote(t);
  }
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c.order() == order_ ? c : c.promote(order_));
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

MultiPoly MultiPoly::promote(unsigned target) const {
  MultiPoly out(nvars_, target);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.promote(target));
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.nvars_ != nvars_) throw domain_error("variable count mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) { return *this += -other; }

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
  if (other.nvars_ != nvars_) throw domain_error("variable count mismatch");
  MultiPoly out(nvars_, CyclotomicElement::common_order(order_, other.order_));
  Exponent e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (unsigned i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return *this = std::move(out);
}

MultiPoly& MultiPoly::operator*=(const CyclotomicElement& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  MultiPoly out(nvars_, order_);
  for (const auto& [e, a] : terms_) out.add_term(e, a * c);
  return *this = std::move(out);
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(nvars_, CyclotomicElement(BigRational(1), order_));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

CyclotomicElement MultiPoly::evaluate(const std::vector<CyclotomicElement>& x) const {
  if (x.size() != nvars_) throw domain_error("point dimension does not match polynomial");
  std::vector<std::vector<CyclotomicElement>> powers(nvars_);
  for (const auto& [e, c] : terms_) {
    for (unsigned i = 0; i < nvars_; ++i) {
      auto& p = powers[i];
      if (p.empty()) p.push_back(CyclotomicElement(BigRational(1), x[i].order()));
      while (p.size() <= e[i]) p.push_back(p.back() * x[i]);
    }
  }
  CyclotomicElement acc(BigRational(0), order_);
  for (const auto& [e, c] : terms_) {
    CyclotomicElement t = c;
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] > 0) t *= powers[i][e[i]];
    }
    acc += t;
  }
  return acc;
}

ComplexInterval MultiPoly::evaluate_embedded(const std::vector<ComplexInterval>& x, long k,
                                             mpfr_prec_t precision) const {
  if (x.size() != nvars_) throw domain_error("point dimension does not match polynomial");
  std::vector<std::vector<ComplexInterval>> powers(nvars_);
  ComplexInterval acc(precision);
  for (const auto& [e, c] : terms_) {
    ComplexInterval t = c.embed(k, precision);
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      auto& p = powers[i];
      if (p.empty()) p.push_back(x[i]);
      while (p.size() < e[i]) p.push_back(p.back() * x[i]);
      t *= p[e[i] - 1];
    }
    acc += t;
  }
  return acc;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& subs) const {
  if (subs.size() != nvars_) throw domain_error("substitution arity mismatch");
  const unsigned m = subs[0].nvars();
  unsigned order = order_;
  for (const auto& s : subs) {
    if (s.nvars() != m) throw domain_error("substitution variable count mismatch");
    order = CyclotomicElement::common_order(order, s.order());
  }
  std::vector<std::vector<MultiPoly>> powers(nvars_);
  MultiPoly out(m, order);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = constant(m, c);
    for (unsigned i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      auto& p = powers[i];
      if (p.empty()) p.push_back(subs[i]);
      while (p.size() < e[i]) p.push_back(p.back() * subs[i]);
      t *= p[e[i] - 1];
    }
    out += t;
  }
  return out;
}

MultiPoly MultiPoly::galois_conjugate(long k) const {
  MultiPoly out(nvars_, order_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.galois_conjugate(k));
  return out;
}

MultiPoly MultiPoly::homogenize(unsigned d) const {
  if (d < degree()) throw domain_error("homogenization degree below polynomial degree");
  MultiPoly out(nvars_ + 1, order_);
  for (const auto& [e, c] : terms_) {
    Exponent h = e;
    h.push_back(d - total_degree(e));
    out.terms_.emplace(std::move(h), c);
  }
  return out;
}

MultiPoly MultiPoly::dehomogenize() const {
  if (nvars_ < 2) throw domain_error("cannot dehomogenize a univariate polynomial");
  MultiPoly out(nvars_ - 1, order_);
  for (const auto& [e, c] : terms_) out.add_term(Exponent(e.begin(), e.end() - 1), c);
  return out;
}

BigInt MultiPoly::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& t : terms_) {
    const BigInt d = t.second.denominator_lcm();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [e, c] : a.terms_) {
    if (it->first != e || !(it->second == c)) return false;
    ++it;
  }
  return true;
}

namespace {

std::string monomial_text(const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'X' + std::to_string(i + 1);
    if (e[i] > 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const std::string mono = monomial_text(e);
    if (c.is_rational()) {
      const BigRational& q = c.rational_value();
      const BigRational a = abs(q);
      if (first) {
        if (sgn(q) < 0) out << '-';
      } else {
        out << (sgn(q) < 0 ? " - " : " + ");
      }
      if (mono.empty()) {
        out << a.get_str();
      } else if (a == 1) {
        out << mono;
      } else if (a.get_den() == 1) {
        out << a.get_str() << '*' << mono;
      } else {
        out << '(' << a.get_str() << ")*" << mono;
      }
    } else {
      if (!first) out << " + ";
      out << '(' << c.to_string() << ')';
      if (!mono.empty()) out << '*' << mono;
    }
    first = false;
  }
  return out.str();
}

AffineMorphism::AffineMorphism(std::vector<MultiPoly> components) : components_(std::move(components)) {
  if (components_.empty()) throw domain_error("morphism needs at least one component");
  const unsigned n = static_cast<unsigned>(components_.size());
  order_ = 1;
  for (const auto& c : components_) {
    if (c.nvars() != n) {
      throw domain_error("morphism of A^" + std::to_string(n) + " has a component in " +
                         std::to_string(c.nvars()) + " variables");
    }
    order_ = CyclotomicElement::common_order(order_, c.order());
  }
  for (auto& c : components_) {
    if (c.order() != order_) c = c.promote(order_);
  }
}

unsigned AffineMorphism::degree() const {
  unsigned d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

AffineMorphism AffineMorphism::promote(unsigned target) const {
  std::vector<MultiPoly> c;
  for (const auto& p : components_) c.push_back(p.promote(target));
  return AffineMorphism(std::move(c));
}

AffinePoint AffineMorphism::evaluate(const AffinePoint& p) const {
  if (p.dimension() != dimension()) throw domain_error("point dimension does not match morphism");
  std::vector<CyclotomicElement> out;
  out.reserve(dimension());
  for (const auto& c : components_) out.push_back(c.evaluate(p.coords));
  return AffinePoint(std::move(out));
}

std::string AffineMorphism::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ", ";
    out += components_[i].to_string();
  }
  return out + ")";
}

AffineMorphism compose(const AffineMorphism& f, const AffineMorphism& g) {
  if (f.dimension() != g.dimension()) throw domain_error("composition dimension mismatch");
  std::vector<MultiPoly> out;
  for (const auto& c : f.components()) out.push_back(c.substitute(g.components()));
  return AffineMorphism(std::move(out));
}

AffineMorphism conjugate_map(const AffineMorphism& f, long k) {
  std::vector<MultiPoly> out;
  for (const auto& c : f.components()) out.push_back(c.galois_conjugate(k));
  return AffineMorphism(std::move(out));
}

std::vector<CyclotomicElement> ProjectiveLift::evaluate(const std::vector<CyclotomicElement>& x) const {
  std::vector<CyclotomicElement> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.evaluate(x));
  return out;
}

ProjectiveLift lift(const AffineMorphism& f) {
  ProjectiveLift out;
  out.dimension = f.dimension();
  out.degree = f.degree();
  for (const auto& c : f.components()) out.components.push_back(c.homogenize(out.degree));
  Exponent last(out.dimension + 1, 0);
  last.back() = out.degree;
  out.components.push_back(MultiPoly::monomial(out.dimension + 1, last, CyclotomicElement(BigRational(1), f.order())));
  return out;
}

LaurentPoly LaurentPoly::monomial(long exponent, const CyclotomicElement& c) {
  LaurentPoly p(c.order());
  p.add_term(exponent, c);
  return p;
}

void LaurentPoly::add_term(long exponent, const CyclotomicElement& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    terms_.emplace(exponent, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) {
  LaurentPoly out(CyclotomicElement::common_order(order_, other.order_));
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) out.add_term(ea + eb, ca * cb);
  }
  return *this = std::move(out);
}

std::size_t LaurentPoly::nonconstant_terms() const {
  return terms_.size() - (terms_.count(0) ? 1 : 0);
}

std::size_t nonconstant_term_count(const AffineMorphism& f, const std::vector<LaurentPoly>& q) {
  if (q.size() != f.dimension()) throw domain_error("Laurent tuple length does not match morphism");
  std::size_t best = 0;
  for (const auto& comp : f.components()) {
    std::vector<std::vector<LaurentPoly>> powers(q.size());
    LaurentPoly acc(comp.order());
    for (const auto& [e, c] : comp.terms()) {
      LaurentPoly t = LaurentPoly::monomial(0, c);
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (e[i] == 0) continue;
        auto& p = powers[i];
        if (p.empty()) p.push_back(q[i]);
        while (p.size() < e[i]) p.push_back(p.back() * q[i]);
        t *= p[e[i] - 1];
      }
      acc += t;
    }
    best = std::max(best, acc.nonconstant_terms());
  }
  return best;
}

std::optional<MonomialForm> is_unitary_monomial_form(const AffineMorphism& f) {
  MonomialForm form;
  form.exponent = f.degree();
  const unsigned n = f.dimension();
  std::vector<bool> used(n, false);
  for (const auto& comp : f.components()) {
    if (comp.term_count() != 1) return std::nullopt;
    const auto& [e, c] = *comp.terms().begin();
    unsigned var = n;
    for (unsigned i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      if (var != n || e[i] != form.exponent) return std::nullopt;
      var = i;
    }
    if (var == n || used[var]) return std::nullopt;
    if (!c.is_root_of_unity()) return std::nullopt;
    used[var] = true;
    form.permutation.push_back(var);
    form.diagonal.push_back(c);
  }
  if (!(recompose(form, f.order()) == f)) return std::nullopt;
  return form;
}

AffineMorphism recompose(const MonomialForm& form, unsigned order) {
  // D o S o alpha^d applied symbolically.
  const unsigned n = static_cast<unsigned>(form.permutation.size());
  std::vector<MultiPoly> power_map;
  for (unsigned i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = form.exponent;
    power_map.push_back(MultiPoly::monomial(n, e, CyclotomicElement(BigRational(1), order)));
  }
  std::vector<MultiPoly> permuted;
  for (unsigned i = 0; i < n; ++i) permuted.push_back(power_map[form.permutation[i]]);
  std::vector<MultiPoly> scaled;
  for (unsigned i = 0; i < n; ++i) scaled.push_back(permuted[i] * form.diagonal[i]);
  return AffineMorphism(std::move(scaled));
}

}  // namespace arithdyn

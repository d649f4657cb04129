#include "arithdyn/point.hpp"

#include <algorithm>
#include <numeric>

#include "arithdyn/errors.hpp"

namespace arithdyn {

AffinePoint::AffinePoint(std::vector<CyclotomicElement> c) : coords(std::move(c)) {
  if (coords.empty()) return;
  unsigned order = coords[0].order();
  for (const auto& x : coords) order = CyclotomicElement::common_order(order, x.order());
  for (auto& x : coords) {
    if (x.order() != order) x = x.promote(order);
  }
}

AffinePoint AffinePoint::promote(unsigned target) const {
  AffinePoint out;
  out.coords.reserve(coords.size());
  for (const auto& x : coords) out.coords.push_back(x.promote(target));
  return out;
}

AffinePoint AffinePoint::galois_conjugate(long k) const {
  AffinePoint out;
  for (const auto& x : coords) out.coords.push_back(x.galois_conjugate(k));
  return out;
}

bool AffinePoint::is_rational() const {
  return std::all_of(coords.begin(), coords.end(), [](const CyclotomicElement& x) { return x.is_rational(); });
}

bool AffinePoint::is_integral() const {
  return std::all_of(coords.begin(), coords.end(),
                     [](const CyclotomicElement& x) { return x.is_algebraic_integer(); });
}

std::string AffinePoint::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ", ";
    out += coords[i].to_string();
  }
  return out + ")";
}

int compare(const AffinePoint& a, const AffinePoint& b) {
  if (a.coords.size() != b.coords.size()) return a.coords.size() < b.coords.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const int c = CyclotomicElement::compare(a.coords[i], b.coords[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::size_t PointHash::operator()(const AffinePoint& p) const noexcept {
  std::size_t seed = p.coords.size();
  for (const auto& x : p.coords) hash_combine(seed, x.hash());
  return seed;
}

}  // namespace arithdyn

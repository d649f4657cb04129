#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arithdyn/cyclotomic.hpp"

namespace arithdyn {

/// Point of affine N-space with coordinates in a common cyclotomic field.
struct AffinePoint {
  std::vector<CyclotomicElement> coords;

  AffinePoint() = default;
  explicit AffinePoint(std::vector<CyclotomicElement> c);
  AffinePoint(std::initializer_list<CyclotomicElement> c) : AffinePoint(std::vector<CyclotomicElement>(c)) {}

  std::size_t dimension() const noexcept { return coords.size(); }
  unsigned order() const noexcept { return coords.empty() ? 1 : coords[0].order(); }
  /// All coordinates rewritten in Q(zeta_target).
  AffinePoint promote(unsigned target) const;
  AffinePoint galois_conjugate(long k) const;
  bool is_rational() const;
  bool is_integral() const;
  /// "(c1, c2, ...)" using the polynomial grammar for each coordinate.
  std::string to_string() const;

  friend bool operator==(const AffinePoint& a, const AffinePoint& b) { return a.coords == b.coords; }
  friend bool operator!=(const AffinePoint& a, const AffinePoint& b) { return !(a == b); }
};

/// Canonical total order on points of equal dimension and order.
int compare(const AffinePoint& a, const AffinePoint& b);

struct PointLess {
  bool operator()(const AffinePoint& a, const AffinePoint& b) const { return compare(a, b) < 0; }
};

struct PointHash {
  std::size_t operator()(const AffinePoint& p) const noexcept;
};

}  // namespace arithdyn

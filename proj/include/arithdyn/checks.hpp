#pragma once

// Independent checks shared by the verification suite, the acceptance run and
// the tests: a place-by-place height over Q and the two-sided size
// inequality C |G|^{-1} |P~|^d <= |F~(P~)| <= D |F~| |P~|^d on standard
// lifted vectors P~ = (x_1, ..., x_N, 1).

#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/nullstellensatz.hpp"

namespace arithdyn {

/// h(1 : x_1 : ... : x_N) as log max(1, |x_i|) plus, for every prime p in a
/// denominator, max(0, -min v_p(x_i)) log p. Denominators are factored by
/// trial division, so they must stay below 10^12.
Interval place_by_place_height(const std::vector<BigRational>& xs, mpfr_prec_t precision = default_precision);

struct SizeCheck {
  bool lower_ok = true;
  bool upper_ok = true;
  bool ok() const { return lower_ok && upper_ok; }
};

std::vector<CyclotomicElement> lifted_vector(const AffinePoint& p);

/// Every embedding; a violation counts only when it is certain.
SizeCheck archimedean_size_check(const ProjectiveLift& lift, const EffectiveConstants& k, const AffinePoint& p);

/// Exact check at a prime, over Q.
SizeCheck finite_size_check(const ProjectiveLift& lift, const Certificate& cert, const AffinePoint& p,
                            const RationalPlace& v);

}  // namespace arithdyn

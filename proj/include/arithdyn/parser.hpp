#pragma once

// Text grammar for polynomials over Q(zeta_n):
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*       division only by nonzero constants
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | 'X' index | 'z' k | '(' expr ')'
//
// X1 ... XN are the variables and zk is the root of unity e^{2 pi i / k},
// which must lie in Q(zeta_n). Whitespace is ignored.

#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/polymaps.hpp"

namespace arithdyn {

MultiPoly parse_polynomial(std::string_view text, unsigned nvars, unsigned order);
/// Constant expression (no variables).
CyclotomicElement parse_constant(std::string_view text, unsigned order);
/// Comma-separated constants; the count must equal dimension.
AffinePoint parse_point(std::string_view text, unsigned dimension, unsigned order);
AffineMorphism parse_morphism(const std::vector<std::string>& components, unsigned order);

}  // namespace arithdyn

#pragma once

// Certificates sum_j g_ij f~_j = X_i^e for lifts with no common zero, found
// by solving Macaulay systems exactly over Q(zeta_n).

#include <optional>
#include <vector>

#include "json.hpp"

#include "arithdyn/heights.hpp"
#include "arithdyn/polymaps.hpp"

namespace arithdyn {

struct Certificate {
  unsigned e = 0;
  /// (N+1) x (N+1) homogeneous polynomials of degree e - d in N+1 variables.
  std::vector<std::vector<MultiPoly>> g;

  /// All g_ij flattened row by row.
  std::vector<MultiPoly> flattened() const;
  std::size_t max_term_count() const;
};

/// Monomials of total degree k in m variables, in graded descending order.
std::vector<Exponent> monomials_of_degree(unsigned m, unsigned k);

inline unsigned default_e_max(const ProjectiveLift& lift) { return 2 * lift.degree * (lift.dimension + 1); }

/// First e in [d, e_max] admitting a certificate; nullopt if none does.
std::optional<Certificate> find_certificate(const ProjectiveLift& lift, unsigned e_max);
std::optional<Certificate> find_certificate(const ProjectiveLift& lift);
bool verify_certificate(const ProjectiveLift& lift, const Certificate& cert);

struct EffectiveConstants {
  BigRational C;  // 1 / ((N+1) * max #terms g_ij)
  BigRational D;  // max #terms f~_i
  std::vector<Interval> g_norm;  // |sigma_k(G)| per unit k of the field
  std::vector<Interval> f_norm;  // |sigma_k(F~)| per unit k of the field
  std::vector<unsigned> units;
};

EffectiveConstants effective_constants(const ProjectiveLift& lift, const Certificate& cert,
                                       mpfr_prec_t precision = default_precision);

nlohmann::ordered_json certificate_to_json(const Certificate& cert);
/// Inverse of certificate_to_json; coefficients are parsed in Q(zeta_order).
Certificate certificate_from_json(const nlohmann::ordered_json& j, unsigned nvars, unsigned order);

}  // namespace arithdyn

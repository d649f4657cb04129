#include "arithdyn/nullstellensatz.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "arithdyn/errors.hpp"
#include "arithdyn/parser.hpp"

namespace arithdyn {

std::vector<MultiPoly> Certificate::flattened() const {
  std::vector<MultiPoly> out;
  for (const auto& row : g) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::size_t Certificate::max_term_count() const {
  std::size_t m = 0;
  for (const auto& row : g) {
    for (const auto& p : row) m = std::max(m, p.term_count());
  }
  return m;
}

std::vector<Exponent> monomials_of_degree(unsigned m, unsigned k) {
  std::vector<Exponent> out;
  Exponent e(m, 0);
  // Lexicographically descending enumeration of compositions of k.
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned left) {
    if (i + 1 == m) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned a = left + 1; a-- > 0;) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, k);
  return out;
}

namespace {

using Row = std::vector<CyclotomicElement>;

// Gauss-Jordan on [A | B]; returns one solution column per right-hand side,
// or nullopt if some right-hand side is inconsistent. Free variables are 0.
std::optional<std::vector<Row>> solve(std::vector<Row> a, std::size_t ncols, std::size_t nrhs, unsigned order) {
  const std::size_t nrows = a.size();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  const CyclotomicElement zero(BigRational(0), order);
  for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && a[p][c].is_zero()) ++p;
    if (p == nrows) continue;
    std::swap(a[p], a[r]);
    const CyclotomicElement inv = a[r][c].inverse();
    for (std::size_t j = c; j < ncols + nrhs; ++j) {
      if (!a[r][j].is_zero()) a[r][j] *= inv;
    }
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const CyclotomicElement f = a[i][c];
      for (std::size_t j = c; j < ncols + nrhs; ++j) {
        if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
      }
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < nrows; ++i) {
    for (std::size_t k = 0; k < nrhs; ++k) {
      if (!a[i][ncols + k].is_zero()) return std::nullopt;
    }
  }
  std::vector<Row> sol(nrhs, Row(ncols, zero));
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    for (std::size_t k = 0; k < nrhs; ++k) sol[k][pivot_cols[i]] = a[i][ncols + k];
  }
  return sol;
}

std::optional<Certificate> certificate_at(const ProjectiveLift& lift, unsigned e) {
  const unsigned m = lift.dimension + 1;
  const unsigned d = lift.degree;
  const unsigned order = lift.order();
  const auto shifts = monomials_of_degree(m, e - d);
  const auto targets = monomials_of_degree(m, e);
  std::map<Exponent, std::size_t> row_of;
  for (std::size_t i = 0; i < targets.size(); ++i) row_of.emplace(targets[i], i);

  const std::size_t ncols = m * shifts.size();
  const CyclotomicElement zero(BigRational(0), order);
  std::vector<Row> a(targets.size(), Row(ncols + m, zero));
  for (unsigned j = 0; j < m; ++j) {
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      const std::size_t col = j * shifts.size() + s;
      for (const auto& [ex, c] : lift.components[j].terms()) {
        Exponent mono = ex;
        for (unsigned v = 0; v < m; ++v) mono[v] += shifts[s][v];
        a[row_of.at(mono)][col] = c;
      }
    }
  }
  for (unsigned i = 0; i < m; ++i) {
    Exponent target(m, 0);
    target[i] = e;
    a[row_of.at(target)][ncols + i] = CyclotomicElement(BigRational(1), order);
  }
  auto sol = solve(std::move(a), ncols, m, order);
  if (!sol) return std::nullopt;
  Certificate cert;
  cert.e = e;
  cert.g.assign(m, std::vector<MultiPoly>(m, MultiPoly(m, order)));
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = 0; j < m; ++j) {
      for (std::size_t s = 0; s < shifts.size(); ++s) {
        cert.g[i][j].add_term(shifts[s], (*sol)[i][j * shifts.size() + s]);
      }
    }
  }
  return cert;
}

}  // namespace

std::optional<Certificate> find_certificate(const ProjectiveLift& lift, unsigned e_max) {
  if (lift.components.size() != lift.dimension + 1) throw domain_error("malformed lift");
  if (e_max < lift.degree) throw domain_error("e_max must be at least the degree");
  for (unsigned e = lift.degree; e <= e_max; ++e) {
    if (auto c = certificate_at(lift, e)) return c;
  }
  return std::nullopt;
}

std::optional<Certificate> find_certificate(const ProjectiveLift& lift) {
  return find_certificate(lift, default_e_max(lift));
}

bool verify_certificate(const ProjectiveLift& lift, const Certificate& cert) {
  const unsigned m = lift.dimension + 1;
  if (cert.g.size() != m) return false;
  for (unsigned i = 0; i < m; ++i) {
    if (cert.g[i].size() != m) return false;
    MultiPoly sum(m, lift.order());
    for (unsigned j = 0; j < m; ++j) {
      if (cert.g[i][j].nvars() != m) return false;
      sum += cert.g[i][j] * lift.components[j];
    }
    Exponent target(m, 0);
    target[i] = cert.e;
    sum -= MultiPoly::monomial(m, target, CyclotomicElement(1));
    if (!sum.is_zero()) return false;
  }
  return true;
}

EffectiveConstants effective_constants(const ProjectiveLift& lift, const Certificate& cert, mpfr_prec_t precision) {
  EffectiveConstants k;
  std::size_t f_terms = 0;
  for (const auto& c : lift.components) f_terms = std::max(f_terms, c.term_count());
  k.D = BigRational(static_cast<unsigned long>(f_terms));
  k.C = BigRational(1UL, static_cast<unsigned long>((lift.dimension + 1) * cert.max_term_count()));
  k.C.canonicalize();
  const auto field = CyclotomicField::get(lift.order());
  k.units = field->units();
  const auto g = cert.flattened();
  for (unsigned u : k.units) {
    k.g_norm.push_back(poly_sup_norm(g, u, precision));
    k.f_norm.push_back(poly_sup_norm(lift.components, u, precision));
  }
  return k;
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["e"] = cert.e;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : cert.g) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& p : row) {
      nlohmann::ordered_json terms = nlohmann::ordered_json::array();
      for (const auto& [e, c] : p.terms()) {
        terms.push_back({{"exponent", e}, {"coeff", c.to_string()}});
      }
      r.push_back(terms);
    }
    rows.push_back(r);
  }
  j["g"] = rows;
  return j;
}

Certificate certificate_from_json(const nlohmann::ordered_json& j, unsigned nvars, unsigned order) {
  Certificate cert;
  cert.e = j.at("e").get<unsigned>();
  for (const auto& r : j.at("g")) {
    std::vector<MultiPoly> row;
    for (const auto& terms : r) {
      MultiPoly p(nvars, order);
      for (const auto& t : terms) {
        auto e = t.at("exponent").get<Exponent>();
        if (e.size() != nvars) throw domain_error("certificate exponent has the wrong length");
        p.add_term(e, parse_constant(t.at("coeff").get<std::string>(), order));
      }
      row.push_back(p);
    }
    cert.g.push_back(row);
  }
  return cert;
}

}  // namespace arithdyn

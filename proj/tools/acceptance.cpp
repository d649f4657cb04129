// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arithdyn/canonical.hpp"
#include "arithdyn/checks.hpp"
#include "arithdyn/cli.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/nullstellensatz.hpp"
#include "arithdyn/parallel.hpp"
#include "arithdyn/parser.hpp"

using namespace arithdyn;

namespace {

constexpr double tol = 1e-8;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  BigRational rational(long num, long den) {
    BigRational q(BigInt(integer(-num, num)), BigInt(integer(1, den)));
    q.canonicalize();
    return q;
  }
  CyclotomicElement element(unsigned order, long num, long den) {
    std::vector<BigRational> c;
    for (unsigned i = 0; i < euler_phi(order); ++i) c.push_back(rational(num, den));
    return CyclotomicElement(order, std::move(c));
  }
  AffinePoint point(unsigned dim, unsigned order, long num, long den) {
    std::vector<CyclotomicElement> c;
    for (unsigned i = 0; i < dim; ++i) c.push_back(element(order, num, den));
    return AffinePoint(std::move(c));
  }

 private:
  std::mt19937_64 eng_;
};

SemigroupSystem make(std::vector<std::vector<std::string>> maps, unsigned order = 1) {
  std::vector<AffineMorphism> g;
  for (const auto& m : maps) g.push_back(parse_morphism(m, order));
  return SemigroupSystem(std::move(g), order);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

// 1 ------------------------------------------------------------------------

Outcome height_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng r(101);
  double worst = 0;
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<unsigned>(r.integer(1, 4));
    std::vector<BigRational> xs;
    std::vector<CyclotomicElement> coords;
    for (unsigned i = 0; i < n; ++i) {
      xs.push_back(r.rational(1000000, 1000000));
      coords.emplace_back(xs.back());
    }
    const Interval a = weil_height(AffinePoint(coords)).enclosure();
    const Interval b = place_by_place_height(xs);
    const double diff = std::fabs(a.midpoint().to_double() - b.midpoint().to_double());
    worst = std::max(worst, diff);
    if (diff >= 1e-12 || !a.overlaps(b)) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 10, fmt("100 points, max |diff| %.2e, %zu mismatches, %.2f s", worst, bad, secs)};
}

// 2 ------------------------------------------------------------------------

Outcome certificates() {
  const auto start = std::chrono::steady_clock::now();
  struct Fixture {
    std::string name;
    std::vector<std::string> comps;
    unsigned order;
  };
  const std::vector<Fixture> fixtures{
      {"x^2", {"X1^2"}, 1},
      {"x^3", {"X1^3"}, 1},
      {"x^2 - 1", {"X1^2 - 1"}, 1},
      {"(x^2 + y, y^2)", {"X1^2 + X2", "X2^2"}, 1},
      {"(y^2, x^2 - 1)", {"X2^2", "X1^2 - 1"}, 1},
      {"x^2 + i", {"X1^2 + z4"}, 4},
      {"z3 x^2 + 1/2", {"z3*X1^2 + 1/2"}, 3},
      {"x^3 - x + 1", {"X1^3 - X1 + 1"}, 1},
  };
  std::size_t ok = 0;
  std::string failed;
  for (const auto& f : fixtures) {
    const auto L = lift(parse_morphism(f.comps, f.order));
    const auto cert = find_certificate(L);
    if (cert && verify_certificate(L, *cert)) {
      ++ok;
    } else {
      failed += " " + f.name;
    }
  }
  const bool common_zero_rejected = !find_certificate(lift(parse_morphism({"X1*X2", "X1^2"}, 1))).has_value();
  const double secs = seconds_since(start);
  return {ok == fixtures.size() && ok >= 5 && common_zero_rejected && secs < 30,
          fmt("%zu/%zu fixtures certified with zero residual%s, (X1X2, X1^2) %s, %.2f s", ok, fixtures.size(),
              failed.empty() ? "" : (" (failed:" + failed + ")").c_str(),
              common_zero_rejected ? "has no certificate" : "WRONGLY certified", secs)};
}

// 3 ------------------------------------------------------------------------

Outcome size_bounds() {
  const std::vector<SemigroupSystem> systems{
      make({{"X1^2"}, {"X1^3 - X1 + 1"}}),
      make({{"X1^2 - 1"}, {"2*X1^2 + 1/3"}}),
      make({{"X1^2 + X2", "X2^2"}, {"X2^2", "X1^2 - 1"}}),
      make({{"X1^2 + z4"}}, 4),
      make({{"z3*X1^2 + 1/2"}}, 3),
  };
  Rng r(303);
  std::size_t arch = 0, arch_bad = 0, fin = 0, fin_bad = 0;
  while (arch < 500) {
    for (const auto& sys : systems) {
      for (std::size_t i = 0; i < sys.size() && arch < 500; ++i) {
        const auto p = r.point(sys.dimension(), sys.order(), r.integer(1, 1000), r.integer(1, 1000));
        ++arch;
        if (!archimedean_size_check(sys.lift(i), sys.constants(i), p).ok()) ++arch_bad;
      }
    }
  }
  const long primes[] = {2, 3, 5, 7, 11, 13};
  while (fin < 500) {
    for (const auto& sys : systems) {
      if (!sys.is_rational()) continue;
      for (std::size_t i = 0; i < sys.size() && fin < 500; ++i) {
        const auto p = r.point(sys.dimension(), 1, r.integer(1, 1000), r.integer(1, 1000));
        const auto v = RationalPlace::prime(primes[r.integer(0, 5)]);
        ++fin;
        if (!finite_size_check(sys.lift(i), sys.certificate(i), p, v).ok()) ++fin_bad;
      }
    }
  }
  return {arch_bad == 0 && fin_bad == 0,
          fmt("%zu archimedean samples (%zu violations), %zu finite-place samples (%zu violations)", arch, arch_bad,
              fin, fin_bad)};
}

// 4 ------------------------------------------------------------------------

Outcome growth() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SemigroupSystem> systems{
      make({{"X1^2"}, {"X1^3 - X1 + 1"}}),
      make({{"X1^2 - 1"}, {"2*X1^2 + 1/3"}}),
      make({{"X1^2 + X2", "X2^2"}, {"X2^2", "X1^2 - 1"}}),
  };
  Rng r(404);
  std::size_t trials = 0, bad = 0, below = 0;
  for (int t = 0; trials < 1000; ++t) {
    const auto& sys = systems[static_cast<std::size_t>(t) % systems.size()];
    const unsigned N = sys.dimension();
    Word w;
    const long len = r.integer(1, 3);
    for (long k = 0; k < len; ++k) w.push_back(static_cast<unsigned>(r.integer(0, static_cast<long>(sys.size()) - 1)));
    const long which = r.integer(0, 2);
    const RationalPlace v = which == 0 ? RationalPlace::archimedean() : RationalPlace::prime(which == 1 ? 2 : 3);
    const AffinePoint zero(std::vector<CyclotomicElement>(N, CyclotomicElement(0)));
    const BigRational th = growth_check(sys, zero, v, {}).threshold;
    std::vector<CyclotomicElement> coords;
    for (unsigned i = 0; i < N; ++i) coords.emplace_back(r.rational(20, 20));
    const auto big = static_cast<unsigned>(r.integer(0, N - 1));
    if (v.is_archimedean()) {
      const BigRational q = r.rational(100, 7);
      coords[big] = CyclotomicElement(BigRational(th + q * q + BigRational(1, 1000)));
      if (r.integer(0, 1) == 1) coords[big] = -coords[big];
    } else {
      BigInt pk = v.p();
      while (BigRational(pk) <= th) pk *= v.p();
      pk *= BigInt(r.integer(0, 2) == 0 ? 1 : v.p());
      coords[big] = CyclotomicElement(BigRational(BigInt(BigInt(r.integer(-50, 50)) * v.p() + 1), pk));
    }
    const auto g = growth_check(sys, AffinePoint(coords), v, w);
    if (!g.precondition_met) {
      ++below;
      continue;
    }
    ++trials;
    if (!g.strictly_increasing) ++bad;
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs < 60,
          fmt("%zu trials above threshold (%zu draws below), %zu violations, %.2f s", trials, below, bad, secs)};
}

// 5 ------------------------------------------------------------------------

Outcome canonical_contracts() {
  const auto start = std::chrono::steady_clock::now();
  Rng r(505);
  // (a), (b): single maps.
  const std::vector<SemigroupSystem> singles{
      make({{"X1^2"}}),
      make({{"X1^2 - 1"}}),
      make({{"2*X1^2"}}),
      make({{"X1^2 + 1/3"}}),
      make({{"X1^3 - X1 + 1"}}),
      make({{"X1^2 + X2", "X2^2"}}),
      make({{"X2^2", "X1^2 - 1"}}),
      make({{"X1^2 + z4"}}, 4),
  };
  std::size_t na = 0, bad_a = 0, nb = 0, bad_b = 0;
  for (const auto& sys : singles) {
    const double c = c_bound(sys).value.upper();
    const double d = sys.degree(0);
    for (int t = 0; t < 8; ++t) {
      const auto x = r.point(sys.dimension(), sys.order(), 40, 12);
      const auto hx = canonical_height_map(sys, 0, x, tol).estimate.value();
      const auto hfx = canonical_height_map(sys, 0, sys.apply(0, x), tol).estimate.value();
      ++na;
      if (std::fabs(hx - weil_height(x).value()) > 2 * c + tol) ++bad_a;
      ++nb;
      if (std::fabs(hfx - d * hx) > (d + 1) * tol) ++bad_b;
    }
  }
  // (c), (d): systems whose exact word sums are computable at tol = 1e-8.
  struct Case {
    SemigroupSystem sys;
    std::function<AffinePoint(Rng&)> point;
  };
  auto random_point = [](unsigned dim, unsigned order) {
    return [dim, order](Rng& g) { return g.point(dim, order, 30, 10); };
  };
  auto from = [](std::vector<std::string> pts, unsigned order) {
    return [pts, order](Rng& g) {
      return parse_point(pts[static_cast<std::size_t>(g.integer(0, static_cast<long>(pts.size()) - 1))], 1, order);
    };
  };
  const std::vector<Case> cases{
      {make({{"X1^2 - 1"}}), random_point(1, 1)},
      {make({{"X1^3 - X1 + 1"}}), random_point(1, 1)},
      {make({{"X1^2 + X2", "X2^2"}}), random_point(2, 1)},
      {make({{"X1^2"}, {"X1^3"}}), random_point(1, 1)},
      {make({{"X1^2"}, {"-X1^2"}, {"X1^3"}}), random_point(1, 1)},
      {make({{"X1^2", "X2^2"}, {"X2^3", "X1^3"}}), random_point(2, 1)},
      {make({{"z3*X1^3"}, {"X1^2"}}, 3), random_point(1, 3)},
      {make({{"X1^2"}, {"X1^2 - 1"}}), from({"0", "1", "-1"}, 1)},
      {make({{"X1^2 - 1"}, {"-X1^2 + 1"}}), from({"0", "1", "-1"}, 1)},
  };
  std::size_t nc = 0, bad_c = 0, nd = 0, bad_d = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& sys = cases[k].sys;
    const double s = static_cast<double>(sys.size());
    const double D = sys.degree_sum();
    const double c = c_bound(sys).value.upper();
    for (int t = 0; t < 7; ++t) {
      const auto x = cases[k].point(r);
      const double hx = canonical_height_semigroup(sys, x, tol).estimate.value();
      double sum = 0;
      for (std::size_t j = 0; j < sys.size(); ++j) {
        sum += canonical_height_semigroup(sys, sys.apply(j, x), tol).estimate.value();
      }
      ++nc;
      if (std::fabs(sum - D * hx) > (s + D) * tol) ++bad_c;
      const auto hw = canonical_height_word(sys, WordStream::random(sys, 1000 * k + t), x, tol).estimate.value();
      ++nd;
      if (std::fabs(hx - hw) > 4 * c + 2 * tol) ++bad_d;
    }
  }
  const double secs = seconds_since(start);
  const std::size_t least = std::min({na, nb, nc, nd});
  return {bad_a + bad_b + bad_c + bad_d == 0 && least >= 50 && secs < 120,
          fmt("tol 1e-8: |h^-h| %zu/%zu, functional eq. %zu/%zu, sum identity %zu/%zu, word vs semigroup %zu/%zu "
              "violations/samples, %.1f s",
              bad_a, na, bad_b, nb, bad_c, nc, bad_d, nd, secs)};
}

// 6 ------------------------------------------------------------------------

bool orbit_closes(const SemigroupSystem& sys, const AffinePoint& x, unsigned depth) {
  const auto lv = orbit_levels(sys, x, depth, OrbitCaps{1 << 12, 1 << 12});
  std::set<AffinePoint, PointLess> seen;
  for (const auto& level : lv.levels) {
    bool fresh = false;
    for (const auto& e : level) fresh = seen.insert(e.point).second || fresh;
    if (!fresh) return true;
  }
  return false;
}

Outcome preperiodicity() {
  std::string detail;
  bool pass = true;
  Rng r(606);
  for (const std::string f : {"X1^2", "X1^2 - 1"}) {
    const auto sys = make({{f}});
    // Rational preperiodic points of x^2 + c with c integral are integers of
    // absolute value at most 2, so the box below is exhaustive.
    const auto box = CandidateBox::rational(1, 12, 12);
    std::set<AffinePoint, PointLess> found;
    std::size_t confirmed = 0;
    for (const auto& p : box.enumerate(1 << 16)) {
      if (!orbit_closes(sys, p, 8)) continue;
      found.insert(p);
      const auto v = preperiodic_by_height(sys, p, tol);
      const auto h = canonical_height_semigroup(sys, p, tol).estimate;
      if (v.verdict == Preperiodicity::preperiodic_confirmed && h.upper() <= tol) ++confirmed;
    }
    const std::set<AffinePoint, PointLess> expected{parse_point("-1", 1, 1), parse_point("0", 1, 1),
                                                    parse_point("1", 1, 1)};
    std::size_t certified = 0, tried = 0;
    while (tried < 50) {
      const auto p = r.point(1, 1, 100000, 100000);
      if (weil_height(p).lower() <= 1) continue;
      ++tried;
      if (preperiodic_by_height(sys, p, tol).verdict == Preperiodicity::nonpreperiodic_certified) ++certified;
    }
    const bool ok = found == expected && confirmed == found.size() && certified == 50;
    pass = pass && ok;
    detail += fmt("%s%s: %zu preperiodic points (%zu confirmed, h^ <= 1e-8), %zu/50 of height > 1 certified",
                  detail.empty() ? "" : "; ", f == "X1^2" ? "x^2" : "x^2-1", found.size(), confirmed, certified);
  }
  return {pass, detail};
}

// 7 ------------------------------------------------------------------------

Outcome sigma_bound() {
  struct Fixture {
    std::string name;
    SemigroupSystem sys;
    std::vector<std::string> gammas;
    CandidateBox box;
    unsigned n_max;
  };
  const std::vector<Fixture> fixtures{
      {"{x^3, x^3-1}", make({{"X1^3"}, {"X1^3 - 1"}}), {"0", "1", "-1"}, CandidateBox::rational(1, 6, 1), 2},
      {"{x^3 + x, 2x^3}", make({{"X1^3 + X1"}, {"2*X1^3"}}), {"0", "1"}, CandidateBox::rational(1, 6, 2), 2},
      {"{z3 x^3}", make({{"z3*X1^3"}}, 3), {"0", "1", "z3"}, CandidateBox::cyclotomic_integers(1, 3, 1), 2},
  };
  bool pass = true;
  std::string detail;
  std::size_t total = 0;
  for (const auto& f : fixtures) {
    for (const std::string A : {"1", "2"}) {
      std::vector<AffinePoint> gammas;
      for (const auto& g : f.gammas) gammas.push_back(parse_point(g, 1, f.sys.order()));
      SigmaOptions o;
      o.n_max = f.n_max;
      const auto rep = sigma_A_search(f.sys, BigRational(A), gammas, f.box, o);
      if (!rep.bound) {
        pass = false;
        continue;
      }
      const Interval& M = rep.bound->M;
      std::size_t bad = 0;
      for (const auto& h : rep.hits) {
        const bool house_ok = house(h.point).upper() <= M.upper();
        bool integral = true;
        for (const auto& c : h.point.coords) integral = integral && (c * CyclotomicElement(rep.E)).is_algebraic_integer();
        if (!house_ok || !integral || !h.house_ok || !h.integral_ok) ++bad;
      }
      total += rep.hits.size();
      pass = pass && bad == 0 && !rep.hits.empty();
      if (A == "2") {
        detail += fmt("%s%s A=2: %zu hits, max house %.4g vs M %.4g", detail.empty() ? "" : "; ", f.name.c_str(),
                      rep.hits.size(), rep.empirical_max_house.upper(), M.upper());
      }
    }
  }
  return {pass, fmt("%zu hits checked; ", total) + detail};
}

// 8 ------------------------------------------------------------------------

Outcome collisions() {
  struct Fixture {
    std::string name;
    SemigroupSystem sys;
    unsigned n_max;
  };
  const std::vector<Fixture> fixtures{
      {"x^2-1", make({{"X1^2 - 1"}}), 6},
      {"{x^2, x^3}", make({{"X1^2"}, {"X1^3"}}), 4},
  };
  bool pass = true;
  std::string detail;
  for (const auto& f : fixtures) {
    std::vector<unsigned> max_n;
    std::size_t rows = 0, above = 0;
    double bound = 0, worst = 0;
    for (long b : {3L, 6L, 12L}) {
      const auto exp = collision_bound_experiment(f.sys, CandidateBox::rational(1, b, b), f.n_max);
      max_n.push_back(exp.max_n);
      bound = exp.bound.lower();
      for (const auto& row : exp.rows) {
        ++rows;
        worst = std::max(worst, row.height.upper());
        if (!(row.height.upper() <= exp.bound.lower())) ++above;
      }
      pass = pass && !exp.truncated;
    }
    const bool stable = max_n[0] == max_n[1] && max_n[1] == max_n[2];
    pass = pass && stable && above == 0 && rows > 0;
    detail += fmt("%s%s: boxes 3/6/12, %zu collision rows, max h %.4g <= bound %.4g, max n %u/%u/%u",
                  detail.empty() ? "" : "; ", f.name.c_str(), rows, worst, bound, max_n[0], max_n[1], max_n[2]);
  }
  return {pass, detail};
}

// 9 ------------------------------------------------------------------------

Outcome determinism() {
  const std::vector<std::string> names{"square.json",   "square_minus_one.json", "square_cube.json", "plane_pair.json",
                                       "gaussian.json", "cubic_pair.json",       "cube_roots.json"};
  std::size_t same = 0;
  for (const auto& n : names) {
    std::ifstream in(std::string(ARITHDYN_CONFIG_DIR) + "/" + n);
    std::stringstream text;
    text << in.rdbuf();
    const auto cfg = parse_config(text.str());
    set_worker_count(1);
    const auto a = run("verify-suite", cfg, {});
    const auto a2 = run("verify-suite", cfg, {});
    set_worker_count(8);
    const auto b = run("verify-suite", cfg, {});
    set_worker_count(1);
    if (a.output == b.output && a.output == a2.output && a.exit_code == exit_ok) ++same;
  }
  return {same == names.size(), fmt("%zu/%zu fixture configs byte-identical at 1 and 8 threads", same, names.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"height oracle equivalence", height_oracle},
      {"certificate exactness", certificates},
      {"two-sided size bounds", size_bounds},
      {"growth above threshold", growth},
      {"canonical height contracts", canonical_contracts},
      {"preperiodicity at desk scale", preperiodicity},
      {"bounded house of Sigma_A", sigma_bound},
      {"collision boundedness", collisions},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

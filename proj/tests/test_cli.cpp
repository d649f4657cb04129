#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "arithdyn/cli.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/parallel.hpp"
#include "support.hpp"

using namespace arithdyn;
using testsupport::Gen;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(ARITHDYN_CONFIG_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::vector<std::string> fixtures{"square.json",     "square_minus_one.json", "square_cube.json", "plane_pair.json",
                                        "gaussian.json",   "cubic_pair.json",       "cube_roots.json"};

// Line and column of a parse_error thrown by parse_config.
std::pair<std::size_t, std::size_t> error_position(const std::string& text) {
  try {
    parse_config(text);
  } catch (const parse_error& e) {
    return {e.line(), e.column()};
  }
  FAIL("expected a parse error");
  return {0, 0};
}

MultiPoly random_poly(Gen& g, unsigned nvars, unsigned order, unsigned degree) {
  MultiPoly p(nvars, order);
  Exponent top(nvars, 0);
  top[0] = degree;
  p += MultiPoly::monomial(nvars, top, g.nonzero_element(order, 5, 4));
  for (int t = 0; t < 3; ++t) {
    Exponent e(nvars, 0);
    for (unsigned i = 0; i < nvars; ++i) e[i] = static_cast<std::uint32_t>(g.integer(0, 1));
    p += MultiPoly::monomial(nvars, e, g.element(order, 5, 4));
  }
  return p;
}

SystemConfig config_of(const std::string& name) { return parse_config(read_fixture(name)); }

RunOptions with_point(const std::string& p) {
  RunOptions o;
  o.point = p;
  return o;
}

}  // namespace

TEST_CASE("fixture configs survive emit and parse") {
  for (const auto& f : fixtures) {
    const auto c = config_of(f);
    CHECK(parse_config(emit_config(c)) == c);
    CHECK(emit_config(parse_config(emit_config(c))) == emit_config(c));
  }
}

TEST_CASE("random configs survive emit and parse") {
  Gen g(41);
  const unsigned orders[] = {1, 3, 4, 5, 8};
  for (int trial = 0; trial < 60; ++trial) {
    SystemConfig c;
    c.order = orders[g.integer(0, 4)];
    c.dimension = static_cast<unsigned>(g.integer(1, 3));
    const int s = static_cast<int>(g.integer(1, 3));
    for (int i = 0; i < s; ++i) {
      std::vector<MultiPoly> comps;
      for (unsigned k = 0; k < c.dimension; ++k) {
        comps.push_back(random_poly(g, c.dimension, c.order, static_cast<unsigned>(g.integer(2, 4))));
      }
      c.maps.push_back({"g" + std::to_string(i), AffineMorphism(comps)});
    }
    c.precision = g.integer(64, 1024);
    c.tolerance = std::ldexp(1.0, -static_cast<int>(g.integer(1, 60)));
    c.caps.depth = static_cast<unsigned>(g.integer(1, 12));
    c.caps.box_num = g.integer(0, 9);
    c.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
    const std::string text = emit_config(c);
    CAPTURE(text);
    CHECK(parse_config(text) == c);
  }
}

TEST_CASE("config errors carry line and column") {
  CHECK(error_position("{\n  \"n\": 1,\n  \"N\": 1,\n  \"mpas\": []\n}") == std::pair<std::size_t, std::size_t>{4, 11});
  CHECK(error_position("{\"n\": 1, \"maps\": []}").first == 1);
  // Invalid JSON: the missing value is on line 3.
  CHECK(error_position("{\n  \"n\": 1,\n  \"N\": ,\n}").first == 3);
  // Bad polynomial: the column points inside the string.
  const std::string bad = "{\"n\": 1, \"N\": 1, \"maps\": [{\"name\": \"f\", \"components\": [\"X1^2 + * 3\"]}]}";
  const auto [line, col] = error_position(bad);
  CHECK(line == 1);
  CHECK(col > bad.find("X1^2"));
  CHECK(col < bad.find("3\"]"));
  // Wrong number of components.
  CHECK(error_position("{\"n\": 1, \"N\": 2,\n \"maps\": [{\"name\": \"f\", \"components\": [\"X1^2\"]}]}").first == 2);
  // z7 does not live in Q(zeta_4).
  CHECK_THROWS_AS(parse_config("{\"n\": 4, \"N\": 1, \"maps\": [{\"name\": \"f\", \"components\": [\"X1^2 + z7\"]}]}"),
                  parse_error);
  CHECK_THROWS_AS(parse_config("{\"n\": 1, \"N\": 1, \"maps\": [{\"name\": \"f\", \"components\": [\"X1^2\"]}, "
                               "{\"name\": \"f\", \"components\": [\"X1^3\"]}]}"),
                  parse_error);
  CHECK_THROWS_AS(parse_config("{\"n\": 1, \"N\": 1, \"precision\": 8, \"maps\": [{\"name\": \"f\", \"components\": "
                               "[\"X1^2\"]}]}"),
                  parse_error);
  CHECK_THROWS_AS(parse_config("{\"n\": 1, \"N\": 1, \"maps\": [{\"name\": \"f\", \"components\": [\"X1 + 1\"]}]}"),
                  parse_error);
  CHECK_THROWS_AS(parse_config("{\"n\": 1, \"N\": 1, \"caps\": {\"deep\": 3}, \"maps\": [{\"name\": \"f\", "
                               "\"components\": [\"X1^2\"]}]}"),
                  parse_error);
  CHECK_THROWS_AS(parse_config("[1, 2]"), parse_error);
}

TEST_CASE("certify x^2 - 1 reports e = 2 and an exact-zero residual") {
  const auto r = run("certify", config_of("square_minus_one.json"), {});
  CHECK(r.exit_code == exit_ok);
  const auto& m = r.report["outputs"]["maps"][0];
  CHECK(m["e"] == 2);
  CHECK(m["residual"] == "exact-zero");
  CHECK(m["certificate"]["e"] == 2);
  CHECK(r.report["status"] == "ok");
}

TEST_CASE("height of (3/2, 5) is log 10") {
  const auto r = run("height", config_of("plane_pair.json"), with_point("3/2,5"));
  CHECK(r.exit_code == exit_ok);
  const auto& h = r.report["outputs"]["height"];
  CHECK(h["value"].get<double>() == doctest::Approx(std::log(10.0)).epsilon(1e-15));
  CHECK(h["error"].get<double>() < 1e-30);
}

TEST_CASE("report shape and key order") {
  const auto r = run("house", config_of("gaussian.json"), with_point("1+z4"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.report.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "status", "inputs", "hypotheses", "outputs", "bounds", "caps_hit"});
  CHECK(r.report["outputs"]["house"]["value"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.output == r.report.dump(2) + "\n");

  RunOptions timed = with_point("1+z4");
  timed.timing = true;
  CHECK(run("house", config_of("gaussian.json"), timed).report.contains("wall_time_s"));
}

TEST_CASE("verify-suite passes on every fixture") {
  for (const auto& f : fixtures) {
    CAPTURE(f);
    const auto r = run("verify-suite", config_of(f), {});
    CHECK(r.exit_code == exit_ok);
    CHECK(r.report["outputs"]["all_pass"] == true);
    CHECK(r.report["outputs"]["checks"].size() >= 6);
  }
}

TEST_CASE("output does not depend on the worker count") {
  const auto c = config_of("square_cube.json");
  RunOptions o;
  o.depth = 4;
  set_worker_count(1);
  const auto a = run("search-collisions", c, o).output;
  const auto va = run("verify-suite", c, {}).output;
  set_worker_count(8);
  const auto b = run("search-collisions", c, o).output;
  const auto vb = run("verify-suite", c, {}).output;
  set_worker_count(1);
  CHECK(a == b);
  CHECK(va == vb);
}

TEST_CASE("exit codes") {
  auto c = config_of("square_minus_one.json");
  // Hypothesis: M needs d >= 3.
  const auto h = run("bounds", c, {});
  CHECK(h.exit_code == exit_hypothesis);
  CHECK(h.report["status"] == "hypothesis-violated");
  CHECK(h.report["bounds"].contains("L"));
  // Parse error in a flag value.
  CHECK(run("height", c, with_point("1/")).exit_code == exit_parse);
  CHECK(run("canh", c, [] {
          RunOptions o = with_point("2");
          o.word = "1 x";
          return o;
        }()).exit_code == exit_parse);
  // Caps: a point of growing height overflows the bit cap.
  c.caps.point_bits = 64;
  RunOptions o = with_point("3");
  o.depth = 10;
  const auto capped = run("orbit", c, o);
  CHECK(capped.exit_code == exit_caps);
  CHECK(!capped.report["caps_hit"].empty());
  CHECK(!capped.report["outputs"]["rows"].empty());
  // Usage.
  CHECK(run("nonsense", c, {}).exit_code == exit_usage);
  CHECK(run("height", c, {}).exit_code == exit_usage);
  RunOptions bad_mode = with_point("2");
  bad_mode.mode = "sideways";
  CHECK(run("canh-semigroup", c, bad_mode).exit_code == exit_usage);
}

TEST_CASE("csv projection") {
  const auto c = config_of("square_minus_one.json");
  RunOptions o;
  o.format = "csv";
  const auto r = run("search-collisions", c, o);
  CHECK(r.output.rfind("point,height,height_error,hhat,hhat_error,n,m,bound,bound_error\n", 0) == 0);
  CHECK(r.output.find("(0),") != std::string::npos);

  const auto h = run("height", c, [] {
    RunOptions x = with_point("7/2");
    x.format = "csv";
    return x;
  }());
  CHECK(h.output.rfind("key,value,error\nheight,", 0) == 0);
}

TEST_CASE("every command runs on a fixture") {
  const auto c = config_of("square_cube.json");
  for (const auto& cmd : command_names()) {
    CAPTURE(cmd);
    RunOptions o = with_point("2");
    o.form = "T1 - T2";
    o.depth = 2;
    const auto r = run(cmd, c, o);
    CHECK(r.report["command"] == cmd);
    // bounds and search-sigma need a common degree, which {x^2, x^3} lacks.
    const bool common = cmd == "bounds" || cmd == "search-sigma";
    CHECK(r.exit_code == (common ? exit_hypothesis : exit_ok));
  }
}

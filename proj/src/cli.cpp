#include "arithdyn/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "arithdyn/canonical.hpp"
#include "arithdyn/checks.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/parser.hpp"

namespace arithdyn {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Source positions of JSON values, keyed by JSON pointer. Only run on text
// that nlohmann has already accepted.

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class PositionIndex {
 public:
  explicit PositionIndex(const std::string& text) : t_(text) {
    skip();
    if (i_ < t_.size()) value("");
  }

  Pos at(std::string pointer) const {
    for (;;) {
      auto it = pos_.find(pointer);
      if (it != pos_.end()) return it->second;
      const auto cut = pointer.rfind('/');
      if (cut == std::string::npos) return {};
      pointer.resize(cut);
    }
  }

 private:
  char peek() const { return i_ < t_.size() ? t_[i_] : '\0'; }
  void advance() {
    if (i_ >= t_.size()) return;
    if (t_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) advance();
  }
  std::string string() {
    advance();
    std::string s;
    while (i_ < t_.size() && peek() != '"') {
      if (peek() == '\\') advance();
      s += peek();
      advance();
    }
    advance();
    return s;
  }
  void value(const std::string& path) {
    skip();
    pos_[path] = {line_, col_};
    const char c = peek();
    if (c == '{') {
      advance();
      skip();
      if (peek() == '}') return advance();
      for (;;) {
        skip();
        const std::string key = string();
        skip();
        advance();
        value(path + "/" + key);
        skip();
        const char sep = peek();
        advance();
        if (sep != ',') return;
      }
    }
    if (c == '[') {
      advance();
      skip();
      if (peek() == ']') return advance();
      for (std::size_t k = 0;; ++k) {
        value(path + "/" + std::to_string(k));
        skip();
        const char sep = peek();
        advance();
        if (sep != ',') return;
      }
    }
    if (c == '"') {
      string();
      return;
    }
    while (i_ < t_.size() && !std::strchr(",]} \t\r\n", peek())) advance();
  }

  const std::string& t_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::map<std::string, Pos> pos_;
};

Pos position_of_byte(const std::string& text, std::size_t byte) {
  Pos p;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) : index_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    const Pos p = index_.at(pointer);
    throw parse_error("config " + (pointer.empty() ? std::string("root") : pointer) + ": " + message, p.line, p.column);
  }

  void only_keys(const nlohmann::json& obj, const std::string& pointer, std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        fail(pointer + "/" + k, "unknown key \"" + k + "\"");
      }
    }
  }

  std::uint64_t unsigned_at(const nlohmann::json& obj, const std::string& pointer, const char* key,
                            std::uint64_t lo, std::uint64_t hi) const {
    const auto& v = obj.at(key);
    const std::string p = pointer + "/" + key;
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      fail(p, std::string("\"") + key + "\" must be a non-negative integer");
    }
    const auto x = v.get<std::uint64_t>();
    if (x < lo || x > hi) {
      fail(p, std::string("\"") + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
  }

  const PositionIndex& index() const { return index_; }

 private:
  PositionIndex index_;
};

}  // namespace

SystemConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const Pos p = position_of_byte(text, e.byte);
    std::string what = e.what();
    const auto at = what.find(": ", what.find("column"));
    throw parse_error("invalid JSON: " + (at == std::string::npos ? what : what.substr(at + 2)), p.line, p.column);
  }
  ConfigReader r(text);
  if (!j.is_object()) r.fail("", "the config must be a JSON object");
  r.only_keys(j, "", {"n", "N", "maps", "precision", "tolerance", "caps", "seed", "e_max"});
  for (const char* key : {"n", "N", "maps"}) {
    if (!j.contains(key)) r.fail("", std::string("missing required key \"") + key + "\"");
  }
  SystemConfig c;
  c.order = static_cast<unsigned>(r.unsigned_at(j, "", "n", 1, 1000));
  c.dimension = static_cast<unsigned>(r.unsigned_at(j, "", "N", 1, 16));
  if (j.contains("precision")) c.precision = static_cast<long>(r.unsigned_at(j, "", "precision", 64, 1 << 16));
  if (j.contains("seed")) c.seed = r.unsigned_at(j, "", "seed", 0, UINT64_MAX);
  if (j.contains("e_max")) c.e_max = static_cast<unsigned>(r.unsigned_at(j, "", "e_max", 0, 64));
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    if (!t.is_number() || !(t.get<double>() > 0)) r.fail("/tolerance", "\"tolerance\" must be a positive number");
    c.tolerance = t.get<double>();
  }
  if (j.contains("caps")) {
    const auto& k = j["caps"];
    if (!k.is_object()) r.fail("/caps", "\"caps\" must be an object");
    r.only_keys(k, "/caps",
                {"depth", "words", "box_num", "box_den", "coeff_bound", "level_size", "point_bits", "candidates"});
    const std::uint64_t big = std::uint64_t{1} << 40;
    if (k.contains("depth")) c.caps.depth = static_cast<unsigned>(r.unsigned_at(k, "/caps", "depth", 1, 64));
    if (k.contains("words")) c.caps.words = r.unsigned_at(k, "/caps", "words", 1, big);
    if (k.contains("box_num")) c.caps.box_num = static_cast<long>(r.unsigned_at(k, "/caps", "box_num", 0, 1 << 20));
    if (k.contains("box_den")) c.caps.box_den = static_cast<long>(r.unsigned_at(k, "/caps", "box_den", 1, 1 << 20));
    if (k.contains("coeff_bound")) {
      c.caps.coeff_bound = static_cast<long>(r.unsigned_at(k, "/caps", "coeff_bound", 0, 1 << 10));
    }
    if (k.contains("level_size")) c.caps.level_size = r.unsigned_at(k, "/caps", "level_size", 1, big);
    if (k.contains("point_bits")) c.caps.point_bits = r.unsigned_at(k, "/caps", "point_bits", 1, big);
    if (k.contains("candidates")) c.caps.candidates = r.unsigned_at(k, "/caps", "candidates", 1, big);
  }
  const auto& maps = j["maps"];
  if (!maps.is_array() || maps.empty()) r.fail("/maps", "\"maps\" must be a non-empty array");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string p = "/maps/" + std::to_string(i);
    const auto& m = maps[i];
    if (!m.is_object()) r.fail(p, "each map must be an object");
    r.only_keys(m, p, {"name", "components"});
    if (!m.contains("name") || !m["name"].is_string() || m["name"].get<std::string>().empty()) {
      r.fail(p, "each map needs a non-empty \"name\"");
    }
    const std::string name = m["name"];
    for (const auto& prev : c.maps) {
      if (prev.name == name) r.fail(p + "/name", "duplicate map name \"" + name + "\"");
    }
    if (!m.contains("components") || !m["components"].is_array()) r.fail(p, "each map needs a \"components\" array");
    const auto& comps = m["components"];
    if (comps.size() != c.dimension) {
      r.fail(p + "/components", "map \"" + name + "\" has " + std::to_string(comps.size()) +
                                    " components but N = " + std::to_string(c.dimension));
    }
    std::vector<MultiPoly> polys;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::string q = p + "/components/" + std::to_string(k);
      if (!comps[k].is_string()) r.fail(q, "components must be strings");
      try {
        polys.push_back(parse_polynomial(comps[k].get<std::string>(), c.dimension, c.order));
      } catch (const parse_error& e) {
        const Pos at = r.index().at(q);
        std::string what = e.what();
        what.resize(std::min(what.size(), what.rfind(" at line ")));
        throw parse_error("config " + q + ": " + what, at.line, at.column + e.column());
      } catch (const error& e) {
        r.fail(q, e.what());
      }
    }
    AffineMorphism f(std::move(polys));
    if (f.degree() < 2) r.fail(p + "/components", "map \"" + name + "\" has degree below 2");
    c.maps.push_back({name, std::move(f)});
  }
  return c;
}

std::string emit_config(const SystemConfig& c) {
  json j;
  j["n"] = c.order;
  j["N"] = c.dimension;
  json maps = json::array();
  for (const auto& m : c.maps) {
    json comps = json::array();
    for (const auto& p : m.map.components()) comps.push_back(p.to_string());
    maps.push_back({{"name", m.name}, {"components", comps}});
  }
  j["maps"] = maps;
  j["precision"] = c.precision;
  j["tolerance"] = c.tolerance;
  j["caps"] = {{"depth", c.caps.depth},           {"words", c.caps.words},
               {"box_num", c.caps.box_num},       {"box_den", c.caps.box_den},
               {"coeff_bound", c.caps.coeff_bound}, {"level_size", c.caps.level_size},
               {"point_bits", c.caps.point_bits}, {"candidates", c.caps.candidates}};
  j["seed"] = c.seed;
  j["e_max"] = c.e_max;
  return j.dump(2) + "\n";
}

SemigroupSystem make_system(const SystemConfig& c, std::optional<long> precision) {
  std::vector<AffineMorphism> maps;
  std::vector<std::string> names;
  for (const auto& m : c.maps) {
    maps.push_back(m.map);
    names.push_back(m.name);
  }
  return SemigroupSystem(std::move(maps), c.order, std::move(names), c.e_max, precision.value_or(c.precision));
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "orbit",           "height",          "house",           "canh",          "canh-semigroup",
      "certify",         "growth",          "bounds",          "search-collisions", "search-sigma",
      "search-pi",       "search-splitform", "detect-monomial-form", "verify-suite"};
  return names;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

class usage_error : public error {
 public:
  using error::error;
};

json real(const Interval& x) {
  if (!std::isfinite(x.upper()) || !std::isfinite(x.lower())) return json{{"value", nullptr}, {"unbounded", true}};
  json j;
  j["value"] = x.midpoint().to_double();
  if (x.is_exact()) {
    j["exact"] = true;
  } else {
    j["error"] = x.radius();
  }
  return j;
}

json real(const HeightEstimate& h) { return real(h.enclosure()); }

json exact(const BigRational& q) { return json{{"value", q.get_str()}, {"exact", true}}; }

json hypothesis(const std::string& name, bool holds, const std::string& detail = "") {
  json j{{"name", name}, {"holds", holds}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

Word parse_word(const std::string& text, std::size_t s) {
  Word w;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    for (char ch : tok) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw parse_error("word entries must be integers", 1, 1);
    }
    const unsigned long v = std::stoul(tok);
    if (v < 1 || v > s) throw domain_error("word entry " + tok + " is not a generator index in 1.." + std::to_string(s));
    w.push_back(static_cast<unsigned>(v - 1));
    tok.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == ',') {
      flush();
    } else {
      tok += ch;
    }
  }
  flush();
  if (w.empty()) throw parse_error("empty word", 1, 1);
  return w;
}

BigRational parse_rational(const std::string& text, const char* what) {
  try {
    BigRational q(text);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw parse_error(std::string(what) + " is not a rational number: " + text, 1, 1);
  }
}

struct Context {
  const SystemConfig& cfg;
  const RunOptions& opt;
  json& report;
  std::optional<SemigroupSystem> sys_;

  const SemigroupSystem& sys() {
    if (!sys_) sys_.emplace(make_system(cfg, opt.precision));
    return *sys_;
  }
  json& out() { return report["outputs"]; }
  json& bounds() { return report["bounds"]; }
  void hyp(json h) { report["hypotheses"].push_back(std::move(h)); }
  void cap(const std::string& why) {
    if (!why.empty()) report["caps_hit"].push_back(why);
  }
  AffinePoint point() {
    if (!opt.point) throw usage_error("--point is required");
    return parse_point(*opt.point, cfg.dimension, cfg.order);
  }
  double tol() const { return opt.tol.value_or(cfg.tolerance); }
  unsigned depth() const { return opt.depth.value_or(cfg.caps.depth); }
  OrbitCaps caps() const { return OrbitCaps{cfg.caps.level_size, cfg.caps.point_bits}; }
  std::size_t words() const { return opt.cap_words.value_or(cfg.caps.words); }
  CandidateBox box() const {
    if (cfg.order <= 2) {
      return CandidateBox::rational(cfg.dimension, opt.box_num.value_or(cfg.caps.box_num),
                                    opt.box_den.value_or(cfg.caps.box_den));
    }
    return CandidateBox::cyclotomic_integers(cfg.dimension, cfg.order, opt.coeff_bound.value_or(cfg.caps.coeff_bound));
  }
  json box_json() const {
    const auto b = box();
    if (b.kind() == CandidateBox::Kind::rational) {
      return json{{"kind", "rational"}, {"num_bound", b.num_bound()}, {"den_bound", b.den_bound()}};
    }
    return json{{"kind", "cyclotomic-integer"}, {"coeff_bound", b.coeff_bound()}};
  }
  std::vector<std::size_t> selected_maps() {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sys().size(); ++i) {
      if (!opt.map || sys().name(i) == *opt.map) out.push_back(i);
    }
    if (out.empty()) throw usage_error("no map named " + *opt.map);
    return out;
  }
};

int cmd_orbit(Context& c) {
  const auto lv = orbit_levels(c.sys(), c.point(), c.depth(), c.caps());
  json rows = json::array();
  for (std::size_t k = 0; k < lv.levels.size(); ++k) {
    for (const auto& e : lv.levels[k]) {
      rows.push_back({{"level", k},
                      {"point", e.point.to_string()},
                      {"witness", word_to_string(e.witness)},
                      {"multiplicity", e.multiplicity.get_str()}});
    }
  }
  c.out()["depth"] = c.depth();
  c.out()["levels_computed"] = lv.levels.size() - 1;
  c.out()["truncated"] = lv.truncated;
  c.out()["rows"] = rows;
  c.cap(lv.cap_hit);
  return lv.truncated ? exit_caps : exit_ok;
}

int cmd_height(Context& c) {
  c.out()["height"] = real(weil_height(c.point(), c.sys().precision()));
  return exit_ok;
}

int cmd_house(Context& c) {
  c.out()["house"] = real(house(c.point(), c.sys().precision()));
  return exit_ok;
}

void c_hat_bounds(Context& c) {
  const auto cb = c_bound(c.sys());
  json per = json::object();
  for (std::size_t i = 0; i < c.sys().size(); ++i) per[c.sys().name(i)] = real(cb.per_generator[i]);
  c.bounds()["c_hat"] = per;
  c.bounds()["c_hat_max"] = real(cb.value);
}

int cmd_canh(Context& c) {
  const auto P = c.point();
  const auto& sys = c.sys();
  c.hyp(hypothesis("every lift has a certificate (no common zero)", true));
  CanonicalEstimate est;
  if (c.opt.word) {
    const Word w = parse_word(*c.opt.word, sys.size());
    est = canonical_height_word(sys, WordStream::periodic(w), P, c.tol());
    c.out()["word"] = word_to_string(w);
  } else {
    const std::size_t i = c.selected_maps().front();
    est = canonical_height_map(sys, i, P, c.tol());
    c.out()["map"] = sys.name(i);
  }
  c.out()["canonical_height"] = real(est.estimate);
  c.out()["depth"] = est.depth;
  c.out()["truncation_bound"] = real(est.truncation);
  c.out()["truncated_value"] = real(est.computed);
  c.out()["tracker"] = est.tracker;
  c_hat_bounds(c);
  return exit_ok;
}

int cmd_canh_semigroup(Context& c) {
  const auto P = c.point();
  SemigroupOptions so;
  const std::string mode = c.opt.mode.value_or("exact-sum");
  if (mode == "monte-carlo") {
    so.mode = SemigroupOptions::Mode::monte_carlo;
  } else if (mode != "exact-sum") {
    throw usage_error("--mode must be exact-sum or monte-carlo");
  }
  so.seed = c.opt.seed.value_or(c.cfg.seed);
  so.samples = c.opt.samples.value_or(200);
  so.max_words = c.words();
  c.hyp(hypothesis("every lift has a certificate (no common zero)", true));
  const auto est = canonical_height_semigroup(c.sys(), P, c.tol(), so);
  c.out()["mode"] = mode;
  c.out()["canonical_height"] = real(est.estimate);
  c.out()["depth"] = est.depth;
  c.out()["truncation_bound"] = real(est.truncation);
  c.out()["words"] = est.words;
  if (est.mean) {
    c.out()["seed"] = so.seed;
    c.out()["samples"] = so.samples;
    c.out()["sample_mean"] = json{{"value", *est.mean}, {"standard_error", *est.standard_error}};
  }
  c_hat_bounds(c);
  return exit_ok;
}

int cmd_certify(Context& c) {
  json maps = json::array();
  int code = exit_ok;
  for (std::size_t i : c.selected_maps()) {
    json m{{"name", c.sys().name(i)}};
    try {
      const auto& cert = c.sys().certificate(i);
      const auto& k = c.sys().constants(i);
      m["e"] = cert.e;
      m["residual"] = verify_certificate(c.sys().lift(i), cert) ? "exact-zero" : "nonzero";
      m["C"] = exact(k.C);
      m["D"] = exact(k.D);
      m["certificate"] = certificate_to_json(cert);
      c.hyp(hypothesis("lift of " + c.sys().name(i) + " has no common zero", true));
    } catch (const hypothesis_error& e) {
      m["certificate"] = nullptr;
      c.hyp(hypothesis("lift of " + c.sys().name(i) + " has no common zero", false, e.what()));
      code = exit_hypothesis;
    }
    maps.push_back(std::move(m));
  }
  c.out()["maps"] = maps;
  return code;
}

int cmd_growth(Context& c) {
  const auto P = c.point();
  const std::string place = c.opt.place.value_or("inf");
  const RationalPlace v = place == "inf" ? RationalPlace::archimedean() : RationalPlace::prime(parse_rational(place, "--place").get_num());
  const Word w = parse_word(c.opt.word.value_or("1"), c.sys().size());
  const auto g = growth_check(c.sys(), P, v, w);
  c.hyp(hypothesis("|P|_v exceeds the threshold", g.precondition_met));
  c.out()["place"] = v.to_string();
  c.out()["word"] = word_to_string(w);
  c.out()["threshold"] = exact(g.threshold);
  json vals = json::array();
  for (const auto& x : g.values) vals.push_back(exact(x));
  c.out()["values"] = vals;
  c.out()["strictly_increasing"] = g.strictly_increasing;
  return exit_ok;
}

int cmd_bounds(Context& c) {
  const BigRational A = parse_rational(c.opt.A.value_or("1"), "--A");
  c.out()["A"] = exact(A);
  c.bounds()["L"] = real(house_bound_L(c.sys(), A));
  c.bounds()["E"] = integrality_scaler(c.sys()).get_str();
  try {
    const auto m = house_bound_M(c.sys(), A);
    c.hyp(hypothesis("common degree d >= 3", true, "d = " + std::to_string(m.d)));
    c.bounds()["M"] = json{{"d", m.d}, {"s", m.s},         {"m", m.m.get_str()},
                           {"C", exact(m.C)}, {"D", exact(m.D)}, {"M", real(m.M)}};
    return exit_ok;
  } catch (const hypothesis_error& e) {
    c.hyp(hypothesis("common degree d >= 3", false, e.what()));
    c.bounds()["M"] = nullptr;
    return exit_hypothesis;
  }
}

int cmd_search_collisions(Context& c) {
  const auto& sys = c.sys();
  const unsigned n_max = c.depth();
  const auto d = sys.common_degree();
  c.hyp(hypothesis("generators share a common degree", d.has_value(),
                   d ? "d = " + std::to_string(*d) : "degrees differ; the bound maximizes over reachable degree pairs"));
  const auto exp = collision_bound_experiment(sys, c.box(), n_max, c.caps(), c.cfg.caps.candidates);
  json rows = json::array();
  for (const auto& r : exp.rows) {
    json hhat = nullptr;
    try {
      hhat = real(canonical_height_semigroup(sys, r.point, c.tol()).estimate);
    } catch (const cap_exceeded&) {
    }
    rows.push_back({{"point", r.point.to_string()},
                    {"height", real(r.height)},
                    {"hhat", hhat},
                    {"n", r.first.n},
                    {"m", r.first.m},
                    {"bound", real(exp.bound)}});
  }
  c.out()["box"] = c.box_json();
  c.out()["n_max"] = n_max;
  c.out()["candidates"] = exp.candidates;
  c.out()["max_height"] = real(exp.max_height);
  c.out()["max_n"] = exp.max_n;
  c.out()["truncated"] = exp.truncated;
  c.out()["rows"] = rows;
  c.bounds()["collision_height"] = real(exp.bound);
  if (exp.truncated) c.cap("some orbits hit the orbit caps");
  return exp.truncated ? exit_caps : exit_ok;
}

std::vector<AffinePoint> parse_points(const std::string& text, const SystemConfig& cfg) {
  std::vector<AffinePoint> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    out.push_back(parse_point(item, cfg.dimension, cfg.order));
  }
  return out;
}

int cmd_search_sigma(Context& c) {
  const BigRational A = parse_rational(c.opt.A.value_or("1"), "--A");
  const auto gammas = parse_points(c.opt.gamma.value_or("0;1"), c.cfg);
  SigmaOptions so;
  so.n_max = c.opt.depth.value_or(1);
  const std::string gm = c.opt.gamma_mode.value_or("free");
  if (gm == "constant") {
    so.mode = GammaMode::constant;
  } else if (gm != "free") {
    throw usage_error("--gamma-mode must be free or constant");
  }
  so.max_words = c.words();
  so.max_candidates = c.cfg.caps.candidates;
  so.caps = c.caps();
  const auto rep = sigma_A_search(c.sys(), A, gammas, c.box(), so);
  c.hyp(hypothesis("gammas have algebraic integer coordinates", true));
  c.hyp(hypothesis("common degree d >= 3", rep.bound.has_value()));
  json rows = json::array();
  for (const auto& h : rep.hits) {
    json g = json::array();
    for (const auto& [w, idx] : h.gammas) g.push_back({{"word", word_to_string(w)}, {"gamma", idx + 1}});
    rows.push_back({{"point", h.point.to_string()},
                    {"n", h.n},
                    {"word", word_to_string(h.word)},
                    {"gammas", g},
                    {"house", real(h.house)},
                    {"house_ok", h.house_ok},
                    {"integral_ok", h.integral_ok}});
  }
  c.out()["A"] = exact(A);
  c.out()["gamma_mode"] = gm;
  c.out()["n_max"] = so.n_max;
  c.out()["box"] = c.box_json();
  c.out()["candidates"] = rep.candidates;
  c.out()["empirical_max_house"] = real(rep.empirical_max_house);
  c.out()["truncated"] = rep.truncated;
  c.out()["rows"] = rows;
  c.bounds()["E"] = rep.E.get_str();
  c.bounds()["M"] = rep.bound ? real(rep.bound->M) : json(nullptr);
  c.cap(rep.cap_hit);
  return rep.truncated ? exit_caps : exit_ok;
}

int cmd_search_pi(Context& c) {
  const unsigned k_max = c.depth();
  const unsigned l_max = c.opt.l_max.value_or(k_max);
  const auto rep = pi_membership(c.sys(), c.point(), k_max, l_max, c.caps());
  c.out()["k_max"] = k_max;
  c.out()["l_max"] = l_max;
  c.out()["found"] = rep.found();
  if (rep.witness) {
    c.out()["witness"] = {{"k", rep.witness->k},
                          {"l", rep.witness->l},
                          {"path", word_to_string(rep.witness->path)},
                          {"return", word_to_string(rep.witness->ret)},
                          {"point", rep.witness->point.to_string()}};
  }
  c.out()["truncated"] = rep.truncated;
  c.cap(rep.cap_hit);
  return rep.truncated && !rep.found() ? exit_caps : exit_ok;
}

int cmd_search_splitform(Context& c) {
  if (!c.opt.form) throw usage_error("--form is required");
  const auto form = parse_split_form(*c.opt.form, c.cfg.dimension, c.cfg.order);
  const std::string mode = c.opt.mode.value_or("single");
  SplitMode m;
  if (mode == "single") {
    m = SplitMode::single_sequence;
  } else if (mode == "multi") {
    m = SplitMode::multi_sequence;
  } else {
    throw usage_error("--mode must be single or multi");
  }
  const auto rep = split_form_zero_search(c.sys(), form, c.box(), c.depth(), m, c.words(), c.cfg.caps.candidates);
  c.hyp(hypothesis(rep.hypothesis, true));
  json rows = json::array();
  for (const auto& h : rep.hits) {
    std::string ns, words;
    for (std::size_t i = 0; i < h.ns.size(); ++i) ns += (i ? " " : "") + std::to_string(h.ns[i]);
    for (std::size_t i = 0; i < h.words.size(); ++i) words += (i ? "|" : "") + word_to_string(h.words[i]);
    rows.push_back({{"point", h.point.to_string()},
                    {"ns", ns},
                    {"words", words},
                    {"height", real(h.height)},
                    {"within_bound", h.within_bound}});
  }
  c.out()["mode"] = mode;
  c.out()["n_cap"] = c.depth();
  c.out()["box"] = c.box_json();
  c.out()["candidates"] = rep.candidates;
  c.out()["truncated"] = rep.truncated;
  c.out()["rows"] = rows;
  c.bounds()["height"] = real(rep.bound);
  c.bounds()["slack"] = "2 c_hat (1 + N k)";
  c.cap(rep.cap_hit);
  return rep.truncated ? exit_caps : exit_ok;
}

int cmd_detect_monomial_form(Context& c) {
  json maps = json::array();
  for (std::size_t i : c.selected_maps()) {
    json m{{"name", c.sys().name(i)}};
    const auto f = is_unitary_monomial_form(c.sys().generator(i));
    m["unitary_monomial"] = f.has_value();
    if (f) {
      json perm = json::array(), diag = json::array();
      for (unsigned p : f->permutation) perm.push_back(p + 1);
      for (const auto& d : f->diagonal) diag.push_back(d.to_string());
      m["form"] = {{"permutation", perm}, {"diagonal", diag}, {"exponent", f->exponent}};
    } else {
      m["form"] = nullptr;
    }
    maps.push_back(std::move(m));
  }
  c.out()["maps"] = maps;
  return exit_ok;
}

// ---------------------------------------------------------------------------
// verify-suite

struct CheckResult {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
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
  std::mt19937_64 rng_;
};

int cmd_verify_suite(Context& c) {
  const auto& sys = c.sys();
  const auto& cfg = c.cfg;
  const double tol = c.tol();
  const bool rational = sys.is_rational();
  const unsigned N = cfg.dimension;
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, const CheckResult& r) {
    const bool pass = r.violations == 0;
    all = all && pass;
    checks.push_back({{"name", name},
                      {"samples", r.samples},
                      {"violations", r.violations},
                      {"skipped", r.skipped},
                      {"pass", pass}});
  };
  std::uint64_t salt = 0;
  auto draw = [&] { return Draw(cfg.seed * 1000003 + ++salt); };

  {
    CheckResult r;
    auto d = draw();
    for (int t = 0; t < 50; ++t, ++r.samples) {
      if (cfg.order <= 2) {
        std::vector<BigRational> xs;
        std::vector<CyclotomicElement> coords;
        for (unsigned i = 0; i < N; ++i) {
          xs.push_back(d.rational(10000, 10000));
          coords.emplace_back(xs.back(), sys.order());
        }
        const Interval a = weil_height(AffinePoint(coords)).enclosure();
        const Interval b = place_by_place_height(xs);
        if (std::fabs(a.midpoint().to_double() - b.midpoint().to_double()) >= 1e-12) ++r.violations;
      } else {
        const auto p = d.point(N, cfg.order, 20, 20);
        const long k = static_cast<long>(sys.units()[d.integer(0, static_cast<long>(sys.units().size()) - 1)]);
        if (!weil_height(p).enclosure().overlaps(weil_height(p.galois_conjugate(k)).enclosure())) ++r.violations;
      }
    }
    record(cfg.order <= 2 ? "height-place-by-place" : "height-galois-invariance", r);
  }
  {
    CheckResult r;
    for (std::size_t i = 0; i < sys.size(); ++i, ++r.samples) {
      if (!verify_certificate(sys.lift(i), sys.certificate(i))) ++r.violations;
    }
    record("certificates-exact", r);
  }
  {
    CheckResult r;
    auto d = draw();
    for (std::size_t i = 0; i < sys.size(); ++i) {
      for (int t = 0; t < 40; ++t, ++r.samples) {
        const auto p = d.point(N, cfg.order, 30, 30);
        if (!archimedean_size_check(sys.lift(i), sys.constants(i), p).ok()) ++r.violations;
      }
    }
    record("size-bounds-archimedean", r);
  }
  if (rational) {
    CheckResult r;
    auto d = draw();
    for (std::size_t i = 0; i < sys.size(); ++i) {
      for (int t = 0; t < 20; ++t) {
        const auto p = d.point(N, 1, 30, 30);
        for (long prime : {2L, 3L, 5L, 7L}) {
          ++r.samples;
          if (!finite_size_check(sys.lift(i), sys.certificate(i), p, RationalPlace::prime(prime)).ok()) ++r.violations;
        }
      }
    }
    record("size-bounds-finite", r);
  }
  if (rational) {
    CheckResult r;
    auto d = draw();
    const AffinePoint zero(std::vector<CyclotomicElement>(N, CyclotomicElement(0)));
    for (int t = 0; t < 60; ++t) {
      Word w;
      for (int k = 0; k < 3; ++k) w.push_back(static_cast<unsigned>(d.integer(0, static_cast<long>(sys.size()) - 1)));
      const bool arch = t % 2 == 0;
      const RationalPlace v = arch ? RationalPlace::archimedean() : RationalPlace::prime(t % 4 == 1 ? 2 : 3);
      const BigRational th = growth_check(sys, zero, v, {}).threshold;
      std::vector<CyclotomicElement> coords;
      for (unsigned i = 0; i < N; ++i) coords.emplace_back(d.rational(5, 5));
      if (arch) {
        const BigRational q = d.rational(10, 10);
        coords[0] = CyclotomicElement(BigRational(th + q * q + BigRational(1, 100)));
      } else {
        const BigInt p = v.p();
        BigInt pk = p;
        while (BigRational(pk) <= th) pk *= p;
        coords[0] = CyclotomicElement(BigRational(BigInt(BigInt(d.integer(0, 20)) * p + 1), pk));
      }
      const auto g = growth_check(sys, AffinePoint(coords), v, w);
      if (!g.precondition_met) {
        ++r.skipped;
        continue;
      }
      ++r.samples;
      if (!g.strictly_increasing) ++r.violations;
    }
    record("growth-above-threshold", r);
  }
  {
    CheckResult r;
    auto d = draw();
    const auto cb = c_bound(sys);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const double two_c = 2 * cb.per_generator[i].upper();
      const double deg = sys.degree(i);
      for (int t = 0; t < 6; ++t) {
        const auto x = d.point(N, cfg.order, 12, 6);
        try {
          const auto hx = canonical_height_map(sys, i, x, tol).estimate;
          const auto hfx = canonical_height_map(sys, i, sys.apply(i, x), tol).estimate;
          const double h = weil_height(x).value();
          ++r.samples;
          if (hx.lower() < 0 || std::fabs(hx.value() - h) > two_c + tol ||
              std::fabs(hfx.value() - deg * hx.value()) > (deg + 1) * tol) {
            ++r.violations;
          }
        } catch (const cap_exceeded&) {
          ++r.skipped;
        }
      }
    }
    record("canonical-height-contracts", r);
  }
  {
    CheckResult r;
    auto d = draw();
    const double D = sys.degree_sum();
    const double s = static_cast<double>(sys.size());
    // Exact sums over s^n words; a looser tolerance keeps n small.
    const double loose = std::max(tol, 1e-3);
    SemigroupOptions so;
    so.max_words = std::size_t{1} << 12;
    for (int t = 0; t < 4; ++t) {
      const auto x = d.point(N, cfg.order, 6, 3);
      try {
        const double hx = canonical_height_semigroup(sys, x, loose, so).estimate.value();
        double sum = 0;
        for (std::size_t j = 0; j < sys.size(); ++j) {
          sum += canonical_height_semigroup(sys, sys.apply(j, x), loose, so).estimate.value();
        }
        ++r.samples;
        if (std::fabs(sum - D * hx) > (s + D) * loose) ++r.violations;
      } catch (const cap_exceeded&) {
        ++r.skipped;
      }
    }
    record("semigroup-height-identity", r);
  }
  {
    CheckResult r;
    const CandidateBox small = cfg.order <= 2 ? CandidateBox::rational(N, 2, 2)
                                              : CandidateBox::cyclotomic_integers(N, cfg.order, 1);
    for (const auto& p : small.enumerate(4096)) {
      const auto v = preperiodic_by_height(sys, p, tol, 4, 4);
      if (v.verdict != Preperiodicity::preperiodic_confirmed) continue;
      ++r.samples;
      if (v.estimate && v.estimate->upper() > tol) ++r.violations;
    }
    record("preperiodic-points-have-zero-height", r);
  }
  c.out()["checks"] = checks;
  c.out()["all_pass"] = all;
  return all ? exit_ok : exit_verify_failed;
}

const std::map<std::string, std::function<int(Context&)>>& handlers() {
  static const std::map<std::string, std::function<int(Context&)>> h{
      {"orbit", cmd_orbit},
      {"height", cmd_height},
      {"house", cmd_house},
      {"canh", cmd_canh},
      {"canh-semigroup", cmd_canh_semigroup},
      {"certify", cmd_certify},
      {"growth", cmd_growth},
      {"bounds", cmd_bounds},
      {"search-collisions", cmd_search_collisions},
      {"search-sigma", cmd_search_sigma},
      {"search-pi", cmd_search_pi},
      {"search-splitform", cmd_search_splitform},
      {"detect-monomial-form", cmd_detect_monomial_form},
      {"verify-suite", cmd_verify_suite},
  };
  return h;
}

json inputs_json(const SystemConfig& cfg, const RunOptions& o) {
  json maps = json::array();
  for (const auto& m : cfg.maps) {
    json comps = json::array();
    for (const auto& p : m.map.components()) comps.push_back(p.to_string());
    maps.push_back({{"name", m.name}, {"components", comps}});
  }
  json flags = json::object();
  auto put = [&](const char* k, const auto& v) {
    if (v) flags[k] = *v;
  };
  put("point", o.point);
  put("map", o.map);
  put("word", o.word);
  put("mode", o.mode);
  put("place", o.place);
  put("form", o.form);
  put("gamma", o.gamma);
  put("gamma_mode", o.gamma_mode);
  put("A", o.A);
  put("depth", o.depth);
  put("l_max", o.l_max);
  put("samples", o.samples);
  put("tol", o.tol);
  put("precision", o.precision);
  put("box_num", o.box_num);
  put("box_den", o.box_den);
  put("coeff_bound", o.coeff_bound);
  put("seed", o.seed);
  put("cap_words", o.cap_words);
  return json{{"config",
               {{"n", cfg.order},
                {"N", cfg.dimension},
                {"maps", maps},
                {"precision", o.precision.value_or(cfg.precision)},
                {"tolerance", cfg.tolerance},
                {"seed", cfg.seed}}},
              {"flags", flags}};
}

const char* status_of(int code) {
  switch (code) {
    case exit_ok:
      return "ok";
    case exit_usage:
      return "usage-error";
    case exit_caps:
      return "caps-exceeded";
    case exit_hypothesis:
      return "hypothesis-violated";
    case exit_parse:
      return "parse-error";
    case exit_verify_failed:
      return "verification-failed";
  }
  return "error";
}

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) {
    s = v.get<std::string>();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return s;
}

bool is_real(const json& v) { return v.is_object() && v.contains("value") && (v.contains("error") || v.contains("exact") || v.contains("unbounded")); }

}  // namespace

std::string report_to_csv(const json& report) {
  std::string out;
  const json& o = report.contains("outputs") ? report["outputs"] : json::object();
  if (o.contains("rows") && o["rows"].is_array()) {
    const auto& rows = o["rows"];
    if (rows.empty()) return out;
    std::vector<std::pair<std::string, bool>> cols;
    for (const auto& [k, v] : rows[0].items()) cols.emplace_back(k, is_real(v));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += cols[i].first;
      if (cols[i].second) out += "," + cols[i].first + "_error";
    }
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        const json& v = r[cols[i].first];
        if (cols[i].second) {
          const bool real_value = v.is_object();
          out += real_value ? csv_cell(v["value"]) : "";
          out += ",";
          out += real_value && v.contains("error") ? csv_cell(v["error"]) : (real_value ? "0" : "");
        } else {
          out += csv_cell(v);
        }
      }
      out += '\n';
    }
    return out;
  }
  out += "key,value,error\n";
  for (const auto& [k, v] : o.items()) {
    if (is_real(v)) {
      out += k + "," + csv_cell(v["value"]) + "," + (v.contains("error") ? csv_cell(v["error"]) : "0") + "\n";
    } else {
      out += k + "," + csv_cell(v) + ",\n";
    }
  }
  return out;
}

RunResult run(const std::string& command, const SystemConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  json& report = res.report;
  report["command"] = command;
  report["status"] = "ok";
  report["inputs"] = inputs_json(config, options);
  report["hypotheses"] = json::array();
  report["outputs"] = json::object();
  report["bounds"] = json::object();
  report["caps_hit"] = json::array();
  int code = exit_ok;
  std::string message;
  try {
    const auto& h = handlers();
    auto it = h.find(command);
    if (it == h.end()) throw usage_error("unknown command \"" + command + "\"");
    if (options.format != "json" && options.format != "csv") throw usage_error("--format must be json or csv");
    Context ctx{config, options, report, std::nullopt};
    code = it->second(ctx);
  } catch (const parse_error& e) {
    code = exit_parse;
    message = e.what();
  } catch (const hypothesis_error& e) {
    code = exit_hypothesis;
    message = e.what();
    report["hypotheses"].push_back(hypothesis("hypothesis", false, e.what()));
  } catch (const cap_exceeded& e) {
    code = exit_caps;
    message = e.what();
    report["caps_hit"].push_back(e.what());
  } catch (const std::exception& e) {
    code = exit_usage;
    message = e.what();
  }
  report["status"] = status_of(code);
  if (!message.empty()) report["error"] = message;
  if (options.timing) {
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  res.exit_code = code;
  res.output = options.format == "csv" && code != exit_usage ? report_to_csv(report) : report.dump(2) + "\n";
  return res;
}

}  // namespace arithdyn

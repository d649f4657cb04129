#pragma once

// Configuration files, command dispatch and run reports for the arithdyn tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "arithdyn/orbits.hpp"

namespace arithdyn {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_caps = 2,
  exit_hypothesis = 3,
  exit_parse = 4,
  exit_verify_failed = 5,
};

struct MapConfig {
  std::string name;
  AffineMorphism map;

  friend bool operator==(const MapConfig& a, const MapConfig& b) { return a.name == b.name && a.map == b.map; }
};

struct CapsConfig {
  unsigned depth = 6;
  std::size_t words = std::size_t{1} << 16;
  long box_num = 3;
  long box_den = 3;
  long coeff_bound = 1;
  std::size_t level_size = std::size_t{1} << 20;
  std::size_t point_bits = std::size_t{1} << 22;
  std::size_t candidates = std::size_t{1} << 16;

  friend bool operator==(const CapsConfig&, const CapsConfig&) = default;
};

struct SystemConfig {
  unsigned order = 1;
  unsigned dimension = 1;
  std::vector<MapConfig> maps;
  long precision = default_precision;
  double tolerance = 1e-8;
  CapsConfig caps;
  std::uint64_t seed = 1;
  unsigned e_max = 0;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Throws parse_error with the line and column of the offending JSON value.
SystemConfig parse_config(const std::string& text);
std::string emit_config(const SystemConfig& config);
SemigroupSystem make_system(const SystemConfig& config, std::optional<long> precision = std::nullopt);

/// Flags shared by the commands; unset values fall back to the config.
struct RunOptions {
  std::optional<std::string> point;
  std::optional<std::string> map;
  std::optional<std::string> word;
  std::optional<std::string> mode;
  std::optional<std::string> place;
  std::optional<std::string> form;
  std::optional<std::string> gamma;
  std::optional<std::string> gamma_mode;
  std::optional<std::string> A;
  std::optional<unsigned> depth;
  std::optional<unsigned> l_max;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::optional<long> precision;
  std::optional<long> box_num;
  std::optional<long> box_den;
  std::optional<long> coeff_bound;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap_words;
  std::string format = "json";
  bool timing = false;
};

const std::vector<std::string>& command_names();

struct RunResult {
  int exit_code = exit_ok;
  nlohmann::ordered_json report;
  /// JSON or CSV text, newline terminated.
  std::string output;
};

/// Never throws for bad input: failures become a report with a status and an
/// exit code.
RunResult run(const std::string& command, const SystemConfig& config, const RunOptions& options);

/// CSV projection of a report: its "rows" table when present, otherwise
/// key,value lines of the outputs.
std::string report_to_csv(const nlohmann::ordered_json& report);

}  // namespace arithdyn

// Command-line front end: arithdyn <command> --config system.json [flags]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "arithdyn/cli.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/parallel.hpp"

namespace {

template <class T>
void flag(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights and orbits of semigroups of polynomial maps over cyclotomic fields"};
  std::string command;
  std::string config_path;
  unsigned threads = 1;
  arithdyn::RunOptions o;

  std::string commands;
  for (const auto& c : arithdyn::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "one of: " + commands)->required();
  app.add_option("--config", config_path, "system config (JSON)")->required();
  flag(app, "--point", o.point, "affine point, e.g. \"3/2,5\" or \"1+z4\"");
  flag(app, "--map", o.map, "generator name");
  flag(app, "--word", o.word, "generator indices from 1, e.g. \"1 2 2\"");
  flag(app, "--mode", o.mode, "exact-sum|monte-carlo (canh-semigroup), single|multi (search-splitform)");
  flag(app, "--place", o.place, "inf or a prime");
  flag(app, "--form", o.form, "split multilinear form, e.g. \"T1 - T2\"");
  flag(app, "--gamma", o.gamma, "';'-separated integral points");
  flag(app, "--gamma-mode", o.gamma_mode, "free|constant");
  flag(app, "--A", o.A, "house bound A >= 1");
  flag(app, "--depth", o.depth, "orbit depth / n_max / k_max");
  flag(app, "--l-max", o.l_max, "return length for search-pi");
  flag(app, "--samples", o.samples, "monte-carlo samples");
  flag(app, "--tol", o.tol, "tolerance for canonical heights");
  flag(app, "--precision", o.precision, "MPFR precision in bits");
  flag(app, "--box-num", o.box_num, "numerator bound of the rational box");
  flag(app, "--box-den", o.box_den, "denominator bound of the rational box");
  flag(app, "--coeff-bound", o.coeff_bound, "coefficient bound of the cyclotomic box");
  flag(app, "--seed", o.seed, "random seed");
  flag(app, "--cap-words", o.cap_words, "cap on enumerated words");
  app.add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_flag("--timing", o.timing, "add wall_time_s to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : arithdyn::exit_usage;
  }
  arithdyn::set_worker_count(threads);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read " << config_path << "\n";
    return arithdyn::exit_usage;
  }
  std::stringstream text;
  text << in.rdbuf();
  arithdyn::SystemConfig config;
  try {
    config = arithdyn::parse_config(text.str());
  } catch (const arithdyn::parse_error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return arithdyn::exit_parse;
  }
  const auto result = arithdyn::run(command, config, o);
  std::cout << result.output;
  return result.exit_code;
}

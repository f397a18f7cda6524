// Batch verification harness: every check suite as a subcommand, JSON
// reports on stdout or --out, CSV summaries and plot data via --csv.
// Exit 0 iff every gated check in the requested scope passes; the nu
// exploration is informational and never gates.
#include "skewharmonic/report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using skewharmonic::report::Config;
using skewharmonic::report::SuiteResult;

struct CliValues {
  int p = 0;
  int q = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int grid_n = 0;
  double grid_l = 0.0;
  std::uint64_t mc_samples = 0;
  double s = 0.0;
  std::vector<std::string> tol_overrides;
  std::string config_path;
  std::string out_path;
  std::string csv_path;
};

// Defaults, then the config file, then explicit flags; the CLI11 counts say
// which flags were actually given.
Config resolve_config(const CLI::App& app, const CliValues& v) {
  Config cfg;
  if (!v.config_path.empty())
    cfg = skewharmonic::report::load_config_file(v.config_path, cfg);
  if (app.count("--p") > 0) cfg.p = v.p;
  if (app.count("--q") > 0) cfg.q = v.q;
  if (app.count("--trials") > 0) cfg.trials = v.trials;
  if (app.count("--seed") > 0) cfg.seed = v.seed;
  if (app.count("--grid-n") > 0) cfg.grid_n = v.grid_n;
  if (app.count("--grid-l") > 0) cfg.grid_l = v.grid_l;
  if (app.count("--mc-samples") > 0) cfg.mc_samples = v.mc_samples;
  if (app.count("--s") > 0) cfg.s = v.s;
  for (const std::string& kv : v.tol_overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
      throw std::invalid_argument("--tol-override expects KEY=VALUE, got '" +
                                  kv + "'");
    std::size_t used = 0;
    const std::string val = kv.substr(eq + 1);
    double parsed = 0.0;
    try {
      parsed = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--tol-override value is not a number: '" +
                                  kv + "'");
    }
    if (used != val.size())
      throw std::invalid_argument("--tol-override value is not a number: '" +
                                  kv + "'");
    cfg.tol_overrides[kv.substr(0, eq)] = parsed;
  }
  return cfg;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  out << text;
}

int run_verify(const std::string& suite, const Config& cfg,
               const CliValues& v) {
  namespace rep = skewharmonic::report;
  std::vector<SuiteResult> results;
  if (suite == "all") {
    results = rep::run_all_suites(cfg);
  } else if (suite == "skew") {
    results.push_back(rep::run_skew_suite(cfg));
  } else if (suite == "lie") {
    results.push_back(rep::run_lie_suite(cfg));
  } else if (suite == "nil") {
    results.push_back(rep::run_nil_suite(cfg));
  } else if (suite == "orbit") {
    results.push_back(rep::run_orbit_suite(cfg));
  } else if (suite == "zeta") {
    results.push_back(rep::run_zeta_suite(cfg));
  } else if (suite == "rep") {
    results.push_back(rep::run_rep_suite(cfg));
  }
  write_or_print(rep::report_json(results, cfg), v.out_path);
  if (!v.csv_path.empty()) write_or_print(rep::report_csv(results), v.csv_path);
  return rep::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewharmonic verification harness"};
  app.require_subcommand(1);
  app.fallthrough(false);

  CliValues v;
  auto add_common = [&v](CLI::App* cmd) {
    cmd->add_option("--p", v.p, "odd matrix dimension for dimension-swept suites");
    cmd->add_option("--q", v.q, "half rank of the skew coordinate space");
    cmd->add_option("--trials", v.trials, "random trials per check");
    cmd->add_option("--seed", v.seed, "base seed for all draw streams");
    cmd->add_option("--grid-n", v.grid_n, "grid points (power of two)");
    cmd->add_option("--grid-l", v.grid_l, "grid half width");
    cmd->add_option("--mc-samples", v.mc_samples, "Monte Carlo samples per side");
    cmd->add_option("--s", v.s, "zeta evaluation point");
    cmd->add_option("--tol-override", v.tol_overrides,
                    "KEY=VALUE tolerance override, repeatable");
    cmd->add_option("--config", v.config_path, "flat key-value config file");
    cmd->add_option("--out", v.out_path, "write the JSON report here");
    cmd->add_option("--csv", v.csv_path, "write CSV rows here");
  };

  std::string verify_suite;
  CLI::App* verify = app.add_subcommand("verify", "run a check suite");
  verify
      ->add_option("suite", verify_suite,
                   "one of skew, lie, nil, orbit, zeta, rep, all")
      ->required()
      ->check(CLI::IsMember({"skew", "lie", "nil", "orbit", "zeta", "rep", "all"}));
  add_common(verify);

  std::string explore_what;
  CLI::App* explore = app.add_subcommand("explore", "informational fits");
  explore->add_option("what", explore_what, "only 'nu' is defined")
      ->required()
      ->check(CLI::IsMember({"nu"}));
  add_common(explore);

  std::string emit_what;
  CLI::App* emit = app.add_subcommand("emit", "plot-ready data");
  emit->add_option("what", emit_what, "only 'plot-data' is defined")
      ->required()
      ->check(CLI::IsMember({"plot-data"}));
  add_common(emit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const Config cfg = resolve_config(*verify, v);
      return run_verify(verify_suite, cfg, v);
    }
    if (explore->parsed()) {
      const Config cfg = resolve_config(*explore, v);
      write_or_print(skewharmonic::report::explore_nu_json(cfg), v.out_path);
      return 0;
    }
    const Config cfg = resolve_config(*emit, v);
    write_or_print(skewharmonic::report::plot_data_csv(cfg),
                   v.csv_path.empty() ? v.out_path : v.csv_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// Run configuration shared by the command-line harness and the acceptance
// driver: numeric knobs, the base seed, and named tolerance overrides.
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace skewharmonic::report {

struct Config {
  int p = 3;
  int q = 2;
  int trials = 200;
  std::uint64_t seed = 42;
  int grid_n = 256;
  double grid_l = 8.0;
  std::uint64_t mc_samples = 1000000;
  double s = 0.7;
  // Keyed by check name; replaces that check's gate tolerance.
  std::map<std::string, double> tol_overrides;
};

// Flat key-value text: one `key = value` per line, `#` comments, blank lines
// ignored. Keys: p, q, trials, seed, grid.N, grid.L, mc.samples, s, and
// tol.<check-name>. Unknown keys or unparseable values throw
// std::invalid_argument with the offending line.
Config load_config_file(const std::string& path, const Config& base = Config{});

// The same parser on in-memory text (the file loader delegates here).
Config parse_config_text(const std::string& text, const Config& base,
                         const std::string& origin);

}  // namespace skewharmonic::report

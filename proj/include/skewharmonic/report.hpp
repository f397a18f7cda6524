// Check records, verification suites, and the JSON/CSV report surface.
// Every suite is a pure function of the Config, so a report is reproducible
// bit-for-bit outside its timing fields.
#pragma once

#include "skewharmonic/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace skewharmonic::report {

// One verified identity. pass is residual <= tolerance always; for Monte
// Carlo checks the builder sets tolerance = 3 * stderr before gating, so the
// invariant reads the same for both kinds.
struct CheckResult {
  std::string name;    // stable snake_case identifier, also the tol.* key
  std::string anchor;  // one-line statement of the identity being gated
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<double> stderr_;  // Monte Carlo checks only
  std::optional<std::uint64_t> seed;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;
};

// residual <= tolerance, with the tolerance replaced by any tol_overrides
// entry matching `name`.
CheckResult make_check(const Config& cfg, const std::string& name,
                       const std::string& anchor, double residual,
                       double tolerance);
// Monte Carlo variant: gate at 3 * stderr (still override-able by name).
CheckResult make_mc_check(const Config& cfg, const std::string& name,
                          const std::string& anchor, double residual,
                          double stderr_combined, std::uint64_t seed);

// Verification suites. Each runs its module's gated checks at the Config's
// sizes and returns per-check records; nothing is printed here.
SuiteResult run_skew_suite(const Config& cfg);
SuiteResult run_lie_suite(const Config& cfg);
SuiteResult run_nil_suite(const Config& cfg);
SuiteResult run_orbit_suite(const Config& cfg);
SuiteResult run_zeta_suite(const Config& cfg);
SuiteResult run_rep_suite(const Config& cfg);

// All six, in the fixed order above.
std::vector<SuiteResult> run_all_suites(const Config& cfg);

bool all_pass(const std::vector<SuiteResult>& suites);

// UTF-8 JSON document, schema "skewharmonic-report/1". Top-level keys:
// schema, tool, rng, config, suites, all_pass, wall_ms. Key order is fixed;
// with wall_ms keys removed the serialization is byte-identical across runs
// with the same config and seed.
std::string report_json(const std::vector<SuiteResult>& suites, const Config& cfg);

// The same document with every wall_ms key dropped (the reproducibility
// comparand).
std::string report_json_no_timing(const std::vector<SuiteResult>& suites,
                                  const Config& cfg);

// CSV rows `check,param,residual,tolerance,stderr` (header included); param
// is the suite name for suite checks.
std::string report_csv(const std::vector<SuiteResult>& suites);

// Exploratory nu-compatibility fit as JSON; informational, never a gate.
std::string explore_nu_json(const Config& cfg);

// Residual-versus-grid-size curves (transform roundtrip, fractional
// unitarizer Parseval, representation homomorphism) as the same CSV shape
// with param = N.
std::string plot_data_csv(const Config& cfg);

}  // namespace skewharmonic::report

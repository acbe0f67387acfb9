#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mns/diagnostics.hpp"
#include "mns/solver.hpp"

namespace mns::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsageError = 2,
  kSolverFailure = 3,
  kBlowup = 4,
};

enum class InitialData { taylor_green, divfree_bump, shear_flow, snapshot };

struct RunConfig {
  solver::SolverConfig solver;
  InitialData initial = InitialData::taylor_green;
  double amplitude = 1.0;
  double bump_radius = 0.9;
  fields::Point bump_center{0.0, 0.0, 0.0};
  /// Snapshot path, resolved against the config file's directory.
  std::filesystem::path snapshot;
  std::filesystem::path output = "out";
  /// Diagnostics sample stride.
  int stride = 1;
  /// Output sample intervals on [0, horizon]; 0 keeps the solver's own samples.
  int samples = 0;
  /// Sup-norm excursion slack.
  double supnorm_slack = 0.0;
  std::vector<double> gammas{0.4, 0.2, 0.1, 0.05, 0.0};
  std::vector<int> alphas{1, 2};
  std::vector<double> nus{1.0, 2.0};

  void validate() const;
};

/// Config parse or validation problem; maps to kUsageError.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" text, '#' starts a comment. Unknown or repeated keys
/// are rejected. Numbers accept a trailing "pi" factor ("2pi").
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical "key = value" listing of every field; parse_config of the
/// result reproduces the config.
std::string config_text(const RunConfig& cfg);

fields::VectorField initial_field(const RunConfig& cfg);

/// Output sample times (empty when samples = 0).
std::vector<double> output_times(const RunConfig& cfg);

/// Solve, then write snap_NNNNN.mnsf per sample, diagnostics.csv,
/// supnorm.csv, gradient_probe.csv and manifest.txt into out_dir.
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// kind is gamma, alpha or nu; writes sweep.csv, sweep_summary.txt and
/// manifest.txt.
int cmd_sweep(const RunConfig& cfg, const std::string& kind, const std::filesystem::path& out_dir,
              std::ostream& log);

/// Initial-data scaling ratios for each configured alpha.
int cmd_scale_check(const RunConfig& cfg, std::ostream& log);

/// Navier-Stokes pressure of the initial data; writes pressure_gradient.mnsf
/// and pressure.txt.
int cmd_pressure(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Norm table of the initial data.
int cmd_norms(const RunConfig& cfg, std::ostream& log);

// ---------------------------------------------------------------------------
// Property suites

/// One property check: passed = (measured relation tolerance), relation one
/// of "<=", "<", ">=" or "==".
struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation = "<=";
  double tolerance = 0.0;
  bool passed = false;
};

Check make_check(std::string name, double measured, const std::string& relation, double tolerance);

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Random fields per suite.
  int fields = 50;
  int points = 32;
  /// Random fields for the mollifier inequalities.
  int mollifier_fields = 20;
};

std::vector<Check> suite_helmholtz(const SuiteOptions& opt);
std::vector<Check> suite_kernels(const SuiteOptions& opt);
std::vector<Check> suite_mollifier(const SuiteOptions& opt);
std::vector<Check> suite_energy(const SuiteOptions& opt);
std::vector<Check> suite_equivalence(const SuiteOptions& opt);
std::vector<Check> suite_scaling(const SuiteOptions& opt);

const std::vector<std::string>& suite_names();

/// Runs one suite (or "all"), prints one line per check, returns kOk,
/// kCheckFailed, or kUsageError for an unknown suite.
int cmd_verify(const std::string& suite, const SuiteOptions& opt, std::ostream& log);

void print_checks(std::ostream& out, const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

}  // namespace mns::cli

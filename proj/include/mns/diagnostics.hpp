#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mns/solver.hpp"

namespace mns::diagnostics {

using fields::VectorField;
using solver::SolverConfig;
using solver::Trajectory;

/// One CSV row. budget_residual = |u(t)|^2_{L2} + 2 nu cumdiss(t) - |u_o|^2_{L2};
/// supratio is the running sup of |u|_inf over [0, t] divided by |u_o|_inf.
struct SampleRow {
  double t = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double hm = 0.0;
  double diss = 0.0;
  double cumdiss = 0.0;
  double budget_residual = 0.0;
  double divres = 0.0;
  double supratio = 0.0;
};

struct DiagnosticsSeries {
  std::vector<SampleRow> rows;
  double nu = 1.0;
  int sobolev_order = 0;
  /// |u_o|^2_{L2} of the first sample.
  double e0 = 0.0;
  /// Largest |budget_residual| / e0 (0 when e0 = 0).
  double max_relative_residual = 0.0;
  /// Largest |u(t)|_{L2} - |u_o|_{L2} over the samples.
  double max_l2_excess = 0.0;
};

inline constexpr const char* kSeriesHeader = "t,L2,Linf,Hm,diss,cumdiss,budget_residual,divres,supratio";

/// Sum_j <d_j u, d_j u> by Parseval.
double dissipation(const VectorField& u);

/// Energy budget on every stride-th sample (the last sample is always kept),
/// with the time integral taken by the trapezoid rule on those samples.
/// Throws std::invalid_argument for an empty trajectory.
DiagnosticsSeries energy_budget(const Trajectory& traj, double nu, int sobolev_order = 2, int stride = 1);

void write_series_csv(std::ostream& out, const DiagnosticsSeries& series);

struct SupnormReport {
  std::vector<double> times;
  /// |u(t)|_inf / |u_o|_inf.
  std::vector<double> ratios;
  /// Running sup of ratios.
  std::vector<double> running;
  /// Sample times with ratio above 1 + slack.
  std::vector<double> excursions;
  double slack = 0.0;
  double max_ratio = 0.0;
  /// True when no sample after t = 0 reaches ratio 1.
  bool attained_only_at_start = true;
  bool linear = false;
};

class ContractionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sup-norm ratio series against u_o. Nonlinear runs only flag excursions;
/// linear runs throw ContractionViolation when the ratio exceeds 1 + 1e-10.
SupnormReport supnorm_monitor(const Trajectory& traj, const VectorField& u_o, bool linear = false,
                              double slack = 0.0);

struct GradientProbe {
  int component = 0;
  int direction = 0;
  /// sup_t |d_j u_i(t)|_inf.
  double lhs = 0.0;
  /// |u_o|_inf^{5/2} |u_o|_{L2}.
  double shape = 0.0;
  /// 2 |d_j u_{o,i}|_inf.
  double gradient_term = 0.0;
  /// (lhs - gradient_term) / shape, 0 when shape = 0.
  double implied_constant = 0.0;
};

/// Nine entries ordered by (component, direction).
std::vector<GradientProbe> gradient_bound_probe(const Trajectory& traj, const VectorField& u_o);

/// Largest |div u|_inf over the samples.
double divfree_residual(const Trajectory& traj);

/// sup over common sample times of |a(t) - b(t)|_inf.
double sup_linf_distance(const Trajectory& a, const Trajectory& b);

struct SweepReport {
  std::string kind;
  std::vector<double> parameters;
  /// Symmetric matrix of sup-over-time L_inf distances (gamma sweeps).
  std::vector<std::vector<double>> distances;
  /// Per parameter: distance to the reference (gamma = 0), or the relative
  /// covariance / transport error (alpha, nu sweeps).
  std::vector<double> errors;
  /// Fitted slope of log error against log parameter over positive entries.
  double order = 0.0;
  double tolerance = 0.0;
  bool monotone = false;
  bool order_ok = false;
  bool within_tolerance = false;
  bool passed = false;
};

/// Worker count: MNS_THREADS when set and positive, else the hardware count.
int worker_count();

/// Solves from u_o for each gamma (descending, containing 0) on the common
/// sample times and compares every solution with the gamma = 0 one. Solve
/// failures are rethrown with the offending gamma in the message, as
/// solver::ConfigError for configuration problems and std::runtime_error
/// otherwise (likewise for the alpha and nu sweeps).
SweepReport gamma_sweep(const VectorField& u_o, const std::vector<double>& gammas, const SolverConfig& cfg,
                        const std::vector<double>& times);

/// For each alpha, the relative L_inf error of scaled_solve against the base
/// solve, sup over the sample times.
SweepReport alpha_sweep(const VectorField& u_o, const std::vector<int>& alphas, const SolverConfig& cfg,
                        const std::vector<double>& times, double tolerance = 1e-3);

/// For each nu, the relative L2 error of viscosity_transport against the
/// direct solve at that viscosity, sup over the sample times.
SweepReport nu_sweep(const VectorField& u_o, const std::vector<double>& nus, const SolverConfig& cfg,
                     const std::vector<double>& times, double tolerance = 1e-5);

void write_sweep_csv(std::ostream& out, const SweepReport& report);
void write_sweep_summary(std::ostream& out, const SweepReport& report);

/// n + 1 uniform times on [0, horizon].
std::vector<double> uniform_times(double horizon, int n);

}  // namespace mns::diagnostics

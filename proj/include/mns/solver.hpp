#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mns/fields.hpp"
#include "mns/kernels.hpp"

namespace mns::solver {

using fields::TorusGrid;
using fields::VectorField;
using fields::VectorSpectrum;

enum class Method { picard, direct };
enum class Provenance { picard, direct, rescaled };

const char* to_string(Method m);
const char* to_string(Provenance p);

/// Calibrated slab constant c_slab for Sobolev order m in [0, 7]: the step
/// rule is c_slab / |u_o|^2_{H^m}.
double calibrated_slab_constant(int m);

struct SolverConfig {
  TorusGrid grid{2.0 * 3.141592653589793, 32};
  double gamma = 0.0;
  double nu = 1.0;
  int sobolev_order = 7;
  double horizon = 1.0;
  /// Uniform substeps M per Picard slab.
  int substeps = 16;
  double picard_tolerance = 1e-10;
  int max_picard_iterations = 40;
  /// c_slab; non-positive selects calibrated_slab_constant(sobolev_order).
  double slab_constant = 0.0;
  /// Maximum slab halvings after a Picard failure.
  int max_halvings = 6;
  bool dealias = true;
  /// false drops the nonlinear term (heat flow only).
  bool nonlinear = true;
  /// Blow-up guard: alert when |u|_inf > blowup_factor * |u_o|_inf.
  double blowup_factor = 1e3;
  /// Direct stepper: largest time step and CFL limit on dt |u|_inf k_max.
  double direct_dt = 2e-3;
  double cfl_limit = 2.0;
  Method method = Method::picard;

  void validate() const;
  double slab_coefficient() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Time samples t_0 < ... < t_n with one field each on a common grid.
class Trajectory {
 public:
  explicit Trajectory(Provenance p = Provenance::picard) : provenance_(p) {}

  void append(double t, VectorField f);
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<VectorField>& fields() const { return fields_; }
  const VectorField& field(std::size_t i) const { return fields_[i]; }
  const VectorField& back() const { return fields_.back(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }
  const TorusGrid& grid() const { return fields_.front().grid(); }

  /// Cubic Lagrange interpolation on the four samples nearest t (fewer when
  /// the trajectory is short). Exact at sample times.
  VectorField at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<VectorField> fields_;
  Provenance provenance_;
};

struct PicardState {
  double t0 = 0.0;
  double t1 = 0.0;
  int iterations = 0;
  bool converged = false;
  int halvings = 0;
  /// sup over slab nodes of |u^{n+1} - u^n|_{H^m} / |u_o|_{H^m}, per iteration.
  std::vector<double> residuals;
  /// residuals[n] / residuals[n - 1].
  std::vector<double> ratios;
  /// sup over slab nodes of |u^n|_{H^m} per iterate, starting with the guess.
  std::vector<double> ball_norms;
  /// 2 |u_o|_{H^m}.
  double ball_radius = 0.0;
};

/// Fields at the nodes t0 + l h of one slab.
struct SlabIterate {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<VectorSpectrum> nodes;
};

/// S_gamma(u) at every node of the slab: heat flow of u_o over (t - t0) minus
/// the Oseen Duhamel integral of the mollified flux J(u_j) u.
SlabIterate apply_S(const SlabIterate& u, const VectorSpectrum& u_o, const SolverConfig& cfg);
Trajectory apply_S(const Trajectory& u, const VectorField& u_o, const SolverConfig& cfg);

/// min(c_slab / |u_o|^2_{H^m}, remaining); remaining when u_o = 0.
double step_rule(const VectorField& u_o, const SolverConfig& cfg, double remaining);
double step_rule(const VectorField& u_o, const SolverConfig& cfg);

struct SlabResult {
  Trajectory trajectory;
  PicardState state;
};

class PicardFailure : public std::runtime_error {
 public:
  PicardFailure(const std::string& what, Trajectory partial, std::vector<PicardState> slabs)
      : std::runtime_error(what), partial_(std::move(partial)), slabs_(std::move(slabs)) {}
  const Trajectory& partial() const { return partial_; }
  const std::vector<PicardState>& slabs() const { return slabs_; }

 private:
  Trajectory partial_;
  std::vector<PicardState> slabs_;
};

/// Picard iteration u <- S(u) on [t0, t0 + slab] from the heat-flow guess.
/// Stops when the relative residual drops below the tolerance; reports
/// non-convergence (including leaving the 2|u_o| ball) in the state.
SlabResult picard_solve_slab(const VectorField& u_o, double t0, double slab, const SolverConfig& cfg);
SlabResult picard_solve_slab(const VectorField& u_o, double slab, const SolverConfig& cfg);

struct Solution {
  Trajectory trajectory;
  std::vector<PicardState> slabs;
  bool blowup_alert = false;
  double blowup_time = 0.0;
  /// Direct stepper step count.
  long steps = 0;
};

/// Chains Picard slabs from t = 0 to the horizon, restarting each slab from
/// the previous terminal field and halving a slab after non-convergence.
/// Throws PicardFailure (with the partial trajectory) after max_halvings.
/// Heat-only runs (nonlinear = false) use a single slab over the horizon.
Solution continue_solve(const VectorField& u_o, const SolverConfig& cfg);

class CflViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponential time differencing RK4 (Cox-Matthews) for du/dt = nu Lap u - P[sum_j J(u_j) d_j u].
/// Samples at the given times (default: every step), with steps no longer
/// than direct_dt landing exactly on each sample.
Solution direct_stepper(const VectorField& u_o, const SolverConfig& cfg, std::vector<double> times = {});

/// Dispatch on cfg.method. Picard output carries its own node times; when
/// times are given the Picard trajectory is interpolated onto them.
Solution solve(const VectorField& u_o, const SolverConfig& cfg, const std::vector<double>& times = {});

/// (x, t) -> amplitude * traj(x / space, t * time) at the requested times,
/// spectral dilation in space and cubic interpolation in time.
Trajectory transport(const Trajectory& traj, int space, double time, double amplitude,
                     const std::vector<double>& times);

/// (x', t') -> alpha^{-1} traj(x' / alpha, t' / alpha^2); default times are
/// the sample times scaled by alpha^2.
Trajectory rescale_solution(const Trajectory& traj, int alpha, std::vector<double> times = {});

/// Solves from u_o^alpha with mollifier gamma / alpha and rescales back.
Trajectory scaled_solve(const VectorField& u_o, int alpha, const SolverConfig& cfg, const std::vector<double>& times);

/// Solves at viscosity 1 from u_o(x nu) with mollifier gamma / nu over
/// [0, T / nu] and returns u(x, t) = u^(x / nu, t / nu) at the given times.
/// Throws ConfigError when nu is not a positive integer or the support of
/// u_o does not fit the contracted box.
Trajectory viscosity_transport(const VectorField& u_o, double nu, const SolverConfig& cfg,
                               const std::vector<double>& times);

/// Largest |div u|_inf / |u|_inf over the trajectory (0 for zero fields).
double max_relative_divergence(const Trajectory& traj);

}  // namespace mns::solver

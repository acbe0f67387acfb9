#include <cmath>

#include "mns/helmholtz.hpp"
#include "mns/solver.hpp"

namespace mns::solver {

namespace {

int positive_integer(double v, const char* what) {
  const double r = std::round(v);
  if (!(r >= 1.0) || std::abs(v - r) > 1e-12 * r) throw ConfigError(std::string(what) + " must be a positive integer");
  return static_cast<int>(r);
}

// f(x factor) for the periodic field f: mode n moves to factor * n, and modes
// pushed past the Nyquist band are dropped rather than aliased.
VectorField periodic_compose(const VectorField& f, int factor) {
  const auto& g = f.grid();
  const int half = g.points() / 2;
  const int n = g.points();
  const auto in = fields::to_spectral(f);
  VectorSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const int mx = factor * nx, my = factor * ny, mz = factor * nz;
    if (std::abs(mx) >= half || std::abs(my) >= half || std::abs(mz) >= half) return;
    if (g.is_nyquist(nx) || g.is_nyquist(ny) || g.is_nyquist(nz)) return;
    const std::size_t dst = g.spectral_index(mx, (my + n) % n, (mz + n) % n);
    for (int c = 0; c < 3; ++c) out.component(c)[dst] = in.component(c)[idx];
  });
  return fields::to_real(out, false);
}

std::vector<double> scaled_times(const std::vector<double>& times, double factor) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(t * factor);
  return out;
}

}  // namespace

Trajectory transport(const Trajectory& traj, int space, double time, double amplitude,
                     const std::vector<double>& times) {
  if (space < 1) throw ConfigError("transport: space factor must be a positive integer");
  Trajectory out(Provenance::rescaled);
  for (double t : times) {
    auto f = traj.at(t * time);
    if (space != 1) f = fields::dilate_coordinates(f, space);
    if (amplitude != 1.0) f *= amplitude;
    out.append(t, std::move(f));
  }
  return out;
}

Trajectory rescale_solution(const Trajectory& traj, int alpha, std::vector<double> times) {
  if (alpha < 1) throw ConfigError("rescale_solution: alpha must be a positive integer");
  const double a2 = static_cast<double>(alpha) * alpha;
  if (times.empty()) times = scaled_times(traj.times(), a2);
  return transport(traj, alpha, 1.0 / a2, 1.0 / alpha, times);
}

Trajectory scaled_solve(const VectorField& u_o, int alpha, const SolverConfig& cfg, const std::vector<double>& times) {
  if (alpha < 1) throw ConfigError("scaled_solve: alpha must be a positive integer");
  if (times.empty()) throw std::invalid_argument("scaled_solve: no sample times");
  const double a2 = static_cast<double>(alpha) * alpha;
  SolverConfig c = cfg;
  c.gamma = cfg.gamma / alpha;
  c.horizon = times.back() / a2;
  c.direct_dt = cfg.direct_dt / a2;
  const auto sol = solve(fields::apply_initial_scaling(u_o, alpha), c, scaled_times(times, 1.0 / a2));
  if (sol.blowup_alert) throw std::runtime_error("scaled_solve: blow-up guard triggered");
  return rescale_solution(sol.trajectory, alpha, times);
}

Trajectory viscosity_transport(const VectorField& u_o, double nu, const SolverConfig& cfg,
                               const std::vector<double>& times) {
  const int v = positive_integer(nu, "viscosity_transport: nu");
  if (u_o.grid().points() % v != 0) throw ConfigError("viscosity_transport: N must be divisible by nu");
  if (times.empty()) throw std::invalid_argument("viscosity_transport: no sample times");
  if (v == 1) {
    SolverConfig c = cfg;
    c.nu = 1.0;
    c.horizon = times.back();
    auto sol = solve(u_o, c, times);
    return std::move(sol.trajectory);
  }
  SolverConfig c = cfg;
  c.nu = 1.0;
  c.gamma = cfg.gamma / v;
  c.horizon = times.back() / v;
  c.direct_dt = cfg.direct_dt / v;
  const auto start = helmholtz::leray_project(periodic_compose(u_o, v));
  const auto sol = solve(start, c, scaled_times(times, 1.0 / v));
  if (sol.blowup_alert) throw std::runtime_error("viscosity_transport: blow-up guard triggered");
  return transport(sol.trajectory, v, 1.0 / v, 1.0, times);
}

}  // namespace mns::solver

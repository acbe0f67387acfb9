#include <algorithm>
#include <cmath>
#include <limits>

#include "mns/helmholtz.hpp"
#include "mns/solver.hpp"

namespace mns::solver {

namespace {

// Frozen output of tools/calibrate_slab (Taylor-Green, A = 1, L = 2 pi, N = 32,
// nu = 0.1, gamma = 0, M = 16): largest slab with first contraction ratio
// <= 0.45, times |u_o|^2_{H^m}. Orders 0 and 1 stay below 0.45 up to the
// bracket end (slab 4) and carry that value.
constexpr double kSlabConstants[8] = {
    2.480501e+02, 3.968801e+03, 8.332124e+03, 1.934945e+04, 3.645376e+04, 5.923987e+04, 8.622887e+04, 1.151993e+05,
};

double hm_norm(const VectorSpectrum& s, int m) { return fields::norm(s, fields::Norm::hm(m), std::max(m, 0)); }

double linf_of(const VectorField& f) { return fields::norm(f, fields::Norm::linf()); }

struct SlabOutcome {
  SlabIterate iterate;
  PicardState state;
};

SlabIterate heat_guess(const VectorSpectrum& u_o, double t0, double h, int m, double nu) {
  SlabIterate it{t0, h, {}};
  it.nodes.reserve(m + 1);
  it.nodes.push_back(u_o);
  for (int l = 1; l <= m; ++l) it.nodes.push_back(kernels::heat_multiply(u_o, l * h, nu));
  return it;
}

double sup_distance(const SlabIterate& a, const SlabIterate& b, int m) {
  double d = 0.0;
  for (std::size_t l = 0; l < a.nodes.size(); ++l) {
    VectorSpectrum diff = a.nodes[l];
    diff -= b.nodes[l];
    d = std::max(d, hm_norm(diff, m));
  }
  return d;
}

double sup_norm(const SlabIterate& a, int m) {
  double d = 0.0;
  for (const auto& n : a.nodes) d = std::max(d, hm_norm(n, m));
  return d;
}

SlabOutcome picard_spectral(const VectorSpectrum& u_o, double t0, double slab, const SolverConfig& cfg) {
  const int m = cfg.sobolev_order;
  const double h = slab / cfg.substeps;
  SlabOutcome out{heat_guess(u_o, t0, h, cfg.substeps, cfg.nu), PicardState{}};
  auto& st = out.state;
  st.t0 = t0;
  st.t1 = t0 + slab;
  const double base = hm_norm(u_o, m);
  st.ball_radius = 2.0 * base;
  st.ball_norms.push_back(sup_norm(out.iterate, m));
  const double scale = base > 0.0 ? base : 1.0;
  const double ball_limit = st.ball_radius + cfg.picard_tolerance * scale;
  for (int n = 1; n <= cfg.max_picard_iterations; ++n) {
    auto next = apply_S(out.iterate, u_o, cfg);
    const double r = sup_distance(next, out.iterate, m) / scale;
    out.iterate = std::move(next);
    st.iterations = n;
    st.ball_norms.push_back(sup_norm(out.iterate, m));
    if (!st.residuals.empty()) st.ratios.push_back(st.residuals.back() > 0.0 ? r / st.residuals.back() : 0.0);
    st.residuals.push_back(r);
    if (!std::isfinite(r) || st.ball_norms.back() > ball_limit) return out;
    if (r < cfg.picard_tolerance) {
      st.converged = true;
      return out;
    }
  }
  return out;
}

Trajectory to_trajectory(const SlabIterate& it, double t1, const VectorField* first) {
  Trajectory traj(Provenance::picard);
  const int m = static_cast<int>(it.nodes.size()) - 1;
  for (int l = 0; l <= m; ++l) {
    const double t = l == m ? t1 : it.t0 + l * it.h;
    if (l == 0 && first != nullptr) {
      traj.append(t, *first);
    } else {
      traj.append(t, fields::to_real(it.nodes[l], false));
    }
  }
  return traj;
}

SlabIterate to_iterate(const Trajectory& u) {
  if (u.size() < 4) throw std::invalid_argument("apply_S: slab needs at least 4 nodes");
  const auto& t = u.times();
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t l = 0; l < t.size(); ++l) {
    if (std::abs(t[l] - (t.front() + l * h)) > 1e-9 * std::max(1.0, std::abs(t.back())))
      throw std::invalid_argument("apply_S: nodes are not uniform");
  }
  SlabIterate it{t.front(), h, {}};
  for (const auto& f : u.fields()) it.nodes.push_back(fields::to_spectral(f));
  return it;
}

}  // namespace

const char* to_string(Method m) { return m == Method::picard ? "picard" : "direct"; }

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::picard: return "picard";
    case Provenance::direct: return "direct";
    case Provenance::rescaled: return "rescaled";
  }
  return "unknown";
}

double calibrated_slab_constant(int m) {
  if (m < 0 || m > 7) throw ConfigError("calibrated_slab_constant: order must lie in [0, 7]");
  return kSlabConstants[m];
}

void SolverConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
  need(std::isfinite(nu) && nu > 0.0, "nu must be > 0");
  need(sobolev_order >= 0 && sobolev_order <= fields::kDefaultMaxSobolevOrder, "sobolev_order must lie in [0, 7]");
  need(std::isfinite(horizon) && horizon >= 0.0, "horizon must be >= 0");
  need(substeps >= 4, "substeps must be >= 4");
  need(std::isfinite(picard_tolerance) && picard_tolerance > 0.0, "picard_tolerance must be > 0");
  need(max_picard_iterations >= 1, "max_picard_iterations must be >= 1");
  need(std::isfinite(slab_constant), "slab_constant must be finite");
  need(max_halvings >= 0, "max_halvings must be >= 0");
  need(blowup_factor > 0.0, "blowup_factor must be positive");
  need(std::isfinite(direct_dt) && direct_dt > 0.0, "direct_dt must be > 0");
  need(cfl_limit > 0.0, "cfl_limit must be > 0");
}

double SolverConfig::slab_coefficient() const {
  return slab_constant > 0.0 ? slab_constant : calibrated_slab_constant(sobolev_order);
}

void Trajectory::append(double t, VectorField f) {
  if (!times_.empty()) {
    if (!(t > times_.back())) throw std::invalid_argument("Trajectory: times must increase strictly");
    fields::require_same_grid(fields_.front().grid(), f.grid(), "Trajectory");
  }
  times_.push_back(t);
  fields_.push_back(std::move(f));
}

VectorField Trajectory::at(double t) const {
  if (empty()) throw std::out_of_range("Trajectory::at: empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(end()));
  if (t < start() - slack || t > end() + slack) throw std::out_of_range("Trajectory::at: time outside range");
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it != times_.end() && *it == t) return fields_[it - times_.begin()];
  if (std::abs(t - start()) <= slack) return fields_.front();
  if (std::abs(t - end()) <= slack) return fields_.back();
  const int n = static_cast<int>(size());
  const int right = static_cast<int>(it - times_.begin());
  const int width = std::min(4, n);
  const int first = std::clamp(right - 2, 0, n - width);
  VectorField out(grid());
  for (int q = first; q < first + width; ++q) {
    double w = 1.0;
    for (int p = first; p < first + width; ++p)
      if (p != q) w *= (t - times_[p]) / (times_[q] - times_[p]);
    for (int c = 0; c < 3; ++c) {
      auto dst = out.mutable_component(c);
      const auto src = fields_[q].component(c);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * src[i];
    }
  }
  return out;
}

SlabIterate apply_S(const SlabIterate& u, const VectorSpectrum& u_o, const SolverConfig& cfg) {
  if (u.nodes.size() < 4) throw std::invalid_argument("apply_S: slab needs at least 4 nodes");
  const int m = static_cast<int>(u.nodes.size()) - 1;
  const auto& grid = u_o.grid();
  for (const auto& n : u.nodes) fields::require_same_grid(grid, n.grid(), "apply_S");
  SlabIterate out{u.t0, u.h, {}};
  out.nodes.reserve(m + 1);
  if (!cfg.nonlinear) {
    out.nodes.push_back(u_o);
    for (int l = 1; l <= m; ++l) out.nodes.push_back(kernels::heat_multiply(u_o, l * u.h, cfg.nu));
    return out;
  }
  const kernels::Mollifier mol(cfg.gamma);
  kernels::SlabSamples f;
  f.t0 = u.t0;
  f.h = u.h;
  f.values.reserve(m + 1);
  for (const auto& n : u.nodes) f.values.push_back(kernels::projected_flux_divergence(kernels::mollified_flux(n, mol, cfg.dealias)));
  const auto integral = kernels::duhamel_nodes(f, cfg.nu);
  out.nodes.push_back(u_o);
  for (int l = 1; l <= m; ++l) {
    auto v = kernels::heat_multiply(u_o, l * u.h, cfg.nu);
    v -= integral[l];
    out.nodes.push_back(std::move(v));
  }
  return out;
}

Trajectory apply_S(const Trajectory& u, const VectorField& u_o, const SolverConfig& cfg) {
  const auto it = apply_S(to_iterate(u), fields::to_spectral(u_o), cfg);
  return to_trajectory(it, u.end(), &u_o);
}

double step_rule(const VectorField& u_o, const SolverConfig& cfg, double remaining) {
  const double n = fields::norm(u_o, fields::Norm::hm(cfg.sobolev_order), std::max(cfg.sobolev_order, 0));
  if (n == 0.0) return remaining;
  return std::min(cfg.slab_coefficient() / (n * n), remaining);
}

double step_rule(const VectorField& u_o, const SolverConfig& cfg) { return step_rule(u_o, cfg, cfg.horizon); }

SlabResult picard_solve_slab(const VectorField& u_o, double t0, double slab, const SolverConfig& cfg) {
  cfg.validate();
  if (!(slab > 0.0)) throw std::invalid_argument("picard_solve_slab: slab must be positive");
  auto o = picard_spectral(fields::to_spectral(u_o), t0, slab, cfg);
  return SlabResult{to_trajectory(o.iterate, t0 + slab, &u_o), std::move(o.state)};
}

SlabResult picard_solve_slab(const VectorField& u_o, double slab, const SolverConfig& cfg) {
  return picard_solve_slab(u_o, 0.0, slab, cfg);
}

Solution continue_solve(const VectorField& u_o, const SolverConfig& cfg) {
  cfg.validate();
  fields::require_same_grid(cfg.grid, u_o.grid(), "continue_solve");
  Solution sol;
  sol.trajectory = Trajectory(Provenance::picard);
  sol.trajectory.append(0.0, u_o);
  const double guard = cfg.blowup_factor * linf_of(u_o);
  const double horizon = cfg.horizon;
  double t = 0.0;
  VectorSpectrum start = fields::to_spectral(u_o);
  VectorField start_field = u_o;
  while (horizon - t > 1e-12 * std::max(1.0, horizon)) {
    const double remaining = horizon - t;
    double slab = cfg.nonlinear ? step_rule(start_field, cfg, remaining) : remaining;
    SlabOutcome o;
    int halvings = 0;
    for (;;) {
      o = picard_spectral(start, t, slab, cfg);
      o.state.halvings = halvings;
      if (o.state.converged) break;
      if (halvings == cfg.max_halvings) {
        sol.slabs.push_back(o.state);
        throw PicardFailure("continue_solve: Picard iteration did not converge after slab halving",
                            std::move(sol.trajectory), std::move(sol.slabs));
      }
      ++halvings;
      slab *= 0.5;
    }
    const bool last = slab == remaining;
    const double t1 = last ? horizon : t + slab;
    o.state.t1 = t1;
    const int m = cfg.substeps;
    for (int l = 1; l <= m; ++l) {
      const double tl = l == m ? t1 : t + l * o.iterate.h;
      sol.trajectory.append(tl, fields::to_real(o.iterate.nodes[l], false));
      if (guard > 0.0 && linf_of(sol.trajectory.back()) > guard) {
        sol.blowup_alert = true;
        sol.blowup_time = tl;
        break;
      }
    }
    sol.slabs.push_back(o.state);
    if (sol.blowup_alert) break;
    start = std::move(o.iterate.nodes[m]);
    start_field = sol.trajectory.back();
    t = t1;
  }
  return sol;
}

double max_relative_divergence(const Trajectory& traj) {
  double worst = 0.0;
  for (const auto& f : traj.fields()) {
    const double n = linf_of(f);
    if (n == 0.0) continue;
    worst = std::max(worst, fields::norm(fields::divergence(f), fields::Norm::linf()) / n);
  }
  return worst;
}

}  // namespace mns::solver

#include <algorithm>
#include <array>
#include <cmath>

#include "mns/helmholtz.hpp"
#include "mns/solver.hpp"

namespace mns::solver {

namespace {

// Per-|n|^2 coefficient tables of one ETDRK4 step of length h.
struct StepTables {
  std::vector<double> e;     // exp(z), z = -nu |k|^2 h
  std::vector<double> e2;    // exp(z / 2)
  std::vector<double> q;     // (h / 2) phi_1(z / 2)
  std::vector<double> f1;    // h (phi_1 - 3 phi_2 + 4 phi_3)(z)
  std::vector<double> f2;    // h (2 phi_2 - 4 phi_3)(z)
  std::vector<double> f3;    // h (4 phi_3 - phi_2)(z)
};

StepTables step_tables(const TorusGrid& g, double h, double nu) {
  const int half = g.points() / 2;
  const std::size_t count = static_cast<std::size_t>(3) * half * half + 1;
  StepTables t;
  for (auto* v : {&t.e, &t.e2, &t.q, &t.f1, &t.f2, &t.f3}) v->resize(count);
  const double k0 = g.unit_wavenumber();
  for (std::size_t n2 = 0; n2 < count; ++n2) {
    const double z = -nu * k0 * k0 * static_cast<double>(n2) * h;
    const double p1 = kernels::phi_function(1, z), p2 = kernels::phi_function(2, z), p3 = kernels::phi_function(3, z);
    t.e[n2] = std::exp(z);
    t.e2[n2] = std::exp(0.5 * z);
    t.q[n2] = 0.5 * h * kernels::phi_function(1, 0.5 * z);
    t.f1[n2] = h * (p1 - 3.0 * p2 + 4.0 * p3);
    t.f2[n2] = h * (2.0 * p2 - 4.0 * p3);
    t.f3[n2] = h * (4.0 * p3 - p2);
  }
  return t;
}

// out = sum_i a_i[n^2] x_i mode by mode.
template <std::size_t K>
VectorSpectrum mix(const std::array<const std::vector<double>*, K>& a, const std::array<const VectorSpectrum*, K>& x) {
  const auto& g = x[0]->grid();
  VectorSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const auto n2 = static_cast<std::size_t>(nx * nx + ny * ny + nz * nz);
    for (int c = 0; c < 3; ++c) {
      fields::Complex v(0.0, 0.0);
      for (std::size_t i = 0; i < K; ++i) v += (*a[i])[n2] * x[i]->component(c)[idx];
      out.component(c)[idx] = v;
    }
  });
  return out;
}

class Stepper {
 public:
  Stepper(const SolverConfig& cfg) : cfg_(cfg), mol_(cfg.gamma) {}

  VectorSpectrum rhs(const VectorSpectrum& u) const {
    auto a = helmholtz::leray_project(kernels::mollified_advection(u, mol_, cfg_.dealias));
    a *= -1.0;
    return a;
  }

  // Cox-Matthews ETDRK4; the linear part is propagated exactly.
  VectorSpectrum step(const VectorSpectrum& u, double h) {
    if (h != h_) {
      h_ = h;
      t_ = step_tables(u.grid(), h, cfg_.nu);
    }
    if (!cfg_.nonlinear) return mix<1>({&t_.e}, {&u});
    const auto nu = rhs(u);
    const auto a = mix<2>({&t_.e2, &t_.q}, {&u, &nu});
    const auto na = rhs(a);
    const auto b = mix<2>({&t_.e2, &t_.q}, {&u, &na});
    const auto nb = rhs(b);
    VectorSpectrum d = nb;
    d *= 2.0;
    d -= nu;
    const auto c = mix<2>({&t_.e2, &t_.q}, {&a, &d});
    const auto nc = rhs(c);
    VectorSpectrum s = na;
    s += nb;
    return mix<4>({&t_.e, &t_.f1, &t_.f2, &t_.f3}, {&u, &nu, &s, &nc});
  }

 private:
  const SolverConfig& cfg_;
  kernels::Mollifier mol_;
  double h_ = -1.0;
  StepTables t_;
};

}  // namespace

Solution direct_stepper(const VectorField& u_o, const SolverConfig& cfg, std::vector<double> times) {
  cfg.validate();
  fields::require_same_grid(cfg.grid, u_o.grid(), "direct_stepper");
  const double horizon = cfg.horizon;
  if (times.empty()) {
    times.push_back(0.0);
    const long n = static_cast<long>(std::ceil(horizon / cfg.direct_dt - 1e-9));
    for (long i = 1; i <= n; ++i) times.push_back(i == n ? horizon : i * cfg.direct_dt);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1])))
      throw std::invalid_argument("direct_stepper: sample times must be non-negative and increasing");
  }
  const auto& g = u_o.grid();
  const double kmax = 3.0 * g.unit_wavenumber() * (cfg.dealias ? g.dealias_cutoff() : g.points() / 2);
  const double guard = cfg.blowup_factor * fields::norm(u_o, fields::Norm::linf());
  Solution sol;
  sol.trajectory = Trajectory(Provenance::direct);
  Stepper stepper(cfg);
  VectorSpectrum u = fields::to_spectral(u_o);
  VectorField current = u_o;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const long n = static_cast<long>(std::ceil(span / cfg.direct_dt - 1e-9));
      const double h = span / n;
      for (long i = 0; i < n; ++i) {
        if (cfg.nonlinear && h * fields::norm(current, fields::Norm::linf()) * kmax > cfg.cfl_limit)
          throw CflViolation("direct_stepper: time step violates the CFL guard");
        u = stepper.step(u, h);
        current = fields::to_real(u, false);
        ++sol.steps;
      }
      t = target;
    }
    sol.trajectory.append(target, target == 0.0 ? u_o : current);
    if (guard > 0.0 && fields::norm(current, fields::Norm::linf()) > guard) {
      sol.blowup_alert = true;
      sol.blowup_time = target;
      break;
    }
  }
  return sol;
}

Solution solve(const VectorField& u_o, const SolverConfig& cfg, const std::vector<double>& times) {
  if (cfg.method == Method::direct) return direct_stepper(u_o, cfg, times);
  auto sol = continue_solve(u_o, cfg);
  if (times.empty() || sol.blowup_alert) return sol;
  Trajectory sampled(Provenance::picard);
  for (double t : times) sampled.append(t, sol.trajectory.at(t));
  sol.trajectory = std::move(sampled);
  return sol;
}

}  // namespace mns::solver

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "mns/cli.hpp"
#include "mns/helmholtz.hpp"
#include "mns/kernels.hpp"

namespace mns::cli {

using fields::MultiIndex;
using fields::Norm;
using fields::TorusGrid;
using fields::VectorField;
using fields::VectorSpectrum;
using solver::Method;
using solver::SolverConfig;
using solver::Trajectory;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().real_size(); ++i)
      m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
  return m;
}

double spec_diff(const VectorSpectrum& a, const VectorSpectrum& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().spectral_size(); ++i)
      m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
  return m;
}

double spec_max(const VectorSpectrum& a) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().spectral_size(); ++i) m = std::max(m, std::abs(a.component(c)[i]));
  return m;
}

double rel_l2(const VectorField& a, const VectorField& b) {
  const double s = norm(b, Norm::l2());
  return norm(a - b, Norm::l2()) / (s > 0.0 ? s : 1.0);
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// v(2x) by periodic index doubling.
VectorField stretch2(const VectorField& f) {
  const auto& g = f.grid();
  const int n = g.points();
  VectorField out(g);
  for (int c = 0; c < 3; ++c) {
    auto dst = out.mutable_component(c);
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
          dst[g.real_index(ix, iy, iz)] = f.component(c)[g.real_index((2 * ix) % n, (2 * iy) % n, (2 * iz) % n)];
  }
  return out;
}

std::string index_name(const MultiIndex& k) {
  return "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + "," + std::to_string(k.k3) + ")";
}

SolverConfig periodic_config(int n, double horizon) {
  SolverConfig cfg;
  cfg.grid = TorusGrid(2.0 * kPi, n);
  cfg.horizon = horizon;
  return cfg;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

Check make_check(std::string name, double measured, const std::string& relation, double tolerance) {
  Check c{std::move(name), measured, relation, tolerance, false};
  if (relation == "<=") c.passed = measured <= tolerance;
  else if (relation == "<") c.passed = measured < tolerance;
  else if (relation == ">=") c.passed = measured >= tolerance;
  else if (relation == "==") c.passed = measured == tolerance;
  if (std::isnan(measured)) c.passed = false;
  return c;
}

// ---------------------------------------------------------------------------

std::vector<Check> suite_helmholtz(const SuiteOptions& opt) {
  const TorusGrid g(1.8, opt.points);
  const int band = g.dealias_cutoff();
  double div = 0, idem = 0, recon = 0, orth = 0, adj = 0, cov = 0;
  double pyth[3] = {0, 0, 0};
  for (int f = 0; f < opt.fields; ++f) {
    const std::uint64_t seed = opt.seed * 100003 + 2 * f;
    const auto v = fields::random_bandlimited(g, band, seed);
    const auto w = fields::random_bandlimited(g, band, seed + 1);
    const auto pv = helmholtz::leray_project(v);
    const auto gv = helmholtz::gradient_part(v);
    const double vn = norm(v, Norm::linf());
    div = std::max(div, norm(fields::divergence(pv), Norm::linf()) / vn);
    idem = std::max(idem, max_diff(helmholtz::leray_project(pv), pv) / vn);
    recon = std::max(recon, max_diff(pv + gv, v) / vn);
    const double l2v = norm(v, Norm::l2()), l2w = norm(w, Norm::l2());
    orth = std::max(orth, std::abs(inner_product(pv, helmholtz::gradient_part(w))) / (l2v * l2w));
    adj = std::max(adj, std::abs(inner_product(pv, w) - inner_product(v, helmholtz::leray_project(w))) / (l2v * l2w));
    const auto sv = to_spectral(v), spv = to_spectral(pv), sgv = to_spectral(gv);
    for (int m = 0; m <= 2; ++m)
      for (const auto& k : fields::multi_indices_up_to(m)) {
        if (k.order() != m) continue;
        const double lhs = std::pow(derivative_l2(sv, k), 2);
        const double rhs = std::pow(derivative_l2(spv, k), 2) + std::pow(derivative_l2(sgv, k), 2);
        for (int mm = m; mm <= 2; ++mm) pyth[mm] = std::max(pyth[mm], std::abs(lhs - rhs) / lhs);
      }
    const auto narrow = fields::random_bandlimited(g, band / 2, seed + 7);
    cov = std::max(cov, max_diff(helmholtz::leray_project(stretch2(narrow)), stretch2(helmholtz::leray_project(narrow))) /
                            norm(narrow, Norm::linf()));
  }
  std::vector<Check> out;
  out.push_back(make_check("helmholtz: |div Pv|_inf / |v|_inf", div, "<=", 1e-12));
  out.push_back(make_check("helmholtz: |P(Pv) - Pv|_inf / |v|_inf", idem, "<=", 1e-12));
  out.push_back(make_check("helmholtz: |Pv + Gv - v|_inf / |v|_inf", recon, "<=", 1e-12));
  out.push_back(make_check("helmholtz: |<Pv, Gw>| / (|v| |w|)", orth, "<=", 1e-10));
  out.push_back(make_check("helmholtz: |<Pv, w> - <v, Pw>| / (|v| |w|)", adj, "<=", 1e-12));
  for (int m = 0; m <= 2; ++m)
    out.push_back(make_check("helmholtz: Pythagoras |D^k v|^2 = |D^k Pv|^2 + |D^k Gv|^2, |k| <= " + std::to_string(m),
                             pyth[m], "<=", 1e-10));
  out.push_back(make_check("helmholtz: scaling covariance P[v(2x)] = (Pv)(2x)", cov, "<=", 1e-12));
  return out;
}

std::vector<Check> suite_kernels(const SuiteOptions&) {
  std::vector<Check> out;
  std::vector<double> ts;
  for (int i = 0; i <= 6; ++i) ts.push_back(1e-3 * std::pow(10.0, i / 3.0));
  double mass = 0.0;
  for (const auto& k : fields::multi_indices_up_to(2)) {
    std::vector<double> l1, l2;
    for (double t : ts) {
      const auto n = kernels::heat_kernel_norms(k, t);
      l1.push_back(n.l1);
      l2.push_back(n.l2);
      if (k.order() == 0) mass = std::max(mass, std::abs(n.l1 - 1.0));
    }
    const double want1 = -0.5 * k.order();
    const double want2 = -0.5 * k.order() - 0.75;
    const double s1 = log_slope(ts, l1), s2 = log_slope(ts, l2);
    // A zero target slope is compared in absolute terms.
    const double e1 = k.order() == 0 ? std::abs(s1) : std::abs(s1 - want1) / std::abs(want1);
    out.push_back(make_check("kernels: heat L1 slope -|k|/2, k = " + index_name(k), e1, "<=", 0.02));
    out.push_back(make_check("kernels: heat L2 slope -|k|/2 - 3/4, k = " + index_name(k),
                             std::abs(s2 - want2) / std::abs(want2), "<=", 0.02));
  }
  out.push_back(make_check("kernels: heat kernel unit mass |K(t)|_L1 - 1", mass, "<=", 1e-6));
  std::vector<double> taus, os;
  for (int i = 0; i <= 4; ++i) {
    taus.push_back(1e-3 * std::pow(10.0, i / 2.0));
    os.push_back(kernels::oseen_kernel_l1(taus.back(), 0));
  }
  out.push_back(make_check("kernels: Oseen L1 slope -1/2", std::abs(log_slope(taus, os) + 0.5) / 0.5, "<=", 0.05));
  return out;
}

std::vector<Check> suite_mollifier(const SuiteOptions& opt) {
  const TorusGrid g(1.0, opt.points);
  const int band = g.dealias_cutoff();
  std::vector<Check> out;

  // J_0: every multiplier exactly one and the operator bitwise the identity.
  const kernels::Mollifier j0(0.0);
  double mismatches = 0.0;
  for (double m : *j0.table(g)) mismatches += (m != 1.0);
  fields::for_each_mode(g, [&](std::size_t, int nx, int ny, int nz) { mismatches += (j0.multiplier(g, nx, ny, nz) != 1.0); });
  const auto u0 = fields::random_bandlimited(g, band, opt.seed * 7919);
  const auto s0 = to_spectral(u0);
  if (spec_diff(kernels::mollify(s0, j0), s0) != 0.0) mismatches += 1;
  const auto r0 = kernels::mollify(u0, j0);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.real_size(); ++i) mismatches += (r0.component(c)[i] != u0.component(c)[i]);
  out.push_back(make_check("mollifier: J_0 identity, mismatching multipliers or samples", mismatches, "==", 0.0));

  const std::vector<double> gammas{0.02, 0.05, 0.1, 0.2};
  constexpr double kLow = -std::numeric_limits<double>::infinity();
  double linf = kLow, sup_ratio = 0.0, comm = 0.0;
  double hm[4] = {kLow, kLow, kLow, kLow};
  const int orders[4] = {0, 1, 2, 4};
  for (int f = 0; f < opt.mollifier_fields; ++f) {
    const std::uint64_t seed = opt.seed * 7919 + 1 + f;
    const auto u = fields::random_bandlimited(g, band, seed);
    const double un = norm(u, Norm::linf());
    for (double gamma : gammas) {
      const kernels::Mollifier j(gamma);
      const auto v = kernels::mollify(u, j);
      linf = std::max(linf, norm(v, Norm::linf()) / un - 1.0);
      for (int q = 0; q < 4; ++q) hm[q] = std::max(hm[q], norm(v, Norm::hm(orders[q])) / norm(u, Norm::hm(orders[q])) - 1.0);
      const auto [lhs, rhs] = kernels::mollifier_sup_bound(u, j);
      sup_ratio = std::max(sup_ratio, lhs / rhs);
    }
    if (f < 5) {
      const auto d = fields::random_bandlimited(g, band, seed + 4099, true);
      for (double gamma : {0.0, 0.05, 0.1}) {
        const kernels::Mollifier j(gamma);
        const auto a = kernels::mollified_flux_divergence(d, j);
        const auto b = kernels::mollified_advection(d, j);
        comm = std::max(comm, spec_diff(a, b) / spec_max(a));
      }
    }
  }
  out.push_back(make_check("mollifier: |J u|_inf / |u|_inf - 1", linf, "<=", 1e-10));
  for (int q = 0; q < 4; ++q)
    out.push_back(make_check("mollifier: |J u|_Hm / |u|_Hm - 1, m = " + std::to_string(orders[q]), hm[q], "<=", 1e-10));
  out.push_back(make_check("mollifier: |J u|_inf / (gamma^-3/2 |m|_L2 |u|_L2), strict", sup_ratio, "<", 1.0));
  out.push_back(make_check("mollifier: sum_j d_j[J(u_j) u] vs sum_j J(u_j) d_j u, div u = 0", comm, "<=", 1e-10));
  return out;
}

std::vector<Check> suite_energy(const SuiteOptions&) {
  std::vector<Check> out;
  {
    const TorusGrid g(2.0 * kPi, 16);
    const double nu = 0.7;
    Trajectory tr;
    for (int i = 0; i <= 400; ++i) {
      const double t = i / 400.0;
      tr.append(t, fields::shear_flow(g, std::exp(-nu * t)));
    }
    const auto fine = diagnostics::energy_budget(tr, nu);
    const auto coarse = diagnostics::energy_budget(tr, nu, 2, 2);
    out.push_back(make_check("energy: exact shear decay, |residual| / E0", fine.max_relative_residual, "<=", 1e-5));
    out.push_back(make_check("energy: exact shear, residual ratio under doubled sampling",
                             coarse.rows.back().budget_residual / fine.rows.back().budget_residual, ">=", 3.0));
  }
  auto cfg = periodic_config(16, 0.5);
  cfg.sobolev_order = 2;
  cfg.substeps = 128;
  const auto u_o = fields::taylor_green(cfg.grid, 1.0);
  const auto picard = solver::continue_solve(u_o, cfg);
  const auto fine = diagnostics::energy_budget(picard.trajectory, cfg.nu);
  const auto coarse = diagnostics::energy_budget(picard.trajectory, cfg.nu, 2, 2);
  out.push_back(make_check("energy: Taylor-Green Picard, |residual| / E0", fine.max_relative_residual, "<=", 1e-4));
  out.push_back(make_check("energy: Taylor-Green Picard, residual ratio under doubled sampling",
                           std::abs(coarse.rows.back().budget_residual) / std::abs(fine.rows.back().budget_residual),
                           ">=", 3.0));
  out.push_back(make_check("energy: Taylor-Green Picard, (|u(t)|_L2 - |u_o|_L2) / |u_o|_L2",
                           fine.max_l2_excess / std::sqrt(fine.e0), "<=", 1e-12));
  cfg.method = Method::direct;
  cfg.direct_dt = 5e-3;
  const auto direct = solver::direct_stepper(u_o, cfg);
  const auto dser = diagnostics::energy_budget(direct.trajectory, cfg.nu);
  out.push_back(make_check("energy: Taylor-Green direct, |residual| / E0", dser.max_relative_residual, "<=", 1e-4));
  return out;
}

std::vector<Check> suite_equivalence(const SuiteOptions&) {
  std::vector<Check> out;
  {
    auto cfg = periodic_config(16, 0.5);
    const auto u_o = fields::shear_flow(cfg.grid, 1.0);
    const auto times = diagnostics::uniform_times(0.5, 5);
    for (auto method : {Method::picard, Method::direct})
      for (double gamma : {0.0, 0.2}) {
        cfg.method = method;
        cfg.gamma = gamma;
        const auto tr = solver::solve(u_o, cfg, times).trajectory;
        double err = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i)
          err = std::max(err, rel_l2(tr.field(i), fields::shear_flow(cfg.grid, std::exp(-cfg.nu * tr.times()[i]))));
        out.push_back(make_check(std::string("equivalence: shear flow vs exact decay, ") + solver::to_string(method) +
                                     ", gamma = " + fmt_short(gamma),
                                 err, "<=", 1e-6));
      }
  }
  {
    auto cfg = periodic_config(16, 0.3);
    const auto u_o = fields::taylor_green(cfg.grid, 1.0);
    const auto times = diagnostics::uniform_times(0.3, 3);
    for (double gamma : {0.0, 0.1}) {
      cfg.gamma = gamma;
      cfg.method = Method::picard;
      const auto a = solver::solve(u_o, cfg, times).trajectory;
      cfg.method = Method::direct;
      const auto b = solver::solve(u_o, cfg, times).trajectory;
      double err = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, rel_l2(a.field(i), b.field(i)));
      out.push_back(make_check("equivalence: Taylor-Green Picard vs direct, gamma = " + fmt_short(gamma), err, "<=", 1e-5));
      out.push_back(make_check("equivalence: Taylor-Green divergence, gamma = " + fmt_short(gamma),
                               std::max(solver::max_relative_divergence(a), solver::max_relative_divergence(b)), "<=",
                               1e-10));
    }
  }
  {
    auto cfg = periodic_config(16, 1.0);
    cfg.nu = 0.1;
    const auto u_o = fields::taylor_green(cfg.grid, 1.0);
    const auto slab = solver::picard_solve_slab(u_o, solver::step_rule(u_o, cfg), cfg);
    const auto& st = slab.state;
    double worst = 0.0;
    for (double r : st.ratios) worst = std::max(worst, r);
    double ball = 0.0;
    for (double b : st.ball_norms) ball = std::max(ball, b / st.ball_radius - 1.0);
    out.push_back(make_check("equivalence: Picard contraction ratio", worst, "<=", 0.5));
    out.push_back(make_check("equivalence: Picard iterations to tolerance", st.converged ? st.iterations : 1e9, "<=", 20));
    out.push_back(make_check("equivalence: Picard iterates in the ball 2|u_o|_Hm, relative excess", ball, "<=", 1e-8));
  }
  return out;
}

std::vector<Check> suite_scaling(const SuiteOptions&) {
  std::vector<Check> out;
  auto cfg = periodic_config(16, 0.2);
  cfg.method = Method::direct;
  const auto times = diagnostics::uniform_times(0.2, 2);
  const auto shear = fields::shear_flow(cfg.grid, 1.0);
  const auto nu = diagnostics::nu_sweep(shear, {1.0, 2.0, 4.0}, cfg, times);
  double nu_err = 0.0;
  for (double e : nu.errors) nu_err = std::max(nu_err, e);
  out.push_back(make_check("scaling: viscosity transport on shear flow, nu in {1, 2, 4}", nu_err, "<=", 1e-12));
  auto bump_cfg = cfg;
  bump_cfg.grid = TorusGrid(4.0, 128);
  bump_cfg.gamma = 0.1;
  bump_cfg.horizon = 0.02;
  bump_cfg.direct_dt = 5e-3;
  const auto bump = fields::make_divfree_bump(bump_cfg.grid, {0.0, 0.0, 0.0}, 0.9, 1.0);
  const auto alpha = diagnostics::alpha_sweep(bump, {1, 2}, bump_cfg, diagnostics::uniform_times(0.02, 2));
  double a_err = 0.0;
  for (double e : alpha.errors) a_err = std::max(a_err, e);
  out.push_back(make_check("scaling: rescaled bump solve vs base solve, alpha in {1, 2}, relative L_inf", a_err, "<=", 1e-3));
  const auto u2 = fields::apply_initial_scaling(bump, 2);
  out.push_back(make_check("scaling: sqrt(alpha) |u^alpha|_L2 / |u_o|_L2 - 1, alpha = 2",
                           std::abs(std::sqrt(2.0) * norm(u2, Norm::l2()) / norm(bump, Norm::l2()) - 1.0), "<=", 1e-6));
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"helmholtz", "kernels", "mollifier", "energy", "equivalence", "scaling"};
  return names;
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e %s %.3e", c.measured, c.relation.c_str(), c.tolerance);
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  [" << buf << "]\n";
  }
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt, std::ostream& log) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    log << "unknown suite '" << suite << "' (expected helmholtz, kernels, mollifier, energy, equivalence, scaling or all)\n";
    return kUsageError;
  }
  bool ok = true;
  for (const auto& name : names) {
    if (suite != "all" && suite != name) continue;
    std::vector<Check> checks;
    if (name == "helmholtz") checks = suite_helmholtz(opt);
    else if (name == "kernels") checks = suite_kernels(opt);
    else if (name == "mollifier") checks = suite_mollifier(opt);
    else if (name == "energy") checks = suite_energy(opt);
    else if (name == "equivalence") checks = suite_equivalence(opt);
    else checks = suite_scaling(opt);
    print_checks(log, checks);
    ok = ok && all_passed(checks);
  }
  log << (ok ? "verify: all checks passed\n" : "verify: some checks failed\n");
  return ok ? kOk : kCheckFailed;
}

}  // namespace mns::cli

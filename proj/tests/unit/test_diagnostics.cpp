#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "mns/diagnostics.hpp"

using namespace mns::fields;
using namespace mns::solver;
using namespace mns::diagnostics;

namespace {

constexpr double kPi = 3.141592653589793;

SolverConfig config(int n, double horizon) {
  SolverConfig cfg;
  cfg.grid = TorusGrid(2.0 * kPi, n);
  cfg.horizon = horizon;
  return cfg;
}

Trajectory shear_trajectory(const TorusGrid& g, double nu, double horizon, int samples) {
  Trajectory tr;
  for (int i = 0; i <= samples; ++i) {
    const double t = horizon * i / samples;
    tr.append(t, shear_flow(g, std::exp(-nu * t)));
  }
  return tr;
}

}  // namespace

TEST_CASE("dissipation by Parseval") {
  const TorusGrid g(2.0 * kPi, 16);
  // |d_y sin y|^2_{L2} = (2 pi)^3 / 2.
  CHECK(dissipation(shear_flow(g, 1.0)) == doctest::Approx(std::pow(2.0 * kPi, 3) / 2).epsilon(1e-13));
  // Taylor-Green: |grad u|^2 = 3 |u|^2.
  const auto tg = taylor_green(g, 1.0);
  const double e = norm(tg, Norm::l2());
  CHECK(dissipation(tg) == doctest::Approx(3.0 * e * e).epsilon(1e-13));
}

TEST_CASE("energy budget on exact shear flow") {
  const TorusGrid g(2.0 * kPi, 16);
  const double nu = 0.7;
  const auto tr = shear_trajectory(g, nu, 1.0, 400);
  const auto s = energy_budget(tr, nu);
  REQUIRE(s.rows.size() == 401);
  CHECK(s.e0 == doctest::Approx(std::pow(2.0 * kPi, 3) / 2).epsilon(1e-13));
  CHECK(s.max_relative_residual <= 1e-5);
  CHECK(s.rows.front().cumdiss == 0.0);
  CHECK(s.rows.front().budget_residual == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    CHECK(s.rows[i].cumdiss >= s.rows[i - 1].cumdiss);
    CHECK(s.rows[i].l2 == doctest::Approx(std::exp(-nu * s.rows[i].t) * std::sqrt(s.e0)).epsilon(1e-12));
    CHECK(s.rows[i].supratio <= 1.0);
  }
  CHECK(s.max_l2_excess <= 0.0);
  const auto coarse = energy_budget(tr, nu, 2, 2);
  CHECK(coarse.rows.size() == 201);
  const double ratio = coarse.rows.back().budget_residual / s.rows.back().budget_residual;
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("energy budget edge cases") {
  const TorusGrid g(2.0 * kPi, 8);
  Trajectory one;
  one.append(0.0, VectorField(g));
  const auto single = energy_budget(one, 1.0);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].budget_residual == 0.0);
  CHECK_THROWS_AS(energy_budget(Trajectory{}, 1.0), std::invalid_argument);
  Trajectory zero;
  for (int i = 0; i < 4; ++i) zero.append(0.1 * i, VectorField(g));
  const auto s = energy_budget(zero, 1.0);
  for (const auto& r : s.rows) {
    CHECK(r.l2 == 0.0);
    CHECK(r.diss == 0.0);
    CHECK(r.budget_residual == 0.0);
    CHECK(r.supratio == 0.0);
  }
  CHECK(s.max_relative_residual == 0.0);
  const auto strided = energy_budget(zero, 1.0, 2, 2);
  REQUIRE(strided.rows.size() == 3);
  CHECK(strided.rows.back().t == zero.end());
  CHECK_THROWS(energy_budget(zero, 1.0, 2, 0));
}

TEST_CASE("energy identity on a Picard trajectory") {
  auto cfg = config(16, 0.5);
  cfg.sobolev_order = 2;
  cfg.substeps = 128;
  const auto sol = continue_solve(taylor_green(cfg.grid, 1.0), cfg);
  const auto fine = energy_budget(sol.trajectory, cfg.nu);
  const auto coarse = energy_budget(sol.trajectory, cfg.nu, 2, 2);
  CHECK(fine.max_relative_residual < 1e-4);
  CHECK(std::abs(coarse.rows.back().budget_residual) >= 3.0 * std::abs(fine.rows.back().budget_residual));
  for (const auto& r : fine.rows) CHECK(r.l2 <= fine.rows.front().l2 + std::abs(r.budget_residual));
}

TEST_CASE("series CSV layout") {
  const TorusGrid g(2.0 * kPi, 8);
  const auto s = energy_budget(shear_trajectory(g, 1.0, 0.2, 2), 1.0);
  std::ostringstream out;
  write_series_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,L2,Linf,Hm,diss,cumdiss,budget_residual,divres,supratio");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
  }
  CHECK(rows == 3);
  std::ostringstream again;
  write_series_csv(again, s);
  CHECK(again.str() == out.str());
}

TEST_CASE("sup-norm monitor") {
  const TorusGrid g(2.0 * kPi, 16);
  const auto u_o = shear_flow(g, 1.0);
  const auto tr = shear_trajectory(g, 1.0, 0.5, 5);
  const auto rep = supnorm_monitor(tr, u_o, true);
  REQUIRE(rep.ratios.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(rep.ratios[i] == doctest::Approx(std::exp(-rep.times[i])).epsilon(1e-12));
  CHECK(rep.excursions.empty());
  CHECK(rep.attained_only_at_start);
  CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-14));

  Trajectory grown;
  grown.append(0.0, u_o);
  grown.append(0.1, shear_flow(g, 1.2));
  grown.append(0.2, shear_flow(g, 0.9));
  const auto flagged = supnorm_monitor(grown, u_o, false, 1e-3);
  REQUIRE(flagged.excursions.size() == 1);
  CHECK(flagged.excursions[0] == 0.1);
  CHECK(flagged.running.back() == doctest::Approx(1.2));
  CHECK_FALSE(flagged.attained_only_at_start);
  CHECK_THROWS_AS(supnorm_monitor(grown, u_o, true), ContractionViolation);

  auto cfg = config(16, 0.3);
  cfg.nonlinear = false;
  const auto rough = random_bandlimited(cfg.grid, 6, 3, true);
  for (auto method : {Method::picard, Method::direct}) {
    cfg.method = method;
    CHECK_NOTHROW(supnorm_monitor(solve(rough, cfg).trajectory, rough, true));
  }
}

TEST_CASE("gradient bound probe") {
  const TorusGrid g(2.0 * kPi, 16);
  const auto u_o = shear_flow(g, 1.0);
  const auto tr = shear_trajectory(g, 1.0, 0.5, 5);
  const auto p = gradient_bound_probe(tr, u_o);
  REQUIRE(p.size() == 9);
  const auto& dy_u1 = p[0 * 3 + 1];
  CHECK(dy_u1.component == 0);
  CHECK(dy_u1.direction == 1);
  CHECK(dy_u1.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dy_u1.gradient_term == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& q : p) CHECK(q.implied_constant <= 0.0);
  Trajectory zero;
  zero.append(0.0, VectorField(g));
  for (const auto& q : gradient_bound_probe(zero, VectorField(g))) {
    CHECK(q.lhs == 0.0);
    CHECK(q.shape == 0.0);
    CHECK(q.implied_constant == 0.0);
  }
}

TEST_CASE("divergence residual") {
  const TorusGrid g(2.0 * kPi, 16);
  Trajectory zero;
  zero.append(0.0, VectorField(g));
  CHECK(divfree_residual(zero) == 0.0);
  auto cfg = config(16, 0.2);
  const auto sol = solve(taylor_green(cfg.grid, 1.0), cfg);
  CHECK(divfree_residual(sol.trajectory) <= 1e-10);
  Trajectory bad;
  bad.append(0.0, taylor_green(g, 1.0));
  auto corrupt = taylor_green(g, 1.0);
  auto ux = corrupt.mutable_component(0);
  for (std::size_t i = 0; i < ux.size(); i += 7) ux[i] += 0.1;
  bad.append(0.1, corrupt);
  CHECK(divfree_residual(bad) > 0.1);
}

TEST_CASE("gamma sweep") {
  auto cfg = config(16, 0.2);
  const auto times = uniform_times(0.2, 4);
  CHECK_THROWS(gamma_sweep(shear_flow(cfg.grid, 1.0), {0.1, 0.2, 0.0}, cfg, times));
  CHECK_THROWS(gamma_sweep(shear_flow(cfg.grid, 1.0), {0.2, 0.1}, cfg, times));

  const auto shear = gamma_sweep(shear_flow(cfg.grid, 1.0), {0.4, 0.2, 0.0}, cfg, times);
  for (double e : shear.errors) CHECK(e <= 1e-10);

  const auto tg = gamma_sweep(taylor_green(cfg.grid, 1.0), {0.4, 0.2, 0.2, 0.1, 0.0}, cfg, times);
  REQUIRE(tg.distances.size() == 5);
  CHECK(tg.distances[1][2] == 0.0);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(tg.distances[i][j] >= 0.0);
      CHECK(tg.distances[i][j] == tg.distances[j][i]);
    }
  CHECK(tg.monotone);
  CHECK(tg.order >= 0.9);
  CHECK(tg.passed);

  auto failing = cfg;
  failing.max_picard_iterations = 1;
  failing.max_halvings = 0;
  try {
    gamma_sweep(taylor_green(cfg.grid, 1.0), {0.2, 0.0}, failing, times);
    FAIL("expected a tagged failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("gamma=0.2") != std::string::npos);
  }
}

TEST_CASE("sweep output is independent of the worker count") {
  auto cfg = config(16, 0.1);
  const auto times = uniform_times(0.1, 2);
  const auto u = taylor_green(cfg.grid, 1.0);
  setenv("MNS_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto serial = gamma_sweep(u, {0.2, 0.1, 0.0}, cfg, times);
  setenv("MNS_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  const auto threaded = gamma_sweep(u, {0.2, 0.1, 0.0}, cfg, times);
  unsetenv("MNS_THREADS");
  std::ostringstream a, b;
  write_sweep_csv(a, serial);
  write_sweep_csv(b, threaded);
  CHECK(a.str() == b.str());
}

TEST_CASE("alpha and nu sweeps on exact data") {
  auto cfg = config(16, 0.2);
  cfg.method = Method::direct;
  const auto times = uniform_times(0.2, 2);
  const auto nu = nu_sweep(shear_flow(cfg.grid, 1.0), {1.0, 2.0}, cfg, times);
  REQUIRE(nu.errors.size() == 2);
  CHECK(nu.errors[0] == 0.0);
  CHECK(nu.errors[1] <= 1e-12);
  CHECK(nu.passed);
  std::ostringstream summary;
  write_sweep_summary(summary, nu);
  CHECK(summary.str().find("result = pass") != std::string::npos);

  const auto alpha = alpha_sweep(taylor_green(cfg.grid, 1.0), {1}, cfg, times);
  CHECK(alpha.errors[0] <= 1e-12);
}

TEST_CASE("uniform times") {
  const auto t = uniform_times(0.3, 3);
  REQUIRE(t.size() == 4);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 0.3);
  CHECK(t[1] == doctest::Approx(0.1));
  CHECK_THROWS(uniform_times(0.3, 0));
}

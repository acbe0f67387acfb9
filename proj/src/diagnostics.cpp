#include "mns/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

namespace mns::diagnostics {

namespace {

using fields::MultiIndex;
using fields::Norm;

MultiIndex unit(int j) {
  MultiIndex k;
  (j == 0 ? k.k1 : j == 1 ? k.k2 : k.k3) = 1;
  return k;
}

double linf(const VectorField& u) { return fields::norm(u, Norm::linf()); }

double component_linf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Least-squares slope of log y against log x over entries with x, y > 0.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Runs job(i) for i in [0, n) on up to worker_count() threads. The first
// exception (lowest index) is rethrown after all workers finish.
template <typename Job>
void parallel_for(std::size_t n, Job job) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_times(const std::vector<double>& times, const char* who) {
  if (times.empty()) throw std::invalid_argument(std::string(who) + ": no sample times");
}

}  // namespace

double dissipation(const VectorField& u) {
  const auto s = fields::to_spectral(u);
  double d = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double v = fields::derivative_l2(s, unit(j));
    d += v * v;
  }
  return d;
}

DiagnosticsSeries energy_budget(const Trajectory& traj, double nu, int sobolev_order, int stride) {
  if (traj.empty()) throw std::invalid_argument("energy_budget: empty trajectory");
  if (stride < 1) throw std::invalid_argument("energy_budget: stride must be positive");
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < traj.size(); i += stride) picks.push_back(i);
  if (picks.back() != traj.size() - 1) picks.push_back(traj.size() - 1);

  DiagnosticsSeries s;
  s.nu = nu;
  s.sobolev_order = sobolev_order;
  const auto& u_o = traj.field(0);
  const double l2_0 = fields::norm(u_o, Norm::l2());
  const double linf_0 = linf(u_o);
  s.e0 = l2_0 * l2_0;
  double cum = 0.0, running = 0.0, prev_t = 0.0, prev_d = 0.0;
  for (std::size_t q = 0; q < picks.size(); ++q) {
    const auto& u = traj.field(picks[q]);
    SampleRow r;
    r.t = traj.times()[picks[q]];
    r.l2 = fields::norm(u, Norm::l2());
    r.linf = linf(u);
    r.hm = fields::norm(u, Norm::hm(sobolev_order));
    r.diss = dissipation(u);
    if (q > 0) cum += 0.5 * (r.t - prev_t) * (r.diss + prev_d);
    r.cumdiss = cum;
    r.budget_residual = r.l2 * r.l2 + 2.0 * nu * cum - s.e0;
    r.divres = fields::norm(fields::divergence(u), Norm::linf());
    running = std::max(running, r.linf);
    r.supratio = linf_0 > 0.0 ? running / linf_0 : 0.0;
    if (s.e0 > 0.0) s.max_relative_residual = std::max(s.max_relative_residual, std::abs(r.budget_residual) / s.e0);
    s.max_l2_excess = std::max(s.max_l2_excess, r.l2 - l2_0);
    prev_t = r.t;
    prev_d = r.diss;
    s.rows.push_back(r);
  }
  return s;
}

void write_series_csv(std::ostream& out, const DiagnosticsSeries& series) {
  out << kSeriesHeader << '\n';
  for (const auto& r : series.rows) {
    out << fmt(r.t) << ',' << fmt(r.l2) << ',' << fmt(r.linf) << ',' << fmt(r.hm) << ',' << fmt(r.diss) << ','
        << fmt(r.cumdiss) << ',' << fmt(r.budget_residual) << ',' << fmt(r.divres) << ',' << fmt(r.supratio) << '\n';
  }
}

SupnormReport supnorm_monitor(const Trajectory& traj, const VectorField& u_o, bool linear, double slack) {
  SupnormReport rep;
  rep.slack = slack;
  rep.linear = linear;
  const double base = linf(u_o);
  double running = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times()[i];
    const double r = base > 0.0 ? linf(traj.field(i)) / base : 0.0;
    running = std::max(running, r);
    rep.times.push_back(t);
    rep.ratios.push_back(r);
    rep.running.push_back(running);
    if (r > 1.0 + slack) rep.excursions.push_back(t);
    if (t > traj.start() && r >= 1.0) rep.attained_only_at_start = false;
  }
  rep.max_ratio = running;
  if (linear && running > 1.0 + 1e-10) {
    throw ContractionViolation("supnorm_monitor: linear run exceeds |u_o|_inf, ratio " + fmt(running));
  }
  return rep;
}

std::vector<GradientProbe> gradient_bound_probe(const Trajectory& traj, const VectorField& u_o) {
  const double shape = std::pow(linf(u_o), 2.5) * fields::norm(u_o, Norm::l2());
  std::vector<GradientProbe> out(9);
  for (int j = 0; j < 3; ++j) {
    const auto d0 = fields::derivative(u_o, unit(j));
    for (int i = 0; i < 3; ++i) {
      auto& p = out[3 * i + j];
      p.component = i;
      p.direction = j;
      p.shape = shape;
      p.gradient_term = 2.0 * component_linf(d0.component(i));
    }
  }
  for (const auto& u : traj.fields()) {
    for (int j = 0; j < 3; ++j) {
      const auto d = fields::derivative(u, unit(j));
      for (int i = 0; i < 3; ++i) out[3 * i + j].lhs = std::max(out[3 * i + j].lhs, component_linf(d.component(i)));
    }
  }
  for (auto& p : out) p.implied_constant = shape > 0.0 ? (p.lhs - p.gradient_term) / shape : 0.0;
  return out;
}

double divfree_residual(const Trajectory& traj) {
  double m = 0.0;
  for (const auto& u : traj.fields()) m = std::max(m, fields::norm(fields::divergence(u), Norm::linf()));
  return m;
}

double sup_linf_distance(const Trajectory& a, const Trajectory& b) {
  if (a.times() != b.times()) throw std::invalid_argument("sup_linf_distance: sample times differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, linf(a.field(i) - b.field(i)));
  return m;
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MNS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<int>(std::min<long>(v, 1024));
  }
  return n;
}

SweepReport gamma_sweep(const VectorField& u_o, const std::vector<double>& gammas, const SolverConfig& cfg,
                        const std::vector<double>& times) {
  check_times(times, "gamma_sweep");
  if (gammas.empty() || gammas.back() != 0.0) throw std::invalid_argument("gamma_sweep: list must end with gamma = 0");
  for (std::size_t i = 1; i < gammas.size(); ++i)
    if (gammas[i] > gammas[i - 1]) throw std::invalid_argument("gamma_sweep: list must be sorted descending");

  std::vector<Trajectory> runs(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    SolverConfig c = cfg;
    c.gamma = gammas[i];
    c.horizon = times.back();
    try {
      auto sol = solver::solve(u_o, c, times);
      if (sol.blowup_alert) throw std::runtime_error("blow-up guard triggered");
      runs[i] = std::move(sol.trajectory);
    } catch (const solver::ConfigError& e) {
      throw solver::ConfigError("gamma_sweep: solve failed for gamma=" + fmt(gammas[i]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("gamma_sweep: solve failed for gamma=" + fmt(gammas[i]) + ": " + e.what());
    }
  });

  SweepReport rep;
  rep.kind = "gamma";
  rep.parameters = gammas;
  const std::size_t n = gammas.size();
  rep.distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) rep.distances[i][j] = rep.distances[j][i] = sup_linf_distance(runs[i], runs[j]);
  for (std::size_t i = 0; i < n; ++i) rep.errors.push_back(rep.distances[i][n - 1]);
  rep.monotone = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool distinct = gammas[i] < gammas[i - 1];
    if (distinct ? !(rep.errors[i] < rep.errors[i - 1]) : rep.errors[i] != rep.errors[i - 1]) rep.monotone = false;
  }
  rep.order = log_slope(gammas, rep.errors);
  rep.tolerance = 0.9;
  rep.order_ok = rep.order >= 0.9;
  rep.within_tolerance = true;
  rep.passed = rep.monotone && rep.order_ok;
  return rep;
}

SweepReport alpha_sweep(const VectorField& u_o, const std::vector<int>& alphas, const SolverConfig& cfg,
                        const std::vector<double>& times, double tolerance) {
  check_times(times, "alpha_sweep");
  SolverConfig c = cfg;
  c.horizon = times.back();
  const auto base = solver::solve(u_o, c, times).trajectory;
  SweepReport rep;
  rep.kind = "alpha";
  rep.tolerance = tolerance;
  rep.errors.assign(alphas.size(), 0.0);
  parallel_for(alphas.size(), [&](std::size_t k) {
    try {
      const auto scaled = solver::scaled_solve(u_o, alphas[k], c, times);
      double e = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double ref = linf(base.field(i));
        const double gap = linf(scaled.field(i) - base.field(i));
        e = std::max(e, ref > 0.0 ? gap / ref : gap);
      }
      rep.errors[k] = e;
    } catch (const solver::ConfigError& e) {
      throw solver::ConfigError("alpha_sweep: solve failed for alpha=" + std::to_string(alphas[k]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("alpha_sweep: solve failed for alpha=" + std::to_string(alphas[k]) + ": " + e.what());
    }
  });
  for (int a : alphas) rep.parameters.push_back(a);
  rep.within_tolerance = std::all_of(rep.errors.begin(), rep.errors.end(), [&](double e) { return e <= tolerance; });
  rep.monotone = true;
  rep.order_ok = true;
  rep.passed = rep.within_tolerance;
  return rep;
}

SweepReport nu_sweep(const VectorField& u_o, const std::vector<double>& nus, const SolverConfig& cfg,
                     const std::vector<double>& times, double tolerance) {
  check_times(times, "nu_sweep");
  SweepReport rep;
  rep.kind = "nu";
  rep.parameters = nus;
  rep.tolerance = tolerance;
  rep.errors.assign(nus.size(), 0.0);
  parallel_for(nus.size(), [&](std::size_t k) {
    try {
      SolverConfig c = cfg;
      c.nu = nus[k];
      c.horizon = times.back();
      const auto direct = solver::solve(u_o, c, times).trajectory;
      const auto moved = solver::viscosity_transport(u_o, nus[k], cfg, times);
      double e = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double ref = fields::norm(direct.field(i), Norm::l2());
        const double gap = fields::norm(moved.field(i) - direct.field(i), Norm::l2());
        e = std::max(e, ref > 0.0 ? gap / ref : gap);
      }
      rep.errors[k] = e;
    } catch (const solver::ConfigError& e) {
      throw solver::ConfigError("nu_sweep: solve failed for nu=" + fmt(nus[k]) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("nu_sweep: solve failed for nu=" + fmt(nus[k]) + ": " + e.what());
    }
  });
  rep.within_tolerance = std::all_of(rep.errors.begin(), rep.errors.end(), [&](double e) { return e <= tolerance; });
  rep.monotone = true;
  rep.order_ok = true;
  rep.passed = rep.within_tolerance;
  return rep;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "parameter,error";
  for (std::size_t j = 0; j < report.distances.size(); ++j) out << ",d" << j;
  out << '\n';
  for (std::size_t i = 0; i < report.parameters.size(); ++i) {
    out << fmt(report.parameters[i]) << ',' << fmt(report.errors[i]);
    if (!report.distances.empty())
      for (double d : report.distances[i]) out << ',' << fmt(d);
    out << '\n';
  }
}

void write_sweep_summary(std::ostream& out, const SweepReport& report) {
  out << "kind = " << report.kind << '\n';
  out << "parameters =";
  for (double p : report.parameters) out << ' ' << fmt(p);
  out << "\nerrors =";
  for (double e : report.errors) out << ' ' << fmt(e);
  out << '\n';
  if (report.kind == "gamma") {
    out << "order = " << fmt(report.order) << '\n';
    out << "monotone = " << (report.monotone ? "pass" : "fail") << '\n';
    out << "order_ok = " << (report.order_ok ? "pass" : "fail") << '\n';
  } else {
    out << "tolerance = " << fmt(report.tolerance) << '\n';
    out << "within_tolerance = " << (report.within_tolerance ? "pass" : "fail") << '\n';
  }
  out << "result = " << (report.passed ? "pass" : "fail") << '\n';
}

std::vector<double> uniform_times(double horizon, int n) {
  if (n < 1 || !(horizon >= 0.0)) throw std::invalid_argument("uniform_times: need n >= 1 and horizon >= 0");
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(i == n ? horizon : horizon * i / n);
  return t;
}

}  // namespace mns::diagnostics

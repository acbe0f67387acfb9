#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "mns/solver.hpp"

using namespace mns;

namespace {

double first_ratio(const fields::VectorField& u, double slab, solver::SolverConfig cfg) {
  cfg.max_picard_iterations = 2;
  cfg.picard_tolerance = 1e-300;
  const auto r = solver::picard_solve_slab(u, slab, cfg);
  if (r.state.ratios.empty() || !std::isfinite(r.state.ratios.front())) return HUGE_VAL;
  return r.state.ratios.front();
}

}  // namespace

int main(int argc, char** argv) {
  solver::SolverConfig cfg;
  if (argc > 1) cfg.nu = std::atof(argv[1]);
  const int m_lo = argc > 2 ? std::atoi(argv[2]) : 0;
  cfg.grid = fields::TorusGrid(2 * std::numbers::pi, 32);
  const auto u = fields::taylor_green(cfg.grid, 1.0);
  for (int m = m_lo; m <= 7; ++m) {
    cfg.sobolev_order = m;
    double lo = 1e-4, hi = 4.0;
    for (int it = 0; it < 24; ++it) {
      const double mid = std::sqrt(lo * hi);
      (first_ratio(u, mid, cfg) <= 0.45 ? lo : hi) = mid;
    }
    const double n = fields::norm(u, fields::Norm::hm(m));
    std::printf("m=%d slab=%.6e ratio=%.4f c_slab=%.6e\n", m, lo, first_ratio(u, lo, cfg), lo * n * n);
  }
  return 0;
}

#include "mns/helmholtz.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mns::helmholtz {

using fields::Complex;
using fields::for_each_mode;
using fields::TorusGrid;

std::array<std::array<double, 3>, 3> projector_symbol(const TorusGrid& grid, int nx, int ny, int nz) {
  const double k[3] = {grid.odd_wavenumber(nx), grid.odd_wavenumber(ny), grid.odd_wavenumber(nz)};
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  std::array<std::array<double, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = (i == j ? 1.0 : 0.0) - (k2 > 0.0 ? k[i] * k[j] / k2 : 0.0);
    }
  }
  return m;
}

namespace {

// Writes the gradient part of v into g (mode-wise k (k.v) / |k|^2).
void split(const VectorSpectrum& v, VectorSpectrum* p, VectorSpectrum* g) {
  const auto& grid = v.grid();
  for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    const double k[3] = {grid.odd_wavenumber(nx), grid.odd_wavenumber(ny), grid.odd_wavenumber(nz)};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex a[3] = {v.component(0)[idx], v.component(1)[idx], v.component(2)[idx]};
    Complex kv(0.0, 0.0);
    if (k2 > 0.0) kv = (k[0] * a[0] + k[1] * a[1] + k[2] * a[2]) / k2;
    for (int i = 0; i < 3; ++i) {
      const Complex gi = k[i] * kv;
      if (p) p->component(i)[idx] = a[i] - gi;
      if (g) g->component(i)[idx] = gi;
    }
  });
}

}  // namespace

VectorSpectrum leray_project(const VectorSpectrum& v) {
  VectorSpectrum out(v.grid());
  split(v, &out, nullptr);
  return out;
}

VectorField leray_project(const VectorField& v) {
  return fields::to_real(leray_project(fields::to_spectral(v)));
}

VectorSpectrum gradient_part(const VectorSpectrum& v) {
  VectorSpectrum out(v.grid());
  split(v, nullptr, &out);
  return out;
}

VectorField gradient_part(const VectorField& v) {
  return fields::to_real(gradient_part(fields::to_spectral(v)));
}

ScalarSpectrum pressure_scalar(const VectorSpectrum& v) {
  const auto& grid = v.grid();
  ScalarSpectrum out(grid);
  for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    const double k[3] = {grid.odd_wavenumber(nx), grid.odd_wavenumber(ny), grid.odd_wavenumber(nz)};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    const Complex kv =
        k[0] * v.component(0)[idx] + k[1] * v.component(1)[idx] + k[2] * v.component(2)[idx];
    out[idx] = Complex(0.0, -1.0) * kv / k2;
  });
  return out;
}

ScalarField pressure_scalar(const VectorField& v) {
  return fields::to_real(pressure_scalar(fields::to_spectral(v)));
}

VectorSpectrum advective_term(const VectorField& u) {
  const auto& grid = u.grid();
  const auto spec = fields::to_spectral(u);
  VectorSpectrum total(grid);
  for (int j = 0; j < 3; ++j) {
    fields::MultiIndex e;
    if (j == 0) e.k1 = 1;
    if (j == 1) e.k2 = 1;
    if (j == 2) e.k3 = 1;
    const auto du = fields::to_real(fields::derivative(spec, e), false);
    const fields::ScalarField uj(grid, std::vector<double>(u.component(j).begin(), u.component(j).end()));
    total += fields::to_spectral(fields::pointwise_product(uj, du, true));
  }
  return total;
}

ScalarField pressure_nonlinear(const VectorField& u) {
  const auto& grid = u.grid();
  const double scale = fields::norm(u, fields::Norm::linf()) * grid.unit_wavenumber();
  const double div = fields::norm(fields::divergence(u), fields::Norm::linf());
  if (div > 1e-8 * std::max(scale, 1e-300) && div > 0.0) {
    throw std::invalid_argument("pressure_nonlinear: velocity is not divergence-free");
  }
  auto p = pressure_scalar(advective_term(u));
  for (auto& c : p.coeffs()) c = -c;
  return fields::to_real(p);
}

namespace {

double smooth_step(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// 1 for r <= r1, 0 for r >= r2, C-infinity in between.
double radial_window(double r, double r1, double r2) {
  if (r <= r1) return 1.0;
  if (r >= r2) return 0.0;
  const double t = (r - r1) / (r2 - r1);
  const double a = smooth_step(1.0 - t);
  const double b = smooth_step(t);
  return a / (a + b);
}

}  // namespace

std::array<double, 3> quadrature_oracle_G(const VectorField& v, const Point& x, double eps) {
  const auto& grid = v.grid();
  const int n = grid.points();
  const double l = grid.side_length();
  const double dx = grid.spacing();
  if (n > 16) throw std::invalid_argument("quadrature_oracle_G: grid too large (N <= 16)");
  if (!(eps > 0.0) || eps > 4.0 * dx) {
    throw std::invalid_argument("quadrature_oracle_G: eps must lie in (0, 4 dx]");
  }
  for (double c : x) {
    if (!(c >= 0.0 && c < l)) throw std::invalid_argument("quadrature_oracle_G: point outside box");
  }

  // g(y) = div v(x + y) on the grid, and grad(div v)(x), both from the
  // band-limited interpolant (Nyquist modes dropped).
  const auto f = fields::divergence(fields::to_spectral(v));
  ScalarSpectrum shifted(grid);
  double grad[3] = {0.0, 0.0, 0.0};
  for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    if (grid.is_nyquist(nx) || grid.is_nyquist(ny) || grid.is_nyquist(nz)) return;
    const double k[3] = {grid.wavenumber(nx), grid.wavenumber(ny), grid.wavenumber(nz)};
    const double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
    const Complex s = f[idx] * Complex(std::cos(phase), std::sin(phase));
    shifted[idx] = s;
    const double w = fields::hermitian_weight(grid, nx);
    for (int i = 0; i < 3; ++i) grad[i] += w * (Complex(0.0, k[i]) * s).real();
  });
  const auto g = fields::to_real(shifted);
  const double g0 = g[0];

  const double far_inner = 0.5 * l;
  const double far_outer = 4.0 * l;
  const double near_outer = 0.5 * l;
  const int reach = static_cast<int>(std::ceil(far_outer / dx));
  const double eps2 = (eps / dx) * (eps / dx) * (1.0 - 1e-12);

  double sum[3] = {0.0, 0.0, 0.0};
  for (int c = -reach; c <= reach; ++c) {
    const int iz = ((-c) % n + n) % n;
    for (int b = -reach; b <= reach; ++b) {
      const int iy = ((-b) % n + n) % n;
      for (int a = -reach; a <= reach; ++a) {
        const double n2 = static_cast<double>(a) * a + static_cast<double>(b) * b +
                          static_cast<double>(c) * c;
        if (n2 == 0.0 || n2 < eps2) continue;
        const double r = std::sqrt(n2) * dx;
        const double wf = radial_window(r, far_inner, far_outer);
        if (wf == 0.0) continue;
        const int ix = ((-a) % n + n) % n;
        const double z[3] = {a * dx, b * dx, c * dx};
        const double wn = radial_window(r, 0.0, near_outer);
        const double taylor = wn * (z[0] * grad[0] + z[1] * grad[1] + z[2] * grad[2]);
        const double val = g[grid.real_index(ix, iy, iz)] - g0 + taylor;
        const double s = wf * val / (r * r * r);
        for (int i = 0; i < 3; ++i) sum[i] += s * z[i];
      }
    }
  }

  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  const double moment = gk.integrate(
      [&](double r) { return r * radial_window(r, 0.0, near_outer); }, 0.0, near_outer, 10, 1e-12);

  std::array<double, 3> out{};
  const double cell = dx * dx * dx / (4.0 * std::numbers::pi);
  for (int i = 0; i < 3; ++i) out[i] = cell * sum[i] - grad[i] * moment / 3.0;
  return out;
}

}  // namespace mns::helmholtz

#include "mns/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mns/helmholtz.hpp"

namespace mns::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

void check_heat_args(double t, double nu) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat: time must be non-negative");
  if (!(nu > 0.0)) throw std::invalid_argument("heat: viscosity must be positive");
}

double polyval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heat kernel

double heat_factor(const TorusGrid& grid, double t, double nu, int nx, int ny, int nz) {
  const double kx = grid.wavenumber(nx), ky = grid.wavenumber(ny), kz = grid.wavenumber(nz);
  return std::exp(-nu * (kx * kx + ky * ky + kz * kz) * t);
}

VectorSpectrum heat_multiply(const VectorSpectrum& f, double t, double nu) {
  check_heat_args(t, nu);
  if (t == 0.0) return f;
  const auto& g = f.grid();
  VectorSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const double e = heat_factor(g, t, nu, nx, ny, nz);
    for (int i = 0; i < 3; ++i) out.component(i)[idx] = e * f.component(i)[idx];
  });
  return out;
}

VectorField heat_convolve(const VectorField& f, double t, double nu) {
  check_heat_args(t, nu);
  if (t == 0.0) return f;
  return fields::to_real(heat_multiply(fields::to_spectral(f), t, nu));
}

std::vector<double> gaussian_derivative_polynomial(int n) {
  if (n < 0) throw std::invalid_argument("gaussian_derivative_polynomial: negative order");
  std::vector<double> h{1.0};
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(h.size() + 1, 0.0);
    for (std::size_t p = 1; p < h.size(); ++p) next[p - 1] += p * h[p];
    for (std::size_t p = 0; p < h.size(); ++p) next[p + 1] -= 0.5 * h[p];
    h = std::move(next);
  }
  return h;
}

namespace {

// d^n/ds^n of (4 pi t)^{-1/2} exp(-s^2 / 4t).
double gaussian_1d(const std::vector<double>& h, int n, double s, double t) {
  const double xi = s / std::sqrt(t);
  return std::pow(t, -0.5 * n) * polyval(h, xi) * std::exp(-0.25 * xi * xi) / std::sqrt(4.0 * kPi * t);
}

// Sign changes of h on [-12, 12], refined by bisection.
std::vector<double> polynomial_roots(const std::vector<double>& h) {
  std::vector<double> roots;
  const int samples = 4800;
  double prev_x = -12.0, prev_v = polyval(h, prev_x);
  for (int i = 1; i <= samples; ++i) {
    const double x = -12.0 + 24.0 * i / samples;
    const double v = polyval(h, x);
    if (v == 0.0) {
      roots.push_back(x);
    } else if (prev_v != 0.0 && (v < 0.0) != (prev_v < 0.0)) {
      auto [a, b] = boost::math::tools::bisect([&](double z) { return polyval(h, z); }, prev_x, x,
                                               boost::math::tools::eps_tolerance<double>(52));
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

struct OneDimNorms {
  double l1;
  double l2sq;
};

OneDimNorms gaussian_norms_1d(int n, double t) {
  const auto h = gaussian_derivative_polynomial(n);
  const double st = std::sqrt(t);
  std::vector<double> breaks{-12.0 * st};
  for (double r : polynomial_roots(h)) breaks.push_back(r * st);
  breaks.push_back(12.0 * st);
  double l1 = 0.0, l2sq = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    l1 += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return std::abs(gaussian_1d(h, n, s, t)); }, breaks[p], breaks[p + 1], 10, 1e-12);
    l2sq += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) {
          const double v = gaussian_1d(h, n, s, t);
          return v * v;
        },
        breaks[p], breaks[p + 1], 10, 1e-12);
  }
  return {l1, l2sq};
}

}  // namespace

double heat_kernel_value(const Point& y, double t, const MultiIndex& k) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_value: t must be positive");
  double v = 1.0;
  for (int a = 0; a < 3; ++a) {
    const int n = k[a];
    if (n < 0) throw std::invalid_argument("heat_kernel_value: negative index");
    v *= gaussian_1d(gaussian_derivative_polynomial(n), n, y[a], t);
  }
  return v;
}

KernelNorms heat_kernel_norms(const MultiIndex& k, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_norms: t must be positive");
  double l1 = 1.0, l2sq = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (k[a] < 0) throw std::invalid_argument("heat_kernel_norms: negative index");
    const auto n = gaussian_norms_1d(k[a], t);
    l1 *= n.l1;
    l2sq *= n.l2sq;
  }
  return {l1, std::sqrt(l2sq)};
}

// ---------------------------------------------------------------------------
// Oseen kernel

ComplexMatrix3 oseen_symbol(const TorusGrid& grid, double tau, int j, int nx, int ny, int nz) {
  if (j < 0 || j > 2) throw std::invalid_argument("oseen_symbol: direction must be 0, 1 or 2");
  ComplexMatrix3 m{};
  if (nx == 0 && ny == 0 && nz == 0) return m;
  const double k[3] = {grid.odd_wavenumber(nx), grid.odd_wavenumber(ny), grid.odd_wavenumber(nz)};
  const auto p = helmholtz::projector_symbol(grid, nx, ny, nz);
  const double e = heat_factor(grid, tau, 1.0, nx, ny, nz);
  const Complex s(0.0, k[j] * e);
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) m[i][l] = s * p[i][l];
  return m;
}

VectorSpectrum projected_flux_divergence(const std::array<VectorSpectrum, 3>& g) {
  const auto& grid = g[0].grid();
  VectorSpectrum w(grid);
  fields::for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    const double k[3] = {grid.odd_wavenumber(nx), grid.odd_wavenumber(ny), grid.odd_wavenumber(nz)};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    Complex d[3];
    for (int i = 0; i < 3; ++i) {
      d[i] = Complex(0.0, k[0]) * g[0].component(i)[idx] + Complex(0.0, k[1]) * g[1].component(i)[idx] +
             Complex(0.0, k[2]) * g[2].component(i)[idx];
    }
    Complex kd(0.0, 0.0);
    if (k2 > 0.0) kd = (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]) / k2;
    for (int i = 0; i < 3; ++i) w.component(i)[idx] = d[i] - k[i] * kd;
  });
  return w;
}

VectorSpectrum oseen_multiply(const std::array<VectorSpectrum, 3>& g, double tau) {
  const auto& grid = g[0].grid();
  VectorSpectrum out(grid);
  fields::for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    Complex acc[3] = {0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
      const auto m = oseen_symbol(grid, tau, j, nx, ny, nz);
      for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l) acc[i] += m[i][l] * g[j].component(l)[idx];
    }
    for (int i = 0; i < 3; ++i) out.component(i)[idx] = acc[i];
  });
  return out;
}

VectorSpectrum oseen_multiply_staged(const std::array<VectorSpectrum, 3>& g, double tau) {
  const auto& grid = g[0].grid();
  VectorSpectrum d(grid);
  for (int j = 0; j < 3; ++j) {
    MultiIndex e;
    (j == 0 ? e.k1 : (j == 1 ? e.k2 : e.k3)) = 1;
    d += fields::derivative(g[j], e);
  }
  return heat_multiply(helmholtz::leray_project(d), tau, 1.0);
}

namespace {

// D^m (erf(x)/x) with D h = h'/x, for m = 1, 2, 3.
double erf_ratio_derivative(int m, double x) {
  if (x < 2.0) {
    const double x2 = x * x;
    double sum = 0.0, pw = 1.0, fact = 1.0;
    for (int n = 0; n < 60; ++n) {
      if (n > 0) fact *= n;
      if (n >= m) {
        double falling = 1.0;
        for (int q = 0; q < m; ++q) falling *= 2.0 * (n - q);
        const double term = falling * pw / (fact * (2 * n + 1));
        sum += (n % 2 == 0 ? term : -term);
        pw *= x2;
        if (std::abs(term) < 1e-18 * std::abs(sum) && n > m + 4) break;
      }
    }
    return 2.0 / std::sqrt(kPi) * sum;
  }
  const double e = std::exp(-x * x) / std::sqrt(kPi);
  const double f = std::erf(x);
  const double x2 = x * x;
  switch (m) {
    case 1: return 2.0 * e / x2 - f / (x2 * x);
    case 2: return -(4.0 / x2 + 6.0 / (x2 * x2)) * e + 3.0 * f / (x2 * x2 * x);
    default:
      return (8.0 / x2 + 20.0 / (x2 * x2) + 30.0 / (x2 * x2 * x2)) * e - 15.0 * f / (x2 * x2 * x2 * x);
  }
}

// Far-field limit r^4 [d_i d_l d_j (1/4 pi r)] at unit direction w.
Matrix3 far_field(const double w[3], int j) {
  Matrix3 t{};
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      const double sym = (i == l ? w[j] : 0.0) + (i == j ? w[l] : 0.0) + (l == j ? w[i] : 0.0);
      t[i][l] = (3.0 * sym - 15.0 * w[i] * w[l] * w[j]) / (4.0 * kPi);
    }
  return t;
}

double entry_sum(const Matrix3& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += std::abs(v);
  return s;
}

// Product rule on the sphere: Gauss-Legendre in cos(theta), trapezoid in phi.
template <class F>
double sphere_integral(F&& f) {
  constexpr int kTheta = 64;
  constexpr int kPhi = 128;
  const auto& nodes = boost::math::quadrature::gauss<double, kTheta>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, kTheta>::weights();
  // abscissa() holds the non-negative half; mirror it.
  std::vector<std::pair<double, double>> rule;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rule.push_back({nodes[i], weights[i]});
    if (nodes[i] != 0.0) rule.push_back({-nodes[i], weights[i]});
  }
  double sum = 0.0;
  for (const auto& [c, wc] : rule) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double ring = 0.0;
    for (int p = 0; p < kPhi; ++p) {
      const double phi = 2.0 * kPi * (p + 0.5) / kPhi;
      const double w[3] = {s * std::cos(phi), s * std::sin(phi), c};
      ring += f(w);
    }
    sum += wc * ring * (2.0 * kPi / kPhi);
  }
  return sum;
}

double far_field_coefficient(int j) {
  return sphere_integral([j](const double* w) { return entry_sum(far_field(w, j)); });
}

// int over a <= |y| <= b of the entry sum, radial Gauss-Legendre panels.
double shell_l1(double tau, int j, double a, double b) {
  if (b <= a) return 0.0;
  const double st = std::sqrt(tau);
  std::vector<double> breaks{a};
  for (double r = 0.5 * st; r < b; r += (r < 4.0 * st ? 0.5 * st : 2.0 * st)) {
    if (r > a) breaks.push_back(r);
  }
  breaks.push_back(b);
  const auto& nodes = boost::math::quadrature::gauss<double, 20>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, 20>::weights();
  std::vector<std::pair<double, double>> radial;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      radial.push_back({mid + half * nodes[i], half * weights[i]});
      if (nodes[i] != 0.0) radial.push_back({mid - half * nodes[i], half * weights[i]});
    }
  }
  return sphere_integral([&](const double* w) {
    double s = 0.0;
    for (const auto& [r, wr] : radial) {
      const Point y{r * w[0], r * w[1], r * w[2]};
      s += wr * r * r * entry_sum(oseen_kernel_value(y, tau, j));
    }
    return s;
  });
}

}  // namespace

Matrix3 oseen_kernel_value(const Point& y, double tau, int j) {
  if (!(tau > 0.0)) throw std::invalid_argument("oseen_kernel_value: tau must be positive");
  if (j < 0 || j > 2) throw std::invalid_argument("oseen_kernel_value: direction must be 0, 1 or 2");
  const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  const double r = std::sqrt(r2);
  const double st = std::sqrt(tau);
  const double x = r / (2.0 * st);
  const double c0 = 1.0 / (4.0 * kPi * 2.0 * st);
  const double b = c0 / (16.0 * tau * tau) * erf_ratio_derivative(2, x);
  const double c = c0 / (64.0 * tau * tau * tau) * erf_ratio_derivative(3, x);
  const double heat = std::pow(4.0 * kPi * tau, -1.5) * std::exp(-r2 / (4.0 * tau));
  const double dk = -y[j] / (2.0 * tau) * heat;
  Matrix3 t{};
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      const double sym = (i == l ? y[j] : 0.0) + (i == j ? y[l] : 0.0) + (l == j ? y[i] : 0.0);
      t[i][l] = (i == l ? dk : 0.0) + b * sym + c * y[i] * y[l] * y[j];
    }
  return t;
}

double oseen_kernel_l1(double tau, int j) { return oseen_kernel_tail_l1(tau, j, 0.0); }

double oseen_kernel_tail_l1(double tau, int j, double radius) {
  if (!(tau > 0.0)) throw std::invalid_argument("oseen_kernel_l1: tau must be positive");
  if (j < 0 || j > 2) throw std::invalid_argument("oseen_kernel_l1: direction must be 0, 1 or 2");
  if (!(radius >= 0.0)) throw std::invalid_argument("oseen_kernel_tail_l1: negative radius");
  const double outer = 20.0 * std::sqrt(tau);
  const double r0 = std::max(radius, outer);
  return shell_l1(tau, j, radius, outer) + far_field_coefficient(j) / r0;
}

fields::ScalarField oseen_kernel_torus(const TorusGrid& grid, double tau, int j, int i, int l) {
  ScalarSpectrum s(grid);
  const double scale = 1.0 / grid.volume();
  fields::for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    s[idx] = scale * oseen_symbol(grid, tau, j, nx, ny, nz)[i][l];
  });
  return fields::to_real(s);
}

double oseen_kernel_l1_torus(const TorusGrid& grid, double tau, int j) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) total += fields::norm(oseen_kernel_torus(grid, tau, j, i, l), fields::Norm::l1());
  return total;
}

// ---------------------------------------------------------------------------
// Duhamel quadrature

double phi_function(int n, double x) {
  if (n < 0 || n > 8) throw std::invalid_argument("phi_function: order must be in [0, 8]");
  if (std::abs(x) < 1.0) {
    double inv_fact = 1.0;
    for (int q = 2; q <= n; ++q) inv_fact /= q;
    double term = inv_fact, sum = 0.0;
    for (int m = 0; m < 30; ++m) {
      sum += term;
      term *= x / (m + n + 1);
    }
    return sum;
  }
  double phi = std::exp(x);
  double inv_fact = 1.0;  // 1 / (q - 1)!
  for (int q = 1; q <= n; ++q) {
    phi = (phi - inv_fact) / x;
    inv_fact /= q;
  }
  return phi;
}

namespace {

constexpr int kStencil = 4;

// Offsets of the four stencil nodes relative to the left end of the interval.
constexpr double kOffsets[3][kStencil] = {{0, 1, 2, 3}, {-1, 0, 1, 2}, {-2, -1, 0, 1}};

// Inverse Vandermonde: b_p = sum_q inv[p][q] F_q for F(sigma) = sum_p b_p sigma^p.
using Inverse = std::array<std::array<double, kStencil>, kStencil>;

Inverse inverse_vandermonde(const double* s) {
  // Solve by Gauss-Jordan on the 4x4 system.
  double a[kStencil][2 * kStencil] = {};
  for (int q = 0; q < kStencil; ++q) {
    double p = 1.0;
    for (int c = 0; c < kStencil; ++c) {
      a[q][c] = p;
      p *= s[q];
    }
    a[q][kStencil + q] = 1.0;
  }
  for (int col = 0; col < kStencil; ++col) {
    int piv = col;
    for (int r = col + 1; r < kStencil; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    for (int c = 0; c < 2 * kStencil; ++c) std::swap(a[col][c], a[piv][c]);
    const double d = a[col][col];
    for (int c = 0; c < 2 * kStencil; ++c) a[col][c] /= d;
    for (int r = 0; r < kStencil; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (int c = 0; c < 2 * kStencil; ++c) a[r][c] -= f * a[col][c];
    }
  }
  // a now holds [I | V^{-1}] with V[q][p] = s_q^p, so b = V^{-1} F.
  Inverse inv{};
  for (int p = 0; p < kStencil; ++p)
    for (int q = 0; q < kStencil; ++q) inv[p][q] = a[p][kStencil + q];
  return inv;
}

const std::array<Inverse, 3>& stencil_inverses() {
  static const std::array<Inverse, 3> inv = {inverse_vandermonde(kOffsets[0]), inverse_vandermonde(kOffsets[1]),
                                             inverse_vandermonde(kOffsets[2])};
  return inv;
}

// Weights of int_0^{theta h} exp(-z (theta h - s)) F(s) ds on one stencil.
std::array<double, kStencil> interval_weights(const Inverse& inv, double z, double h, double theta) {
  double moments[kStencil];
  double fact = 1.0;
  for (int p = 0; p < kStencil; ++p) {
    if (p > 0) fact *= p;
    moments[p] = h * std::pow(theta, p + 1) * fact * phi_function(p + 1, -z * h * theta);
  }
  std::array<double, kStencil> w{};
  for (int q = 0; q < kStencil; ++q) {
    double s = 0.0;
    for (int p = 0; p < kStencil; ++p) s += inv[p][q] * moments[p];
    w[q] = s;
  }
  return w;
}

int stencil_type(int i, int m) {
  if (i == 0) return 0;
  if (i == m - 1) return 2;
  return 1;
}

int stencil_start(int i, int m) {
  if (i == 0) return 0;
  if (i == m - 1) return m - 3;
  return i - 1;
}

struct IntervalTable {
  std::vector<double> decay;                               // exp(-z h) per |n|^2
  std::vector<std::array<std::array<double, 4>, 3>> w;     // per |n|^2, per stencil type
};

IntervalTable build_table(const TorusGrid& grid, double h, double nu) {
  const int half = grid.points() / 2;
  const std::size_t count = static_cast<std::size_t>(3) * half * half + 1;
  IntervalTable t;
  t.decay.resize(count);
  t.w.resize(count);
  const auto& inv = stencil_inverses();
  const double k0 = grid.unit_wavenumber();
  for (std::size_t n2 = 0; n2 < count; ++n2) {
    const double z = nu * k0 * k0 * static_cast<double>(n2);
    t.decay[n2] = std::exp(-z * h);
    for (int s = 0; s < 3; ++s) t.w[n2][s] = interval_weights(inv[s], z, h, 1.0);
  }
  return t;
}

void check_slab(const SlabSamples& f) {
  if (f.intervals() < 3) throw std::invalid_argument("duhamel: slab needs at least 3 intervals");
  if (!(f.h > 0.0)) throw std::invalid_argument("duhamel: node spacing must be positive");
  for (const auto& v : f.values) fields::require_same_grid(v.grid(), f.values[0].grid(), "duhamel");
}

}  // namespace

std::vector<VectorSpectrum> duhamel_nodes(const SlabSamples& f, double nu) {
  check_slab(f);
  const auto& grid = f.values[0].grid();
  const int m = f.intervals();
  const auto table = build_table(grid, f.h, nu);
  std::vector<VectorSpectrum> out;
  out.reserve(m + 1);
  out.emplace_back(grid);
  for (int i = 0; i < m; ++i) {
    const int type = stencil_type(i, m);
    const int start = stencil_start(i, m);
    VectorSpectrum next(grid);
    const auto& prev = out.back();
    fields::for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
      const auto n2 = static_cast<std::size_t>(nx * nx + ny * ny + nz * nz);
      const double e = table.decay[n2];
      const auto& w = table.w[n2][type];
      for (int c = 0; c < 3; ++c) {
        Complex v = e * prev.component(c)[idx];
        for (int q = 0; q < kStencil; ++q) v += w[q] * f.values[start + q].component(c)[idx];
        next.component(c)[idx] = v;
      }
    });
    out.push_back(std::move(next));
  }
  return out;
}

VectorSpectrum duhamel_at(const SlabSamples& f, double nu, double t) {
  check_slab(f);
  const int m = f.intervals();
  const double end = f.node(m);
  const double slack = 1e-12 * std::max(1.0, std::abs(end));
  if (t < f.t0 - slack || t > end + slack) throw std::invalid_argument("duhamel_at: time outside slab");
  const double pos = std::clamp((t - f.t0) / f.h, 0.0, static_cast<double>(m));
  int i = std::min(static_cast<int>(std::floor(pos)), m - 1);
  const double theta = pos - i;
  const auto nodes = duhamel_nodes(f, nu);
  if (theta == 0.0) return nodes[i];
  if (theta == 1.0) return nodes[i + 1];
  const auto& grid = f.values[0].grid();
  const int type = stencil_type(i, m);
  const int start = stencil_start(i, m);
  const auto& inv = stencil_inverses()[type];
  const int half = grid.points() / 2;
  const std::size_t count = static_cast<std::size_t>(3) * half * half + 1;
  std::vector<std::array<double, 4>> w(count);
  std::vector<double> decay(count);
  const double k0 = grid.unit_wavenumber();
  for (std::size_t n2 = 0; n2 < count; ++n2) {
    const double z = nu * k0 * k0 * static_cast<double>(n2);
    decay[n2] = std::exp(-z * f.h * theta);
    w[n2] = interval_weights(inv, z, f.h, theta);
  }
  VectorSpectrum out(grid);
  fields::for_each_mode(grid, [&](std::size_t idx, int nx, int ny, int nz) {
    const auto n2 = static_cast<std::size_t>(nx * nx + ny * ny + nz * nz);
    for (int c = 0; c < 3; ++c) {
      Complex v = decay[n2] * nodes[i].component(c)[idx];
      for (int q = 0; q < kStencil; ++q) v += w[n2][q] * f.values[start + q].component(c)[idx];
      out.component(c)[idx] = v;
    }
  });
  return out;
}

VectorSpectrum oseen_apply(double t0, double h, const std::vector<std::array<VectorSpectrum, 3>>& g, double t,
                           double nu) {
  if (g.empty()) throw std::invalid_argument("oseen_apply: empty slab");
  SlabSamples f;
  f.t0 = t0;
  f.h = h;
  f.values.reserve(g.size());
  for (const auto& gl : g) f.values.push_back(projected_flux_divergence(gl));
  return duhamel_at(f, nu, t);
}

}  // namespace mns::kernels

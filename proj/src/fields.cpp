#include "mns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "mns/helmholtz.hpp"

namespace mns::fields {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(got) + ", expected " + std::to_string(want) + ")");
  }
}

// (i k)^p for integer p >= 0, with the odd-power Nyquist rule.
Complex axis_symbol(const TorusGrid& grid, int signed_index, int power) {
  if (power == 0) return {1.0, 0.0};
  if (power % 2 == 1 && grid.is_nyquist(signed_index)) return {0.0, 0.0};
  const double k = grid.wavenumber(signed_index);
  double mag = 1.0;
  for (int p = 0; p < power; ++p) mag *= k;
  switch (power % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

bool outside_band(const TorusGrid& grid, int nx, int ny, int nz, int cutoff) {
  (void)grid;
  return nx > cutoff || std::abs(ny) > cutoff || std::abs(nz) > cutoff;
}

}  // namespace

// ---------------------------------------------------------------------------
// Containers

ScalarSpectrum::ScalarSpectrum(const TorusGrid& grid)
    : grid_(grid), coeffs_(grid.spectral_size(), Complex(0.0, 0.0)) {}

ScalarSpectrum::ScalarSpectrum(const TorusGrid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  check_size(coeffs_.size(), grid_.spectral_size(), "ScalarSpectrum");
}

VectorSpectrum::VectorSpectrum(const TorusGrid& grid) : grid_(grid) {
  for (auto& c : coeffs_) c.assign(grid.spectral_size(), Complex(0.0, 0.0));
}

VectorSpectrum::VectorSpectrum(const TorusGrid& grid, std::array<std::vector<Complex>, 3> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) check_size(c.size(), grid_.spectral_size(), "VectorSpectrum");
}

VectorSpectrum& VectorSpectrum::operator+=(const VectorSpectrum& other) {
  require_same_grid(grid_, other.grid_, "VectorSpectrum::+=");
  for (int i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < coeffs_[i].size(); ++m) coeffs_[i][m] += other.coeffs_[i][m];
  }
  return *this;
}

VectorSpectrum& VectorSpectrum::operator-=(const VectorSpectrum& other) {
  require_same_grid(grid_, other.grid_, "VectorSpectrum::-=");
  for (int i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < coeffs_[i].size(); ++m) coeffs_[i][m] -= other.coeffs_[i][m];
  }
  return *this;
}

VectorSpectrum& VectorSpectrum::operator*=(double s) {
  for (auto& c : coeffs_) {
    for (auto& z : c) z *= s;
  }
  return *this;
}

VectorSpectrum& VectorSpectrum::add_scaled(double s, const VectorSpectrum& other) {
  require_same_grid(grid_, other.grid_, "VectorSpectrum::add_scaled");
  for (int i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < coeffs_[i].size(); ++m) coeffs_[i][m] += s * other.coeffs_[i][m];
  }
  return *this;
}

ScalarField::ScalarField(const TorusGrid& grid) : grid_(grid), samples_(grid.real_size(), 0.0) {}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  check_size(samples_.size(), grid_.real_size(), "ScalarField");
}

VectorField::VectorField(const TorusGrid& grid) : grid_(grid) {
  for (auto& c : samples_) c.assign(grid.real_size(), 0.0);
}

VectorField::VectorField(const TorusGrid& grid, std::array<std::vector<double>, 3> samples)
    : grid_(grid), samples_(std::move(samples)) {
  for (const auto& c : samples_) check_size(c.size(), grid_.real_size(), "VectorField");
}

std::span<double> VectorField::mutable_component(int i) {
  cache_.reset();
  return samples_[i];
}

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_grid(grid_, other.grid_, "VectorField::+=");
  cache_.reset();
  for (int i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < samples_[i].size(); ++m) samples_[i][m] += other.samples_[i][m];
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_grid(grid_, other.grid_, "VectorField::-=");
  cache_.reset();
  for (int i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < samples_[i].size(); ++m) samples_[i][m] -= other.samples_[i][m];
  }
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  cache_.reset();
  for (auto& c : samples_) {
    for (auto& x : c) x *= s;
  }
  return *this;
}

bool VectorField::all_finite() const {
  for (const auto& c : samples_) {
    for (double x : c) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------------------
// Transforms

VectorSpectrum to_spectral(const VectorField& f) {
  if (const VectorSpectrum* cached = f.spectral_cache()) return *cached;
  const auto& engine = FftEngine::for_size(f.grid().points());
  VectorSpectrum out(f.grid());
  for (int i = 0; i < 3; ++i) engine.forward(f.component(i), out.component(i));
  return out;
}

ScalarSpectrum to_spectral(const ScalarField& f) {
  const auto& engine = FftEngine::for_size(f.grid().points());
  ScalarSpectrum out(f.grid());
  engine.forward(f.samples(), out.coeffs());
  return out;
}

VectorField to_real(const VectorSpectrum& coeffs, bool keep_cache) {
  const auto& engine = FftEngine::for_size(coeffs.grid().points());
  VectorField out(coeffs.grid());
  for (int i = 0; i < 3; ++i) engine.inverse(coeffs.component(i), out.samples_[i]);
  if (keep_cache) out.cache_ = std::make_shared<const VectorSpectrum>(coeffs);
  return out;
}

ScalarField to_real(const ScalarSpectrum& coeffs) {
  const auto& engine = FftEngine::for_size(coeffs.grid().points());
  ScalarField out(coeffs.grid());
  engine.inverse(coeffs.coeffs(), out.samples());
  return out;
}

VectorField to_real(std::array<std::vector<Complex>, 3> coeffs, const TorusGrid& grid) {
  return to_real(VectorSpectrum(grid, std::move(coeffs)));
}

// ---------------------------------------------------------------------------
// Differential operators

Complex derivative_symbol(const TorusGrid& grid, const MultiIndex& k, int nx, int ny, int nz) {
  return axis_symbol(grid, nx, k.k1) * axis_symbol(grid, ny, k.k2) * axis_symbol(grid, nz, k.k3);
}

VectorSpectrum derivative(const VectorSpectrum& f, const MultiIndex& k) {
  if (k.k1 < 0 || k.k2 < 0 || k.k3 < 0) throw std::invalid_argument("derivative: negative index");
  VectorSpectrum out(f.grid());
  const auto& g = f.grid();
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const Complex s = derivative_symbol(g, k, nx, ny, nz);
    for (int i = 0; i < 3; ++i) out.component(i)[idx] = s * f.component(i)[idx];
  });
  return out;
}

VectorField derivative(const VectorField& f, const MultiIndex& k) {
  return to_real(derivative(to_spectral(f), k));
}

ScalarSpectrum derivative(const ScalarSpectrum& f, const MultiIndex& k) {
  ScalarSpectrum out(f.grid());
  const auto& g = f.grid();
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    out[idx] = derivative_symbol(g, k, nx, ny, nz) * f[idx];
  });
  return out;
}

ScalarField derivative(const ScalarField& f, const MultiIndex& k) {
  return to_real(derivative(to_spectral(f), k));
}

ScalarSpectrum divergence(const VectorSpectrum& f) {
  const auto& g = f.grid();
  ScalarSpectrum out(g);
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const Complex ikx(0.0, g.odd_wavenumber(nx));
    const Complex iky(0.0, g.odd_wavenumber(ny));
    const Complex ikz(0.0, g.odd_wavenumber(nz));
    out[idx] = ikx * f.component(0)[idx] + iky * f.component(1)[idx] + ikz * f.component(2)[idx];
  });
  return out;
}

ScalarField divergence(const VectorField& f) { return to_real(divergence(to_spectral(f))); }

VectorSpectrum laplacian(const VectorSpectrum& f) {
  const auto& g = f.grid();
  VectorSpectrum out(g);
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const double kx = g.wavenumber(nx), ky = g.wavenumber(ny), kz = g.wavenumber(nz);
    const double s = -(kx * kx + ky * ky + kz * kz);
    for (int i = 0; i < 3; ++i) out.component(i)[idx] = s * f.component(i)[idx];
  });
  return out;
}

VectorField laplacian(const VectorField& f) { return to_real(laplacian(to_spectral(f))); }

VectorSpectrum curl(const VectorSpectrum& f) {
  const auto& g = f.grid();
  VectorSpectrum out(g);
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const Complex ikx(0.0, g.odd_wavenumber(nx));
    const Complex iky(0.0, g.odd_wavenumber(ny));
    const Complex ikz(0.0, g.odd_wavenumber(nz));
    const Complex fx = f.component(0)[idx], fy = f.component(1)[idx], fz = f.component(2)[idx];
    out.component(0)[idx] = iky * fz - ikz * fy;
    out.component(1)[idx] = ikz * fx - ikx * fz;
    out.component(2)[idx] = ikx * fy - iky * fx;
  });
  return out;
}

VectorField curl(const VectorField& f) { return to_real(curl(to_spectral(f))); }

VectorSpectrum gradient(const ScalarSpectrum& p) {
  const auto& g = p.grid();
  VectorSpectrum out(g);
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    out.component(0)[idx] = Complex(0.0, g.odd_wavenumber(nx)) * p[idx];
    out.component(1)[idx] = Complex(0.0, g.odd_wavenumber(ny)) * p[idx];
    out.component(2)[idx] = Complex(0.0, g.odd_wavenumber(nz)) * p[idx];
  });
  return out;
}

VectorField gradient(const ScalarField& p) { return to_real(gradient(to_spectral(p))); }

VectorSpectrum dealias_truncate(VectorSpectrum f) {
  const auto& g = f.grid();
  const int cutoff = g.dealias_cutoff();
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    if (outside_band(g, nx, ny, nz, cutoff)) {
      for (int i = 0; i < 3; ++i) f.component(i)[idx] = 0.0;
    }
  });
  return f;
}

ScalarSpectrum dealias_truncate(ScalarSpectrum f) {
  const auto& g = f.grid();
  const int cutoff = g.dealias_cutoff();
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    if (outside_band(g, nx, ny, nz, cutoff)) f[idx] = 0.0;
  });
  return f;
}

// ---------------------------------------------------------------------------
// Norms

double spectral_energy(const VectorSpectrum& f) {
  const auto& g = f.grid();
  double sum = 0.0;
  for_each_mode(g, [&](std::size_t idx, int nx, int, int) {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e += std::norm(f.component(i)[idx]);
    sum += hermitian_weight(g, nx) * e;
  });
  return sum * g.volume();
}

double derivative_l2(const VectorSpectrum& f, const MultiIndex& k) {
  const auto& g = f.grid();
  double sum = 0.0;
  for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const double s = std::norm(derivative_symbol(g, k, nx, ny, nz));
    if (s == 0.0) return;
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e += std::norm(f.component(i)[idx]);
    sum += hermitian_weight(g, nx) * s * e;
  });
  return std::sqrt(sum * g.volume());
}

namespace {

void check_order(Norm which, int max_order) {
  if (which.order < 0) throw std::invalid_argument("norm: negative Sobolev order");
  if ((which.kind == Norm::Kind::Hm || which.kind == Norm::Kind::Cm) && which.order > max_order) {
    throw std::invalid_argument("norm: order " + std::to_string(which.order) +
                                " exceeds configured maximum " + std::to_string(max_order));
  }
}

// |D^k f|_{L2} for all |k| <= m in one pass over the modes.
double sobolev_sum(const VectorSpectrum& f, int m) {
  const auto& g = f.grid();
  const auto indices = multi_indices_up_to(m);
  // Per axis |(ik)^p|^2 tables, p = 0..m.
  const int n = g.points();
  auto table = [&](int axis_len, bool half_axis) {
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(axis_len));
    for (int i = 0; i < axis_len; ++i) {
      const int s = half_axis ? i : g.wave_index(i);
      for (int p = 0; p <= m; ++p) t[p][i] = std::norm(axis_symbol(g, s, p));
    }
    return t;
  };
  const auto tx = table(g.half(), true);
  const auto ty = table(n, false);
  const auto tz = table(n, false);
  std::vector<double> sums(indices.size(), 0.0);
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < g.half(); ++ix, ++idx) {
        double e = 0.0;
        for (int i = 0; i < 3; ++i) e += std::norm(f.component(i)[idx]);
        if (e == 0.0) continue;
        e *= hermitian_weight(g, ix);
        for (std::size_t q = 0; q < indices.size(); ++q) {
          const auto& k = indices[q];
          sums[q] += e * tx[k.k1][ix] * ty[k.k2][iy] * tz[k.k3][iz];
        }
      }
    }
  }
  double total = 0.0;
  for (double s : sums) total += std::sqrt(s * g.volume());
  return total;
}

}  // namespace

double norm(const VectorSpectrum& f, Norm which, int max_order) {
  check_order(which, max_order);
  switch (which.kind) {
    case Norm::Kind::L2: return std::sqrt(spectral_energy(f));
    case Norm::Kind::Hm: return sobolev_sum(f, which.order);
    default: break;
  }
  return norm(to_real(f), which, max_order);
}

double norm(const VectorField& f, Norm which, int max_order) {
  check_order(which, max_order);
  const auto& g = f.grid();
  switch (which.kind) {
    case Norm::Kind::L1: {
      double sum = 0.0;
      for (std::size_t m = 0; m < g.real_size(); ++m) {
        sum += std::abs(f.component(0)[m]) + std::abs(f.component(1)[m]) + std::abs(f.component(2)[m]);
      }
      return sum * g.cell_volume();
    }
    case Norm::Kind::L2: {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (double x : f.component(i)) sum += x * x;
      }
      return std::sqrt(sum * g.cell_volume());
    }
    case Norm::Kind::Linf: {
      double mx = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (double x : f.component(i)) mx = std::max(mx, std::abs(x));
      }
      return mx;
    }
    case Norm::Kind::Hm: return sobolev_sum(to_spectral(f), which.order);
    case Norm::Kind::Cm: {
      const auto spec = to_spectral(f);
      double total = 0.0;
      for (const auto& k : multi_indices_up_to(which.order)) {
        const auto d = to_real(derivative(spec, k), false);
        double mx = 0.0;
        for (std::size_t m = 0; m < g.real_size(); ++m) {
          const double a = d.component(0)[m], b = d.component(1)[m], c = d.component(2)[m];
          mx = std::max(mx, std::sqrt(a * a + b * b + c * c));
        }
        total += mx;
      }
      return total;
    }
  }
  return 0.0;
}

double norm(const ScalarField& f, Norm which) {
  const auto& g = f.grid();
  switch (which.kind) {
    case Norm::Kind::L1: {
      double sum = 0.0;
      for (double x : f.samples()) sum += std::abs(x);
      return sum * g.cell_volume();
    }
    case Norm::Kind::L2: {
      double sum = 0.0;
      for (double x : f.samples()) sum += x * x;
      return std::sqrt(sum * g.cell_volume());
    }
    case Norm::Kind::Linf: {
      double mx = 0.0;
      for (double x : f.samples()) mx = std::max(mx, std::abs(x));
      return mx;
    }
    default: break;
  }
  throw std::invalid_argument("norm: scalar fields support L1, L2 and Linf only");
}

double inner_product(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid(), v.grid(), "inner_product");
  double sum = 0.0;
  for (std::size_t m = 0; m < u.grid().real_size(); ++m) {
    sum += u.component(0)[m] * v.component(0)[m] + u.component(1)[m] * v.component(1)[m] +
           u.component(2)[m] * v.component(2)[m];
  }
  return sum * u.grid().cell_volume();
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double sum = 0.0;
  for (std::size_t m = 0; m < a.grid().real_size(); ++m) sum += a[m] * b[m];
  return sum * a.grid().cell_volume();
}

// ---------------------------------------------------------------------------
// Products

std::vector<LeibnizTerm> leibniz_expand(const MultiIndex& k) {
  if (k.k1 < 0 || k.k2 < 0 || k.k3 < 0) throw std::invalid_argument("leibniz_expand: negative index");
  auto binom = [](int n, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
  };
  std::vector<LeibnizTerm> terms;
  for (int a1 = 0; a1 <= k.k1; ++a1) {
    for (int a2 = 0; a2 <= k.k2; ++a2) {
      for (int a3 = 0; a3 <= k.k3; ++a3) {
        terms.push_back({{a1, a2, a3},
                         {k.k1 - a1, k.k2 - a2, k.k3 - a3},
                         binom(k.k1, a1) * binom(k.k2, a2) * binom(k.k3, a3)});
      }
    }
  }
  return terms;
}

VectorField pointwise_product(const ScalarField& a, const VectorField& v, bool dealias) {
  require_same_grid(a.grid(), v.grid(), "pointwise_product");
  const auto& g = a.grid();
  if (!dealias) {
    VectorField out(g);
    for (int i = 0; i < 3; ++i) {
      auto dst = out.mutable_component(i);
      for (std::size_t m = 0; m < g.real_size(); ++m) dst[m] = a[m] * v.component(i)[m];
    }
    return out;
  }
  const auto at = to_real(dealias_truncate(to_spectral(a)));
  const auto vt = to_real(dealias_truncate(to_spectral(v)), false);
  VectorField prod(g);
  for (int i = 0; i < 3; ++i) {
    auto dst = prod.mutable_component(i);
    for (std::size_t m = 0; m < g.real_size(); ++m) dst[m] = at[m] * vt.component(i)[m];
  }
  return to_real(dealias_truncate(to_spectral(prod)));
}

// ---------------------------------------------------------------------------
// Initial data

double bump_width(double radius) { return radius / 8.5; }

VectorField make_divfree_bump(const TorusGrid& grid, const Point& center, double radius,
                              double amplitude) {
  const double l = grid.side_length();
  if (!(radius > 0.0) || radius >= 0.25 * l) {
    throw std::invalid_argument("make_divfree_bump: radius must be in (0, L/4)");
  }
  if (amplitude == 0.0) return VectorField(grid);
  const int n = grid.points();
  const double sigma = bump_width(radius);
  const double scale = amplitude * sigma * std::exp(0.5);
  auto min_image = [l](double d) { return d - l * std::round(d / l); };
  ScalarField potential(grid);
  for (int iz = 0; iz < n; ++iz) {
    const double dz = min_image(grid.coordinate(iz) - center[2]);
    for (int iy = 0; iy < n; ++iy) {
      const double dy = min_image(grid.coordinate(iy) - center[1]);
      for (int ix = 0; ix < n; ++ix) {
        const double dx = min_image(grid.coordinate(ix) - center[0]);
        const double r2 = dx * dx + dy * dy + dz * dz;
        potential[grid.real_index(ix, iy, iz)] = scale * std::exp(-0.5 * r2 / (sigma * sigma));
      }
    }
  }
  VectorSpectrum psi(grid);
  const auto phi = to_spectral(potential);
  std::copy(phi.coeffs().begin(), phi.coeffs().end(), psi.component(2).begin());
  return to_real(curl(psi));
}

VectorField taylor_green(const TorusGrid& grid, double amplitude) {
  const int n = grid.points();
  const double w = grid.unit_wavenumber();
  VectorField out(grid);
  auto ux = out.mutable_component(0);
  auto uy = out.mutable_component(1);
  for (int iz = 0; iz < n; ++iz) {
    const double z = w * grid.coordinate(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double y = w * grid.coordinate(iy);
      for (int ix = 0; ix < n; ++ix) {
        const double x = w * grid.coordinate(ix);
        const std::size_t m = grid.real_index(ix, iy, iz);
        ux[m] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
        uy[m] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
      }
    }
  }
  return out;
}

VectorField shear_flow(const TorusGrid& grid, double amplitude) {
  const int n = grid.points();
  const double w = grid.unit_wavenumber();
  VectorField out(grid);
  auto ux = out.mutable_component(0);
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      const double v = amplitude * std::sin(w * grid.coordinate(iy));
      for (int ix = 0; ix < n; ++ix) ux[grid.real_index(ix, iy, iz)] = v;
    }
  }
  return out;
}

namespace {

// Fills a Hermitian-consistent half spectrum with damped Gaussian
// coefficients on |n_i| <= band.
void fill_random(const TorusGrid& grid, int band, std::mt19937_64& rng, std::span<Complex> c) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid.points();
  const double b2 = static_cast<double>(band) * band;
  auto damp = [&](int nx, int ny, int nz) {
    return std::exp(-static_cast<double>(nx * nx + ny * ny + nz * nz) / b2);
  };
  for (int iz = 0; iz < n; ++iz) {
    const int nz = grid.wave_index(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ny = grid.wave_index(iy);
      for (int ix = 0; ix < grid.half(); ++ix) {
        const std::size_t idx = grid.spectral_index(ix, iy, iz);
        if (ix > band || std::abs(ny) > band || std::abs(nz) > band) continue;
        const double re = normal(rng);
        const double im = normal(rng);
        if (ix > 0) {
          c[idx] = damp(ix, ny, nz) * Complex(re, im);
          continue;
        }
        // nx = 0 plane: pair (ny, nz) with (-ny, -nz); assign to the larger.
        if (ny == 0 && nz == 0) {
          c[idx] = Complex(0.0, 0.0);
          continue;
        }
        const bool canonical = (nz > 0) || (nz == 0 && ny > 0);
        if (!canonical) continue;
        const Complex v = damp(0, ny, nz) * Complex(re, im);
        c[idx] = v;
        const int jy = (-ny + n) % n;
        const int jz = (-nz + n) % n;
        c[grid.spectral_index(0, jy, jz)] = std::conj(v);
      }
    }
  }
}

}  // namespace

VectorField random_bandlimited(const TorusGrid& grid, int band, std::uint64_t seed,
                               bool divergence_free) {
  if (band < 1 || band >= grid.points() / 2) {
    throw std::invalid_argument("random_bandlimited: band must be in [1, N/2)");
  }
  std::mt19937_64 rng(seed);
  VectorSpectrum spec(grid);
  for (int i = 0; i < 3; ++i) fill_random(grid, band, rng, spec.component(i));
  if (divergence_free) spec = helmholtz::leray_project(spec);
  return to_real(spec);
}

ScalarField random_bandlimited_scalar(const TorusGrid& grid, int band, std::uint64_t seed) {
  if (band < 1 || band >= grid.points() / 2) {
    throw std::invalid_argument("random_bandlimited_scalar: band must be in [1, N/2)");
  }
  std::mt19937_64 rng(seed);
  ScalarSpectrum spec(grid);
  fill_random(grid, band, rng, spec.coeffs());
  return to_real(spec);
}

VectorField contract_coordinates(const VectorField& u, int factor) {
  if (factor < 1) throw std::invalid_argument("contract_coordinates: factor must be a positive integer");
  if (factor == 1) return u;
  const auto& g = u.grid();
  const int n = g.points();
  VectorField out(g);
  auto source = [&](int i) -> int {
    const long s = static_cast<long>(g.wave_index(i)) * factor;
    if (s < -n / 2 || s >= n / 2) return -1;
    return static_cast<int>((s + n) % n);
  };
  std::vector<int> map(n);
  for (int i = 0; i < n; ++i) map[i] = source(i);
  for (int c = 0; c < 3; ++c) {
    auto dst = out.mutable_component(c);
    const auto src = u.component(c);
    for (int iz = 0; iz < n; ++iz) {
      if (map[iz] < 0) continue;
      for (int iy = 0; iy < n; ++iy) {
        if (map[iy] < 0) continue;
        for (int ix = 0; ix < n; ++ix) {
          if (map[ix] < 0) continue;
          dst[g.real_index(ix, iy, iz)] = src[g.real_index(map[ix], map[iy], map[iz])];
        }
      }
    }
  }
  return out;
}

VectorField apply_initial_scaling(const VectorField& u, int alpha) {
  if (alpha < 1) throw std::invalid_argument("apply_initial_scaling: alpha must be a positive integer");
  if (alpha == 1) return u;
  auto scaled = contract_coordinates(u, alpha);
  scaled *= static_cast<double>(alpha);
  return to_real(helmholtz::leray_project(to_spectral(scaled)));
}

VectorField dilate_coordinates(const VectorField& u, int factor) {
  if (factor < 1) throw std::invalid_argument("dilate_coordinates: factor must be a positive integer");
  if (factor == 1) return u;
  const auto& g = u.grid();
  const int n = g.points();
  const int nf = n * factor;
  const TorusGrid fine(g.side_length(), nf);
  const auto spec = to_spectral(u);
  const auto& engine = FftEngine::for_size(nf);
  VectorField out(g);
  std::vector<Complex> padded(fine.spectral_size());
  std::vector<double> fine_real(fine.real_size());
  auto fine_axis = [&](int i) { return (g.wave_index(i) + nf) % nf; };
  for (int c = 0; c < 3; ++c) {
    std::fill(padded.begin(), padded.end(), Complex(0.0, 0.0));
    for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
      if (g.is_nyquist(nx) || g.is_nyquist(ny) || g.is_nyquist(nz)) return;
      const int fy = (ny + nf) % nf;
      const int fz = (nz + nf) % nf;
      padded[fine.spectral_index(nx, fy, fz)] = spec.component(c)[idx];
    });
    engine.inverse(padded, fine_real);
    auto dst = out.mutable_component(c);
    for (int iz = 0; iz < n; ++iz) {
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          dst[g.real_index(ix, iy, iz)] =
              fine_real[fine.real_index(fine_axis(ix), fine_axis(iy), fine_axis(iz))];
        }
      }
    }
  }
  return out;
}

}  // namespace mns::fields

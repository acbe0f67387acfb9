#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "mns/kernels.hpp"

namespace mns::kernels {

namespace {

using boost::math::quadrature::gauss_kronrod;

double raw_bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

struct BumpConstants {
  double c;   // normalization
  double l2;  // |m|_{L2}
};

const BumpConstants& bump_constants() {
  static const BumpConstants k = [] {
    const double mass = 4.0 * std::numbers::pi *
                        gauss_kronrod<double, 61>::integrate(
                            [](double r) { return raw_bump(r) * r * r; }, 0.0, 1.0, 10, 1e-12);
    const double c = 1.0 / mass;
    const double sq = 4.0 * std::numbers::pi *
                      gauss_kronrod<double, 61>::integrate(
                          [](double r) { return raw_bump(r) * raw_bump(r) * r * r; }, 0.0, 1.0, 10, 1e-12);
    return BumpConstants{c, c * std::sqrt(sq)};
  }();
  return k;
}

using CacheKey = std::tuple<int, double, double>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Mollifier::Mollifier(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("Mollifier: gamma must be finite and non-negative");
  }
}

double Mollifier::profile(double r) { return bump_constants().c * raw_bump(std::abs(r)); }

double Mollifier::profile_l2() { return bump_constants().l2; }

double Mollifier::transform(double s) {
  s = std::abs(s);
  if (s == 0.0) return 1.0;
  const double c = bump_constants().c;
  const double v = gauss_kronrod<double, 61>::integrate(
      [s](double r) {
        const double x = s * r;
        const double sinc = x < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        return raw_bump(r) * r * r * sinc;
      },
      0.0, 1.0, 10, 1e-12);
  return 4.0 * std::numbers::pi * c * v;
}

std::shared_ptr<const std::vector<double>> Mollifier::table(const TorusGrid& grid) const {
  std::mutex& m = cache_mutex();
  static std::map<CacheKey, std::shared_ptr<const std::vector<double>>> cache;
  const CacheKey key{grid.points(), grid.side_length(), gamma_};
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int half = grid.points() / 2;
  const std::size_t count = static_cast<std::size_t>(3) * half * half + 1;
  auto values = std::make_shared<std::vector<double>>(count, 1.0);
  if (gamma_ > 0.0) {
    for (std::size_t n2 = 1; n2 < count; ++n2) {
      (*values)[n2] = transform(gamma_ * grid.unit_wavenumber() * std::sqrt(static_cast<double>(n2)));
    }
  }
  std::lock_guard<std::mutex> lock(m);
  auto [it, inserted] = cache.emplace(key, std::move(values));
  return it->second;
}

double Mollifier::multiplier(const TorusGrid& grid, int nx, int ny, int nz) const {
  if (gamma_ == 0.0) return 1.0;
  const auto t = table(grid);
  return (*t)[static_cast<std::size_t>(nx * nx + ny * ny + nz * nz)];
}

VectorSpectrum mollify(const VectorSpectrum& f, const Mollifier& mol) {
  if (mol.gamma() == 0.0) return f;
  const auto& g = f.grid();
  const auto t = mol.table(g);
  VectorSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const double m = (*t)[static_cast<std::size_t>(nx * nx + ny * ny + nz * nz)];
    for (int i = 0; i < 3; ++i) out.component(i)[idx] = m * f.component(i)[idx];
  });
  return out;
}

ScalarSpectrum mollify(const ScalarSpectrum& f, const Mollifier& mol) {
  if (mol.gamma() == 0.0) return f;
  const auto& g = f.grid();
  const auto t = mol.table(g);
  ScalarSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    out[idx] = (*t)[static_cast<std::size_t>(nx * nx + ny * ny + nz * nz)] * f[idx];
  });
  return out;
}

VectorField mollify(const VectorField& f, const Mollifier& mol) {
  if (mol.gamma() == 0.0) return f;
  return fields::to_real(mollify(fields::to_spectral(f), mol));
}

std::pair<double, double> mollifier_sup_bound(const VectorField& f, const Mollifier& mol) {
  if (mol.gamma() <= 0.0) throw std::invalid_argument("mollifier_sup_bound: gamma must be positive");
  const double lhs = fields::norm(mollify(f, mol), fields::Norm::linf());
  const double rhs = fields::norm(f, fields::Norm::l2()) * std::pow(mol.gamma(), -1.5) * Mollifier::profile_l2();
  return {lhs, rhs};
}

namespace {

struct Truncated {
  VectorSpectrum spec;                    // 2/3-truncated velocity
  VectorField u;                          // its samples
  std::array<fields::ScalarField, 3> ju;  // J(u_j) of the truncated velocity
  bool symmetric;                         // J is the identity
};

Truncated truncated_inputs(const VectorSpectrum& u, const Mollifier& mol, bool dealias) {
  const auto& g = u.grid();
  auto spec = dealias ? fields::dealias_truncate(u) : u;
  auto real = fields::to_real(spec, false);
  Truncated t{std::move(spec), std::move(real),
              {fields::ScalarField(g), fields::ScalarField(g), fields::ScalarField(g)}, mol.gamma() == 0.0};
  if (t.symmetric) {
    for (int j = 0; j < 3; ++j) {
      const auto c = t.u.component(j);
      std::copy(c.begin(), c.end(), t.ju[j].samples().begin());
    }
  } else {
    const auto mspec = mollify(t.spec, mol);
    const auto& engine = fields::FftEngine::for_size(g.points());
    for (int j = 0; j < 3; ++j) engine.inverse(mspec.component(j), t.ju[j].samples());
  }
  return t;
}

}  // namespace

std::array<VectorSpectrum, 3> mollified_flux(const VectorSpectrum& u, const Mollifier& mol, bool dealias) {
  const auto& g = u.grid();
  const auto in = truncated_inputs(u, mol, dealias);
  const auto& engine = fields::FftEngine::for_size(g.points());
  std::array<VectorSpectrum, 3> out{VectorSpectrum(g), VectorSpectrum(g), VectorSpectrum(g)};
  std::vector<double> prod(g.real_size());
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (in.symmetric && i < j) {
        const auto src = out[i].component(j);
        std::copy(src.begin(), src.end(), out[j].component(i).begin());
        continue;
      }
      const auto ui = in.u.component(i);
      for (std::size_t m = 0; m < prod.size(); ++m) prod[m] = in.ju[j][m] * ui[m];
      engine.forward(prod, out[j].component(i));
    }
  }
  if (dealias)
    for (auto& o : out) o = fields::dealias_truncate(std::move(o));
  return out;
}

std::array<VectorSpectrum, 3> mollified_flux(const VectorField& u, const Mollifier& mol) {
  return mollified_flux(fields::to_spectral(u), mol);
}

VectorSpectrum mollified_advection(const VectorSpectrum& u, const Mollifier& mol, bool dealias) {
  const auto& g = u.grid();
  const auto in = truncated_inputs(u, mol, dealias);
  const auto& engine = fields::FftEngine::for_size(g.points());
  std::array<std::vector<double>, 3> acc;
  for (auto& a : acc) a.assign(g.real_size(), 0.0);
  std::vector<double> d(g.real_size());
  for (int j = 0; j < 3; ++j) {
    fields::MultiIndex e;
    (j == 0 ? e.k1 : (j == 1 ? e.k2 : e.k3)) = 1;
    const auto du = fields::derivative(in.spec, e);
    for (int i = 0; i < 3; ++i) {
      engine.inverse(du.component(i), d);
      for (std::size_t m = 0; m < d.size(); ++m) acc[i][m] += in.ju[j][m] * d[m];
    }
  }
  VectorSpectrum out(g);
  for (int i = 0; i < 3; ++i) engine.forward(acc[i], out.component(i));
  return dealias ? fields::dealias_truncate(std::move(out)) : out;
}

VectorSpectrum mollified_advection(const VectorField& u, const Mollifier& mol) {
  return mollified_advection(fields::to_spectral(u), mol);
}

VectorSpectrum mollified_flux_divergence(const VectorField& u, const Mollifier& mol) {
  const auto flux = mollified_flux(u, mol);
  const auto& g = u.grid();
  VectorSpectrum out(g);
  fields::for_each_mode(g, [&](std::size_t idx, int nx, int ny, int nz) {
    const Complex ik[3] = {Complex(0.0, g.odd_wavenumber(nx)), Complex(0.0, g.odd_wavenumber(ny)),
                           Complex(0.0, g.odd_wavenumber(nz))};
    for (int i = 0; i < 3; ++i) {
      out.component(i)[idx] = ik[0] * flux[0].component(i)[idx] + ik[1] * flux[1].component(i)[idx] +
                              ik[2] * flux[2].component(i)[idx];
    }
  });
  return out;
}

}  // namespace mns::kernels

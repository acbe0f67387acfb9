#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "mns/fft.hpp"
#include "mns/grid.hpp"

namespace mns::fields {

/// Fourier coefficients of one real scalar on the half layout.
class ScalarSpectrum {
 public:
  explicit ScalarSpectrum(const TorusGrid& grid);
  ScalarSpectrum(const TorusGrid& grid, std::vector<Complex> coeffs);

  const TorusGrid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }

 private:
  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

/// Fourier coefficients of the three components of a real vector field.
/// Hermitian symmetry is implicit in the half layout.
class VectorSpectrum {
 public:
  explicit VectorSpectrum(const TorusGrid& grid);
  VectorSpectrum(const TorusGrid& grid, std::array<std::vector<Complex>, 3> coeffs);

  const TorusGrid& grid() const { return grid_; }
  std::span<const Complex> component(int i) const { return coeffs_[i]; }
  std::span<Complex> component(int i) { return coeffs_[i]; }

  VectorSpectrum& operator+=(const VectorSpectrum& other);
  VectorSpectrum& operator-=(const VectorSpectrum& other);
  VectorSpectrum& operator*=(double s);
  /// this += s * other
  VectorSpectrum& add_scaled(double s, const VectorSpectrum& other);

 private:
  TorusGrid grid_;
  std::array<std::vector<Complex>, 3> coeffs_;
};

class ScalarField {
 public:
  explicit ScalarField(const TorusGrid& grid);
  ScalarField(const TorusGrid& grid, std::vector<double> samples);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

 private:
  TorusGrid grid_;
  std::vector<double> samples_;
};

/// Real vector field u : T^3 -> R^3 sampled on a TorusGrid.
///
/// When built from a spectrum the coefficients are kept as a cache and
/// returned by to_spectral without another transform. The cache is
/// immutable and shared between copies.
class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid);
  VectorField(const TorusGrid& grid, std::array<std::vector<double>, 3> samples);

  const TorusGrid& grid() const { return grid_; }
  std::span<const double> component(int i) const { return samples_[i]; }
  /// Mutable access drops the spectral cache.
  std::span<double> mutable_component(int i);

  bool has_spectral_cache() const { return cache_ != nullptr; }
  const VectorSpectrum* spectral_cache() const { return cache_.get(); }
  void drop_spectral_cache() { cache_.reset(); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  bool all_finite() const;

 private:
  friend VectorField to_real(const VectorSpectrum&, bool);

  TorusGrid grid_;
  std::array<std::vector<double>, 3> samples_;
  std::shared_ptr<const VectorSpectrum> cache_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// ---------------------------------------------------------------------------
// Transforms

VectorSpectrum to_spectral(const VectorField& f);
ScalarSpectrum to_spectral(const ScalarField& f);
VectorField to_real(const VectorSpectrum& coeffs, bool keep_cache = true);
ScalarField to_real(const ScalarSpectrum& coeffs);
/// Coefficient arrays given separately from the grid; sizes are checked.
VectorField to_real(std::array<std::vector<Complex>, 3> coeffs, const TorusGrid& grid);

// ---------------------------------------------------------------------------
// Differential operators (spectral)

/// Symbol of D^k at a mode: prod over axes of (i k_axis)^{k_axis}.
/// Odd powers vanish on the Nyquist index of that axis.
Complex derivative_symbol(const TorusGrid& grid, const MultiIndex& k, int nx, int ny, int nz);

VectorSpectrum derivative(const VectorSpectrum& f, const MultiIndex& k);
VectorField derivative(const VectorField& f, const MultiIndex& k);
ScalarSpectrum derivative(const ScalarSpectrum& f, const MultiIndex& k);
ScalarField derivative(const ScalarField& f, const MultiIndex& k);

ScalarSpectrum divergence(const VectorSpectrum& f);
ScalarField divergence(const VectorField& f);
VectorSpectrum laplacian(const VectorSpectrum& f);
VectorField laplacian(const VectorField& f);
VectorSpectrum curl(const VectorSpectrum& f);
VectorField curl(const VectorField& f);
VectorSpectrum gradient(const ScalarSpectrum& p);
VectorField gradient(const ScalarField& p);

/// Zero every mode with some |n_i| above the 2/3 cutoff.
VectorSpectrum dealias_truncate(VectorSpectrum f);
ScalarSpectrum dealias_truncate(ScalarSpectrum f);

// ---------------------------------------------------------------------------
// Norms and inner products

inline constexpr int kDefaultMaxSobolevOrder = 7;

/// Which norm to evaluate. Hm and Cm follow the sum-over-derivatives
/// convention |u|_{H^m} = sum_{|k|<=m} |D^k u|_{L2}.
struct Norm {
  enum class Kind { L1, L2, Linf, Hm, Cm };
  Kind kind;
  int order = 0;

  static Norm l1() { return {Kind::L1, 0}; }
  static Norm l2() { return {Kind::L2, 0}; }
  static Norm linf() { return {Kind::Linf, 0}; }
  static Norm hm(int m) { return {Kind::Hm, m}; }
  static Norm cm(int m) { return {Kind::Cm, m}; }
};

double norm(const VectorField& f, Norm which, int max_order = kDefaultMaxSobolevOrder);
/// Spectral evaluation; valid for L2 and Hm only.
double norm(const VectorSpectrum& f, Norm which, int max_order = kDefaultMaxSobolevOrder);
double norm(const ScalarField& f, Norm which);

/// |D^k f|_{L2} via Parseval.
double derivative_l2(const VectorSpectrum& f, const MultiIndex& k);
/// sum_n w_n |f(n)|^2 * L^3, i.e. |f|_{L2}^2 from coefficients.
double spectral_energy(const VectorSpectrum& f);

double inner_product(const VectorField& u, const VectorField& v);
double inner_product(const ScalarField& a, const ScalarField& b);

// ---------------------------------------------------------------------------
// Products

struct LeibnizTerm {
  MultiIndex alpha;
  MultiIndex beta;
  double coefficient;
};

/// D^k(a v) = sum over alpha + beta = k of c * D^alpha a * D^beta v, with
/// c the product of per-axis binomial coefficients.
std::vector<LeibnizTerm> leibniz_expand(const MultiIndex& k);

/// Sample-wise a * v. With dealias set both inputs and the result are
/// truncated to the 2/3 band.
VectorField pointwise_product(const ScalarField& a, const VectorField& v, bool dealias = true);

// ---------------------------------------------------------------------------
// Initial data

using Point = std::array<double, 3>;

/// Divergence-free localized swirl u = A * sigma * e^{1/2} * curl(phi e_z),
/// phi = exp(-|x - c|^2 / (2 sigma^2)), sigma = radius / 8.5. The curl is
/// taken spectrally, so the discrete divergence vanishes to round-off, and
/// samples outside the ball are below 1e-14 A once sigma is resolved. The
/// continuum sup of every component is A.
VectorField make_divfree_bump(const TorusGrid& grid, const Point& center, double radius,
                              double amplitude);

/// Gaussian width used by make_divfree_bump for a given radius.
double bump_width(double radius);

/// (A sin x cos y cos z, -A cos x sin y cos z, 0) in units x = 2*pi*x/L.
VectorField taylor_green(const TorusGrid& grid, double amplitude);

/// (A sin(2*pi*y/L), 0, 0).
VectorField shear_flow(const TorusGrid& grid, double amplitude);

/// Random real field with coefficients only on |n_i| <= band, Gaussian
/// amplitudes damped by exp(-|n|^2/band^2). Deterministic in the seed.
VectorField random_bandlimited(const TorusGrid& grid, int band, std::uint64_t seed,
                               bool divergence_free = false);
ScalarField random_bandlimited_scalar(const TorusGrid& grid, int band, std::uint64_t seed);

/// u^alpha(x) = alpha * u(alpha x) with x measured from the origin in
/// [-L/2, L/2)^3 and u taken as zero outside the box. The result is passed
/// through the Leray projector. alpha must be a positive integer.
VectorField apply_initial_scaling(const VectorField& u, int alpha);

/// x -> u(factor * x) with the same centered, zero-extended convention.
/// Returns the lookup result without projection.
VectorField contract_coordinates(const VectorField& u, int factor);

/// x -> u(x / factor), evaluated by Fourier interpolation on the
/// factor-refined grid and read back at the coarse sample points (centered
/// convention). Exact for band-limited u.
VectorField dilate_coordinates(const VectorField& u, int factor);

}  // namespace mns::fields

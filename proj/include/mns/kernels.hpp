#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "mns/fields.hpp"

namespace mns::kernels {

using fields::Complex;
using fields::MultiIndex;
using fields::Point;
using fields::ScalarSpectrum;
using fields::TorusGrid;
using fields::VectorField;
using fields::VectorSpectrum;

using Matrix3 = std::array<std::array<double, 3>, 3>;
using ComplexMatrix3 = std::array<std::array<Complex, 3>, 3>;

// ---------------------------------------------------------------------------
// Heat kernel

/// Multiply every mode by exp(-nu |k|^2 t). t = 0 returns the input.
VectorSpectrum heat_multiply(const VectorSpectrum& f, double t, double nu);
VectorField heat_convolve(const VectorField& f, double t, double nu);

/// Per-mode heat factor exp(-nu |k|^2 t).
double heat_factor(const TorusGrid& grid, double t, double nu, int nx, int ny, int nz);

/// Coefficients (ascending powers) of h_n with
/// d^n/ds^n exp(-s^2/4) = h_n(s) exp(-s^2/4), h_{n+1} = h_n' - (s/2) h_n.
std::vector<double> gaussian_derivative_polynomial(int n);

/// D^k K(y, t) for K(y, t) = (4 pi t)^{-3/2} exp(-|y|^2 / 4t).
double heat_kernel_value(const Point& y, double t, const MultiIndex& k);

struct KernelNorms {
  double l1;
  double l2;
};

/// |D^k K(t)|_{L1} and |D^k K(t)|_{L2} by adaptive quadrature over
/// |y_i| <= 12 sqrt(t) (the kernel is a product of 1-D factors).
KernelNorms heat_kernel_norms(const MultiIndex& k, double t);

// ---------------------------------------------------------------------------
// Mollifier

/// Bump m(xi) = c exp(-1/(1 - |xi|^2)) on |xi| < 1 with unit mass, and the
/// operator J_gamma with multiplier m^(gamma |k|).
class Mollifier {
 public:
  explicit Mollifier(double gamma);

  double gamma() const { return gamma_; }

  /// Normalized radial profile m(r).
  static double profile(double r);
  /// |m|_{L2}.
  static double profile_l2();
  /// Fourier transform int m(xi) exp(-i s . xi) d xi at |s| = s.
  static double transform(double s);

  /// Multipliers on the grid indexed by the integer |n|^2, entry 0 exactly 1.
  /// Built once per (grid, gamma) and shared.
  std::shared_ptr<const std::vector<double>> table(const TorusGrid& grid) const;

  /// Per-mode multiplier; exactly 1 when gamma = 0.
  double multiplier(const TorusGrid& grid, int nx, int ny, int nz) const;

 private:
  double gamma_;
};

VectorSpectrum mollify(const VectorSpectrum& f, const Mollifier& mol);
ScalarSpectrum mollify(const ScalarSpectrum& f, const Mollifier& mol);
VectorField mollify(const VectorField& f, const Mollifier& mol);

/// (|J_gamma f|_inf, |f|_{L2} gamma^{-3/2} |m|_{L2}). Requires gamma > 0.
std::pair<double, double> mollifier_sup_bound(const VectorField& f, const Mollifier& mol);

/// sum_j J(u_j) d_j u, and sum_j d_j[J(u_j) u], with the 2/3 rule applied to
/// the inputs and the products.
VectorSpectrum mollified_advection(const VectorField& u, const Mollifier& mol);
VectorSpectrum mollified_advection(const VectorSpectrum& u, const Mollifier& mol, bool dealias = true);
VectorSpectrum mollified_flux_divergence(const VectorField& u, const Mollifier& mol);

/// g_j = J(u_j) u for j = 0, 1, 2, dealiased.
std::array<VectorSpectrum, 3> mollified_flux(const VectorField& u, const Mollifier& mol);
std::array<VectorSpectrum, 3> mollified_flux(const VectorSpectrum& u, const Mollifier& mol, bool dealias = true);

// ---------------------------------------------------------------------------
// Oseen-type kernel P d_j K

/// (i k_j) exp(-|k|^2 tau) (I - k k^T / |k|^2) at one mode; zero at k = 0.
ComplexMatrix3 oseen_symbol(const TorusGrid& grid, double tau, int j, int nx, int ny, int nz);

/// sum_j (i k_j) P g_j: the Oseen symbol at tau = 0 applied to a flux.
VectorSpectrum projected_flux_divergence(const std::array<VectorSpectrum, 3>& g);

/// sum_j oseen_symbol(tau, j) g_j using the fused symbol.
VectorSpectrum oseen_multiply(const std::array<VectorSpectrum, 3>& g, double tau);
/// Same operator applied in stages: derivative, projector, heat.
VectorSpectrum oseen_multiply_staged(const std::array<VectorSpectrum, 3>& g, double tau);

/// Closed-form real-space kernel [P d_j K(tau)]_{il}(y) on R^3.
Matrix3 oseen_kernel_value(const Point& y, double tau, int j);

/// int_{R^3} sum_{il} |[P d_j K(tau)]_{il}| dy: spherical product quadrature
/// on |y| < 20 sqrt(tau) plus the analytic |y|^{-4} far-field tail.
double oseen_kernel_l1(double tau, int j);
/// int_{|y| >= R} of the same integrand.
double oseen_kernel_tail_l1(double tau, int j, double radius);
/// Periodic kernel sampled on the torus via the inverse transform of the
/// symbol; returns the entrywise L1 Riemann sum. Includes periodic images.
double oseen_kernel_l1_torus(const TorusGrid& grid, double tau, int j);
/// Periodic kernel samples of entry (i, l) on the grid.
fields::ScalarField oseen_kernel_torus(const TorusGrid& grid, double tau, int j, int i, int l);

// ---------------------------------------------------------------------------
// Duhamel time quadrature

/// phi_n(x) = sum_m x^m / (m + n)!, for n in [0, 8].
double phi_function(int n, double x);

/// Samples F(eta_l) on the uniform nodes eta_l = t0 + l h, l = 0..M.
struct SlabSamples {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<VectorSpectrum> values;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double node(int l) const { return t0 + l * h; }
};

/// I(t) = int_{t0}^t exp(-nu |k|^2 (t - eta)) F(eta) d eta at every node,
/// with F interpolated by cubic Lagrange polynomials on four-node stencils
/// and the exponential integrated exactly. I(t0) = 0. Needs M >= 3.
std::vector<VectorSpectrum> duhamel_nodes(const SlabSamples& f, double nu);

/// Same integral at one time inside the slab.
VectorSpectrum duhamel_at(const SlabSamples& f, double nu, double t);

/// Duhamel integral of the Oseen kernel against a flux g_j(eta) sampled on
/// the nodes: int sum_j [P d_j K(nu (t - eta))] * g_j(eta) d eta, evaluated
/// at time t of the slab. Output is divergence-free.
VectorSpectrum oseen_apply(double t0, double h, const std::vector<std::array<VectorSpectrum, 3>>& g,
                           double t, double nu);

}  // namespace mns::kernels

#pragma once

#include <array>

#include "mns/fields.hpp"

namespace mns::helmholtz {

using fields::Point;
using fields::ScalarField;
using fields::ScalarSpectrum;
using fields::VectorField;
using fields::VectorSpectrum;

/// Projector symbol I - k k^T / |k|^2 at one mode, built from the odd
/// (Nyquist-zeroed) wavenumbers. Modes whose odd wavenumber vanishes,
/// including k = 0, get the identity.
std::array<std::array<double, 3>, 3> projector_symbol(const fields::TorusGrid& grid, int nx, int ny,
                                                      int nz);

/// Leray projector P. The mean mode passes through unchanged.
VectorSpectrum leray_project(const VectorSpectrum& v);
VectorField leray_project(const VectorField& v);

/// G = I - P. Annihilates the mean mode.
VectorSpectrum gradient_part(const VectorSpectrum& v);
VectorField gradient_part(const VectorField& v);

/// Zero-mean scalar with grad p = G v.
ScalarSpectrum pressure_scalar(const VectorSpectrum& v);
ScalarField pressure_scalar(const VectorField& v);

/// Advective term sum_j J(u_j) d_j u with the 2/3 rule, J the identity here.
VectorSpectrum advective_term(const VectorField& u);

/// Navier-Stokes pressure for divergence-free u: p = -pressure_scalar(N(u))
/// with N(u) = sum_j u_j d_j u, so that N(u) = P[N(u)] - grad p and
/// div N(u) = -lap p. Zero mean. Throws when |div u|_inf is above 1e-8
/// relative to |u|_inf * 2 pi / L.
ScalarField pressure_nonlinear(const VectorField& u);

/// Real-space quadrature of G v at an arbitrary point x of the box,
/// (4 pi)^{-1} int z / |z|^3 div v(x - z) dz, with the ball |z| < eps removed.
/// The far field is tapered by a smooth radial window between L/2 and 4L
/// and the first-order Taylor term of div v at x is subtracted near the
/// origin and added back analytically. Requires N <= 16 and
/// eps in (0, 4 dx]. Throws when x is outside [0, L)^3.
std::array<double, 3> quadrature_oracle_G(const VectorField& v, const Point& x, double eps);

}  // namespace mns::helmholtz

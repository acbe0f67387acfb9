#include "mns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mns::fields {

TorusGrid::TorusGrid(double side_length, int points_per_axis)
    : side_length_(side_length), n_(points_per_axis) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw std::invalid_argument("TorusGrid: side length must be positive and finite");
  }
  if (points_per_axis < 8 || points_per_axis % 2 != 0) {
    throw std::invalid_argument("TorusGrid: points per axis must be even and >= 8, got " +
                                std::to_string(points_per_axis));
  }
  unit_wavenumber_ = 2.0 * std::numbers::pi / side_length_;
}

double TorusGrid::cell_volume() const {
  const double dx = spacing();
  return dx * dx * dx;
}

std::size_t TorusGrid::real_size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

std::size_t TorusGrid::spectral_size() const {
  return static_cast<std::size_t>(n_) * n_ * static_cast<std::size_t>(half());
}

std::vector<double> TorusGrid::wavenumber_axis() const {
  std::vector<double> axis;
  axis.reserve(n_);
  for (int n = -n_ / 2; n < n_ / 2; ++n) axis.push_back(wavenumber(n));
  return axis;
}

std::vector<MultiIndex> multi_indices_up_to(int m) {
  if (m < 0) throw std::invalid_argument("multi_indices_up_to: negative order");
  std::vector<MultiIndex> out;
  for (int order = 0; order <= m; ++order) {
    for (int a = order; a >= 0; --a) {
      for (int b = order - a; b >= 0; --b) {
        out.push_back({a, b, order - a - b});
      }
    }
  }
  return out;
}

}  // namespace mns::fields

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mns::fields {

/// Periodic box [0, L)^3 sampled with N points per axis.
///
/// Real samples are stored with the x index fastest:
///   idx = (iz * N + iy) * N + ix.
/// Spectral coefficients use the real-to-complex half layout with the x axis
/// halved: idx = (iz * N + iy) * (N/2 + 1) + ix, ix in [0, N/2].
/// Wavenumber index for a full axis is i for i < N/2 and i - N otherwise, so
/// the lattice is (2*pi/L) * {-N/2, ..., N/2 - 1}.
class TorusGrid {
 public:
  TorusGrid(double side_length, int points_per_axis);

  double side_length() const { return side_length_; }
  int points() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  double spacing() const { return side_length_ / n_; }
  double cell_volume() const;
  double volume() const { return side_length_ * side_length_ * side_length_; }
  std::size_t real_size() const;
  std::size_t spectral_size() const;

  /// Signed lattice index of storage index i on a full axis.
  int wave_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  bool is_nyquist(int signed_index) const { return signed_index == -n_ / 2 || signed_index == n_ / 2; }
  /// 2*pi*n/L for signed index n.
  double wavenumber(int signed_index) const { return unit_wavenumber_ * signed_index; }
  /// Wavenumber used by odd-order symbols; the Nyquist entry is zeroed so
  /// that odd derivatives and the projector keep real fields real.
  double odd_wavenumber(int signed_index) const {
    return is_nyquist(signed_index) ? 0.0 : unit_wavenumber_ * signed_index;
  }
  double unit_wavenumber() const { return unit_wavenumber_; }

  /// Physical coordinate i * dx.
  double coordinate(int i) const { return i * spacing(); }
  /// Coordinate folded into [-L/2, L/2).
  double centered_coordinate(int i) const { return wave_index(i) * spacing(); }

  /// Largest retained |n_i| under the 2/3 truncation rule (3K < N).
  int dealias_cutoff() const { return (n_ - 1) / 3; }

  /// Sorted lattice wavenumbers 2*pi/L * {-N/2, ..., N/2-1}.
  std::vector<double> wavenumber_axis() const;

  std::size_t real_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n_ + iy) * n_ + ix;
  }
  std::size_t spectral_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * n_ + iy) * half() + ix;
  }

  bool operator==(const TorusGrid& other) const {
    return n_ == other.n_ && side_length_ == other.side_length_;
  }

 private:
  double side_length_;
  int n_;
  double unit_wavenumber_;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grid mismatch");
}

/// D^k = d^k1/dx1 d^k2/dx2 d^k3/dx3.
struct MultiIndex {
  int k1 = 0;
  int k2 = 0;
  int k3 = 0;

  int order() const { return k1 + k2 + k3; }
  int operator[](int axis) const { return axis == 0 ? k1 : (axis == 1 ? k2 : k3); }
  bool operator==(const MultiIndex&) const = default;
};

/// All multi-indices with |k| <= m, ordered by total order then lexicographically.
std::vector<MultiIndex> multi_indices_up_to(int m);

/// Visit every stored spectral mode as f(idx, nx, ny, nz) with nx in [0, N/2]
/// and ny, nz signed lattice indices.
template <class F>
void for_each_mode(const TorusGrid& grid, F&& f) {
  const int n = grid.points();
  const int h = grid.half();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const int nz = grid.wave_index(iz);
    for (int iy = 0; iy < n; ++iy) {
      const int ny = grid.wave_index(iy);
      for (int ix = 0; ix < h; ++ix, ++idx) {
        f(idx, ix, ny, nz);
      }
    }
  }
}

/// Multiplicity of a half-layout mode in the full spectrum.
inline double hermitian_weight(const TorusGrid& grid, int nx) {
  return (nx == 0 || 2 * nx == grid.points()) ? 1.0 : 2.0;
}

}  // namespace mns::fields

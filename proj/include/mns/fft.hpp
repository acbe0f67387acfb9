#pragma once

#include <complex>
#include <span>

namespace mns::fields {

using Complex = std::complex<double>;

/// 3-D real<->half-complex transforms for an N^3 grid, backed by FFTW.
///
/// Plans are created once per size with FFTW_ESTIMATE (deterministic plan
/// choice) and shared; execution uses per-call aligned buffers so concurrent
/// calls are safe.
class FftEngine {
 public:
  static const FftEngine& for_size(int n);

  /// Forward transform normalized so that a constant c maps to c at k = 0.
  void forward(std::span<const double> real, std::span<Complex> spectral) const;
  /// Inverse of forward; the input is not modified.
  void inverse(std::span<const Complex> spectral, std::span<double> real) const;

  int size() const { return n_; }

  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;
  ~FftEngine();

 private:
  explicit FftEngine(int n);

  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace mns::fields

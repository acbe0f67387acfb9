#include "mns/fft.hpp"

#include <fftw3.h>
#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace mns::fields {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

std::size_t real_count(int n) { return static_cast<std::size_t>(n) * n * n; }
std::size_t spectral_count(int n) { return static_cast<std::size_t>(n) * n * (n / 2 + 1); }

// Per-thread transform buffers, sized to the largest engine used so far.
struct Scratch {
  std::unique_ptr<FftwBuffer> real;
  std::unique_ptr<FftwBuffer> spec;
  std::size_t real_bytes = 0;
  std::size_t spec_bytes = 0;

  void reserve(std::size_t rb, std::size_t sb) {
    if (rb > real_bytes) {
      real = std::make_unique<FftwBuffer>(rb);
      real_bytes = rb;
    }
    if (sb > spec_bytes) {
      spec = std::make_unique<FftwBuffer>(sb);
      spec_bytes = sb;
    }
  }
};

Scratch& scratch(std::size_t real_bytes, std::size_t spec_bytes) {
  thread_local Scratch s;
  s.reserve(real_bytes, spec_bytes);
  return s;
}

// Field-sized blocks are allocated and freed at a high rate; serving them
// from the heap instead of fresh mappings avoids repeated page faults.
void keep_large_blocks_resident() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
}

}  // namespace

const FftEngine& FftEngine::for_size(int n) {
  std::mutex& m = planner_mutex();
  static std::map<int, std::unique_ptr<FftEngine>> engines;
  std::lock_guard<std::mutex> lock(m);
  if (engines.empty()) keep_large_blocks_resident();
  auto it = engines.find(n);
  if (it == engines.end()) {
    it = engines.emplace(n, std::unique_ptr<FftEngine>(new FftEngine(n))).first;
  }
  return *it->second;
}

// Called with planner_mutex held.
FftEngine::FftEngine(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("FftEngine: size must be positive");
  FftwBuffer real(real_count(n) * sizeof(double));
  FftwBuffer spec(spectral_count(n) * sizeof(fftw_complex));
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(spec.ptr);
  forward_plan_ = fftw_plan_dft_r2c_3d(n, n, n, r, c, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n, n, n, c, r, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FftEngine: FFTW planning failed");
  }
}

// Engines live until static destruction, when no other thread runs.
FftEngine::~FftEngine() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FftEngine::forward(std::span<const double> real, std::span<Complex> spectral) const {
  const std::size_t nr = real_count(n_);
  const std::size_t nc = spectral_count(n_);
  if (real.size() != nr || spectral.size() != nc) {
    throw std::invalid_argument("FftEngine::forward: dimension mismatch");
  }
  auto& buf = scratch(nr * sizeof(double), nc * sizeof(fftw_complex));
  std::memcpy(buf.real->ptr, real.data(), nr * sizeof(double));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), static_cast<double*>(buf.real->ptr),
                       static_cast<fftw_complex*>(buf.spec->ptr));
  const double scale = 1.0 / static_cast<double>(nr);
  const auto* o = static_cast<const fftw_complex*>(buf.spec->ptr);
  for (std::size_t i = 0; i < nc; ++i) spectral[i] = Complex(o[i][0] * scale, o[i][1] * scale);
}

void FftEngine::inverse(std::span<const Complex> spectral, std::span<double> real) const {
  const std::size_t nr = real_count(n_);
  const std::size_t nc = spectral_count(n_);
  if (real.size() != nr || spectral.size() != nc) {
    throw std::invalid_argument("FftEngine::inverse: dimension mismatch");
  }
  auto& buf = scratch(nr * sizeof(double), nc * sizeof(fftw_complex));
  std::memcpy(buf.spec->ptr, spectral.data(), nc * sizeof(fftw_complex));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), static_cast<fftw_complex*>(buf.spec->ptr),
                       static_cast<double*>(buf.real->ptr));
  std::memcpy(real.data(), buf.real->ptr, nr * sizeof(double));
}

}  // namespace mns::fields

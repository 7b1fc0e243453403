#include "helispec/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace helispec {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_threads_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { fftw_init_threads(); });
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

}  // namespace

FftEngine::FftEngine(int n, FftPlanner planner, int threads)
    : n_(n),
      points_(static_cast<Eigen::Index>(n) * n * n),
      modes_(static_cast<Eigen::Index>(n) * n * (n / 2 + 1)) {
  if (n < 2 || n % 2 != 0) throw ValidationError("FFT size must be even and >= 2");
  const unsigned flags = planner == FftPlanner::Measure ? FFTW_MEASURE : FFTW_ESTIMATE;

  std::lock_guard lock(planner_mutex());
  init_threads_once();
  fftw_plan_with_nthreads(threads > 0 ? threads : 1);

  FftwBuffer real(sizeof(double) * static_cast<std::size_t>(points_));
  FftwBuffer cplx(sizeof(fftw_complex) * static_cast<std::size_t>(modes_));
  auto* r = static_cast<double*>(real.ptr);
  auto* c = static_cast<fftw_complex*>(cplx.ptr);
  r2c_ = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
  c2r_ = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
  if (!r2c_ || !c2r_) throw std::runtime_error("FFTW planning failed");
  real_alignment_ = fftw_alignment_of(r);
  complex_alignment_ = fftw_alignment_of(reinterpret_cast<double*>(c));
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  if (r2c_) fftw_destroy_plan(r2c_);
  if (c2r_) fftw_destroy_plan(c2r_);
}

void FftEngine::forward(const PointArray& phys, ModeArray& modes) const {
  forward_raw(phys, modes);
  modes *= Real(1) / static_cast<Real>(points_);
}

void FftEngine::forward(const PointArray& phys, ModeArray& modes, const ModeWeights& multiplier) const {
  if (multiplier.size() != modes_) throw ValidationError("forward FFT: wrong multiplier size");
  forward_raw(phys, modes);
  modes *= multiplier * (Real(1) / static_cast<Real>(points_));
}

void FftEngine::forward_raw(const PointArray& phys, ModeArray& modes) const {
  if (phys.size() != points_) throw ValidationError("forward FFT: wrong physical size");
  modes.resize(modes_);
  // r2c leaves its input intact, but FFTW's signature is non-const.
  auto* in = const_cast<double*>(phys.data());
  auto* out = reinterpret_cast<fftw_complex*>(modes.data());
  if (fftw_alignment_of(in) == real_alignment_ &&
      fftw_alignment_of(reinterpret_cast<double*>(out)) == complex_alignment_) {
    fftw_execute_dft_r2c(r2c_, in, out);
  } else {
    PointArray tmp = phys;
    ModeArray res(modes_);
    fftw_execute_dft_r2c(r2c_, tmp.data(), reinterpret_cast<fftw_complex*>(res.data()));
    modes = std::move(res);
  }
}

void FftEngine::inverse(const ModeArray& modes, PointArray& phys) const {
  if (modes.size() != modes_) throw ValidationError("inverse FFT: wrong spectral size");
  phys.resize(points_);
  // c2r destroys its input
  thread_local ModeArray scratch;
  scratch = modes;
  auto* in = reinterpret_cast<fftw_complex*>(scratch.data());
  if (fftw_alignment_of(reinterpret_cast<double*>(in)) == complex_alignment_ &&
      fftw_alignment_of(phys.data()) == real_alignment_) {
    fftw_execute_dft_c2r(c2r_, in, phys.data());
  } else {
    PointArray res(points_);
    fftw_execute_dft_c2r(c2r_, in, res.data());
    phys = std::move(res);
  }
}

}  // namespace helispec

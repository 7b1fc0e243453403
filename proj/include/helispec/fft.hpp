#pragma once

#include "helispec/types.hpp"

struct fftw_plan_s;

namespace helispec {

enum class FftPlanner { Estimate, Measure };

/// Real-to-complex 3D transforms on an n^3 periodic grid.
///
/// Physical data is row-major (x slowest, z fastest). Spectral data uses the
/// half-complex layout n x n x (n/2+1). `forward` returns Fourier-series
/// coefficients (scaled by 1/n^3) so that `inverse` is plain synthesis.
/// Plans are created once; execution is reentrant.
class FftEngine {
 public:
  FftEngine(int n, FftPlanner planner, int threads);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  int n() const noexcept { return n_; }
  Eigen::Index point_count() const noexcept { return points_; }
  Eigen::Index mode_count() const noexcept { return modes_; }

  void forward(const PointArray& phys, ModeArray& modes) const;
  /// forward() followed by a per-mode multiplication, in one pass.
  void forward(const PointArray& phys, ModeArray& modes, const ModeWeights& multiplier) const;
  void inverse(const ModeArray& modes, PointArray& phys) const;

 private:
  void forward_raw(const PointArray& phys, ModeArray& modes) const;
  int n_;
  Eigen::Index points_;
  Eigen::Index modes_;
  int real_alignment_ = 0;
  int complex_alignment_ = 0;
  fftw_plan_s* r2c_ = nullptr;
  fftw_plan_s* c2r_ = nullptr;
};

}  // namespace helispec

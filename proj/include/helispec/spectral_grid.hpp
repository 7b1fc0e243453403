#pragma once

#include "helispec/fft.hpp"
#include "helispec/types.hpp"

#include <array>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>

namespace helispec {

/// How spatial derivatives are realized in Fourier space.
enum class DerivativeScheme {
  Spectral,      ///< exact wavenumbers
  FD2Colocated,  ///< second-order central differences, all variables colocated
  FD2Staggered,  ///< second-order MAC (Harlow-Welch) layout emulated through shift/average symbols
};

std::string_view to_token(DerivativeScheme s);
DerivativeScheme parse_scheme(std::string_view token);

struct DealiasPolicy {
  enum class Kind { None, TwoThirds, Sphere };
  Kind kind = Kind::None;
  double k_max = 0.0;  ///< lattice radius, used by Sphere only

  static DealiasPolicy none() { return {}; }
  static DealiasPolicy two_thirds() { return {Kind::TwoThirds, 0.0}; }
  static DealiasPolicy sphere(double k_max) { return {Kind::Sphere, k_max}; }
};

std::string_view to_token(DealiasPolicy::Kind k);
DealiasPolicy::Kind parse_dealias(std::string_view token);

struct GridSpec {
  int n = 32;
  double box_length = 2.0 * std::numbers::pi;
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  DealiasPolicy dealias;

  double spacing() const { return box_length / n; }
  /// Lattice-to-physical wavenumber factor 2*pi/L.
  double wavenumber_unit() const { return 2.0 * std::numbers::pi / box_length; }
  /// Throws ValidationError when an invariant is violated.
  void validate() const;
};

/// Per-axis Fourier symbols, indexed by FFT index 0..n-1. The grid is cubic and
/// isotropic, so the same table serves all three axes; the z axis uses the
/// first n/2+1 entries.
///
/// The composite symbols are what the operators actually multiply by. For
/// colocated schemes both derivative symbols are i*k1 and both interpolations
/// are 1. For the staggered scheme
///   d_forward  = shift * i*k1 = (e^{ikh} - 1)/h        (node i -> i+1/2)
///   d_backward = conj(shift) * i*k1 = (1 - e^{-ikh})/h (node i+1/2 -> i)
///   interp_forward  = shift * avg  = (1 + e^{ikh})/2
///   interp_backward = conj(shift) * avg
struct WavenumberTable {
  DerivativeScheme scheme = DerivativeScheme::Spectral;
  int n = 0;
  double h = 0.0;
  Eigen::ArrayXi k_exact;  ///< signed lattice index; Nyquist stored as +n/2
  ModeWeights k1_eff;      ///< first-derivative symbol (1/length)
  ModeWeights k2_eff;      ///< second-derivative symbol (1/length^2), >= 0
  ModeArray stagger_shift; ///< unit phase e^{i k h/2} (1 for colocated)
  ModeWeights avg_factor;  ///< interpolation attenuation cos(k h/2) (1 for colocated)
  ModeArray d_forward;
  ModeArray d_backward;
  ModeArray interp_forward;
  ModeArray interp_backward;
};

WavenumberTable build_wavenumbers(const GridSpec& grid);

/// Effective resolution per axis of the retained modes (2 * cutoff).
int effective_resolution(const GridSpec& grid);
/// Largest shell regarded as resolved: n/2, floor(n/3) or k_max.
int resolved_k_max(const GridSpec& grid);

/// Index bookkeeping for the r2c half-spectrum layout n x n x (n/2+1).
struct ModeLayout {
  int n = 0;
  int nz = 0;  ///< n/2 + 1
  Eigen::Index size() const { return static_cast<Eigen::Index>(n) * n * nz; }
  Eigen::Index index(int i, int j, int k) const {
    return (static_cast<Eigen::Index>(i) * n + j) * nz + k;
  }
  /// Signed lattice wavenumber of FFT index i (Nyquist -> +n/2).
  int wave(int i) const { return i <= n / 2 ? i : i - n; }
  /// FFT index of signed wavenumber m.
  int fft_index(int m) const { return ((m % n) + n) % n; }
};

/// Axis symbols expanded onto the stored modes, component c holding the
/// symbol of axis c. Built once per grid so the operators are plain array
/// expressions.
struct ModeSymbols {
  std::array<ModeArray, 3> d_forward, d_backward;
  std::array<ModeArray, 3> interp_forward, interp_backward;
  /// 1 / (sum_c d_backward d_forward), 0 where that symbol vanishes.
  ModeArray inverse_div_grad;
  bool colocated = true;  ///< interpolation symbols are all 1
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Immutable grid: specification, wavenumber tables, per-mode bookkeeping and
/// transform plans. Shared read-only by every field defined on it.
class Grid {
 public:
  struct Options {
    FftPlanner planner = FftPlanner::Estimate;
    int threads = 1;
  };

  static GridPtr create(const GridSpec& spec);
  static GridPtr create(const GridSpec& spec, Options options);
  /// Grid whose axis symbols are supplied by the caller (entries for indices
  /// 0..n-1, same conventions as build_wavenumbers).
  static GridPtr create_with_symbols(const GridSpec& spec, WavenumberTable table, Options options);

  const GridSpec& spec() const noexcept { return spec_; }
  const WavenumberTable& symbols() const noexcept { return table_; }
  const ModeLayout& layout() const noexcept { return layout_; }
  const ModeSymbols& mode_symbols() const noexcept { return modes_; }
  const FftEngine& fft() const noexcept { return *fft_; }
  int n() const noexcept { return spec_.n; }
  Eigen::Index mode_count() const noexcept { return layout_.size(); }
  Eigen::Index point_count() const noexcept { return fft_->point_count(); }

  /// Parseval weight of each stored mode (2 for modes standing in for their
  /// conjugate partner, 1 on the kz = 0 and kz = n/2 planes).
  const ModeWeights& parseval_weight() const noexcept { return weight_; }
  /// |m|^2 for the integer lattice wavevector of each mode.
  const ModeWeights& lattice_norm2() const noexcept { return norm2_; }
  /// Sum over axes of k2_eff: minus the Laplacian symbol.
  const ModeWeights& laplacian_symbol() const noexcept { return k2_total_; }
  /// Shell index round(|m|).
  const Eigen::ArrayXi& shell() const noexcept { return shell_; }
  int shell_count() const noexcept { return shell_count_; }
  /// 1 for retained modes, 0 for modes removed by the dealias policy.
  const ModeWeights& dealias_multiplier() const noexcept { return mask_; }
  bool has_dealias() const noexcept { return spec_.dealias.kind != DealiasPolicy::Kind::None; }

 private:
  Grid(const GridSpec& spec, WavenumberTable table, Options options);

  GridSpec spec_;
  WavenumberTable table_;
  ModeLayout layout_;
  ModeSymbols modes_;
  std::unique_ptr<FftEngine> fft_;
  ModeWeights weight_;
  ModeWeights norm2_;
  ModeWeights k2_total_;
  Eigen::ArrayXi shell_;
  int shell_count_ = 0;
  ModeWeights mask_;
};

/// Boolean retention mask over the stored modes for the grid's policy.
Eigen::Array<bool, Eigen::Dynamic, 1> dealias_mask(const Grid& grid);

/// Retention mask for |m| <= radius (used for spherical truncations and the
/// forced band).
ModeWeights sphere_multiplier(const Grid& grid, double radius);

}  // namespace helispec

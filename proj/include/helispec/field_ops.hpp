#pragma once

#include "helispec/spectral_grid.hpp"

#include <array>

namespace helispec {

/// Scalar field stored as Fourier-series coefficients.
struct SpectralScalar {
  GridPtr grid;
  ModeArray coeffs;

  static SpectralScalar zeros(GridPtr g);
};

/// Three-component field stored as Fourier-series coefficients of each
/// component's grid values. On the staggered scheme the components are
/// sampled at their own face (velocity) or edge (vorticity) locations.
class SpectralVector {
 public:
  SpectralVector() = default;
  explicit SpectralVector(GridPtr g);
  /// Components sized for the grid but left unset.
  static SpectralVector uninitialized(GridPtr g);

  const GridPtr& grid() const noexcept { return grid_; }
  const Grid& g() const noexcept { return *grid_; }

  ModeArray& operator[](int c) { return comp_[c]; }
  const ModeArray& operator[](int c) const { return comp_[c]; }

  SpectralVector& operator+=(const SpectralVector& o);
  SpectralVector& operator-=(const SpectralVector& o);
  SpectralVector& operator*=(Real s);
  /// this += s * o
  SpectralVector& add_scaled(Real s, const SpectralVector& o);

  friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
  friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
  friend SpectralVector operator*(Real s, SpectralVector a) { return a *= s; }
  friend SpectralVector operator*(SpectralVector a, Real s) { return a *= s; }
  SpectralVector operator-() const { return Real(-1) * SpectralVector(*this); }

  /// Largest coefficient modulus over all components.
  Real max_abs() const;
  bool all_finite() const;

 private:
  GridPtr grid_;
  std::array<ModeArray, 3> comp_;
};

using SpectralVelocity = SpectralVector;
using SpectralVorticity = SpectralVector;

struct PhysicalVector {
  std::array<PointArray, 3> comp;
  PointArray& operator[](int c) { return comp[c]; }
  const PointArray& operator[](int c) const { return comp[c]; }
};

/// Throws ValidationError unless both fields live on the same grid.
void require_same_grid(const Grid& a, const Grid& b);

// -- transforms ---------------------------------------------------------------

PointArray to_physical(const SpectralScalar& s);
PhysicalVector to_physical(const SpectralVector& v);
SpectralScalar to_spectral(const GridPtr& grid, const PointArray& p);
SpectralVector to_spectral(const GridPtr& grid, const PhysicalVector& p);

// -- differential operators -----------------------------------------------------

/// Discrete curl R. Staggered: face velocities -> edge vorticity.
SpectralVorticity curl(const SpectralVelocity& u);
/// Curl with backward differences (edges -> faces on the staggered layout);
/// the transpose of `curl`. Identical to `curl` on colocated schemes.
SpectralVector curl_dual(const SpectralVector& w);
/// Discrete divergence M (faces -> cell centers on the staggered layout).
SpectralScalar divergence(const SpectralVelocity& u);
/// Discrete gradient G = -M^T.
SpectralVelocity gradient(const SpectralScalar& p);
/// Block-diagonal Laplacian with symbol -sum_axes k2_eff.
SpectralVector laplacian(const SpectralVector& u);
/// Discrete Leray projection P = I - G (MG)^{-1} M. Modes where MG vanishes
/// pass through unchanged.
SpectralVelocity project(const SpectralVelocity& u);

/// Multiply every component by a per-mode 0/1 multiplier.
SpectralVector apply_mask(const SpectralVector& v, const ModeWeights& mask);
/// Apply the grid's dealias policy.
SpectralVector dealias(const SpectralVector& v);

// -- quadratic forms ------------------------------------------------------------

/// Grid mean of the pointwise dot product, evaluated through Parseval.
Real inner(const SpectralVector& a, const SpectralVector& b);
Real inner(const SpectralScalar& a, const SpectralScalar& b);
/// Same quantity evaluated by physical-space quadrature.
Real physical_inner(const PhysicalVector& a, const PhysicalVector& b);

/// Per-mode contributions (Parseval weights included) to inner(a, b).
ModeWeights inner_density(const SpectralVector& a, const SpectralVector& b);

/// Per-mode contributions to the helicity bilinear form hel(a, b) = a^T R b.
/// On the staggered layout both factors are interpolated to the cell centers
/// (one interpolation for a, two for curl b) before pairing.
ModeWeights helicity_density(const SpectralVector& a, const SpectralVector& b);
Real helicity_form(const SpectralVector& a, const SpectralVector& b);

Real energy(const SpectralVelocity& u);
/// Helicity with the scheme's own curl (cell-centre definition when staggered).
Real helicity(const SpectralVelocity& u);

struct StaggeredHelicity {
  Real vertex = 0.0;
  Real center = 0.0;
};
/// Helicity of a staggered field gathered at cell vertices and at cell centres
/// by explicit grid-point interpolation in physical space.
StaggeredHelicity staggered_helicity(const SpectralVelocity& u);

// -- checks and helpers -----------------------------------------------------------

/// Max-norm of the discrete divergence evaluated on the grid.
Real max_divergence(const SpectralVelocity& u);
/// Mean of each component (mode zero).
Eigen::Vector3d mean_momentum(const SpectralVector& u);
/// True if the kz = 0 and kz = n/2 planes satisfy c(-m) = conj(c(m)) to `tol`.
bool is_hermitian(const SpectralVector& u, Real tol);
/// Replace each self-paired-plane coefficient by the average with its conjugate partner.
void hermitian_symmetrize(ModeArray& c, const Grid& grid);

/// Calls f(idx, i, j, k) for every stored mode, i/j/k being FFT indices.
template <typename F>
void for_each_mode(const Grid& grid, F&& f) {
  const ModeLayout& L = grid.layout();
  Eigen::Index idx = 0;
  for (int i = 0; i < L.n; ++i)
    for (int j = 0; j < L.n; ++j)
      for (int k = 0; k < L.nz; ++k, ++idx) f(idx, i, j, k);
}

}  // namespace helispec

#pragma once

#include "helispec/time_integration.hpp"

#include <iosfwd>
#include <optional>

namespace helispec {

/// Shell-binned spectra, k = 0 .. size()-1, binned by round(|m|).
struct SpectrumSeries {
  Eigen::ArrayXd E, H;    ///< energy and helicity
  Eigen::ArrayXd Te, Th;  ///< nonlinear transfers
  Eigen::ArrayXd De, Dh;  ///< viscous dissipation rates (positive for decay)
  Eigen::ArrayXd Fe, Fh;  ///< forcing injection
  int samples = 0;

  static SpectrumSeries zeros(int shells);
  int size() const { return static_cast<int>(E.size()); }
  /// Add another sample (sums; call mean() to average).
  void accumulate(const SpectrumSeries& s);
  SpectrumSeries mean() const;
};

/// Sum of per-mode values over each shell.
Eigen::ArrayXd bin_shells(const Grid& grid, const ModeWeights& per_mode);

struct ShellSpectra {
  Eigen::ArrayXd E, H;
};
ShellSpectra shell_spectra(const SpectralVelocity& u);

struct TransferSpectra {
  Eigen::ArrayXd Te, Th;
};
/// T_e(k) = -sum_shell <u, P N>, T_h(k) = -sum_shell [hel(u, P N) + hel(P N, u)].
TransferSpectra transfer_spectra(const SpectralVelocity& u, ConvectiveForm form);

/// One-pass evaluation of every spectrum for the given dynamics. Forcing
/// spectra are whatever the forcing overwrite adds on top of transfer and
/// dissipation, so they vanish outside the forced modes. Dissipation is
/// counted only where the viscous term acts (not on forced modes).
SpectrumSeries measure_spectra(const SpectralVelocity& u, const Dynamics& dyn);

enum class ModeDensity {
  Continuum,  ///< 4 pi k^2 modes per shell
  Lattice,    ///< actual lattice points |m| <= k_max binned by round(|m|)
};

struct Equilibrium {
  Eigen::ArrayXd E, H;  ///< per shell 0..k_max (shell 0 is zero)
  Real alpha = 0.0, beta = 0.0;
  Real x = 0.0;  ///< (beta/alpha) k_max
};

/// Absolute-equilibrium spectra whose shell sums over 1..k_max reproduce
/// (e, h). Throws ValidationError when e <= 0 or |h| >= 2 k_max e.
Equilibrium absolute_equilibrium(Real e, Real h, int k_max, ModeDensity density = ModeDensity::Continuum);

Real relative_helicity(Real e, Real h, Real k_ref);

/// Largest violation of |H(k)| <= 2 (k + 1/2) E(k), relative to the bound.
/// The half-shell allowance covers lattice modes with |m| > k binned into k.
Real realizability_excess(const Eigen::ArrayXd& E, const Eigen::ArrayXd& H);

struct StationaryResidual {
  Eigen::ArrayXd re, rh;  ///< T - D per shell (zero for k <= k_F)
  Real rms_re = 0.0, rms_de = 0.0;
  Real rms_rh = 0.0, rms_dh = 0.0;
};
/// Residuals of the stationary Lin balance over shells k_F < k <= k_last.
StationaryResidual stationary_residual(const SpectrumSeries& avg, Real k_F, int k_last);

/// Global budgets in the layout of the forced-run table.
struct Budget {
  Real e = 0.0, h = 0.0;
  Real eps_e = 0.0, eps_h = 0.0;
  Real sum_te = 0.0, sum_th = 0.0;
  Real e_over_ke = 0.0, h_over_kh = 0.0;
  Real te_over_eps = 0.0, th_over_eps = 0.0;
};
/// Sums over shells 0..k_last of an averaged series; ke/kh are the forced
/// subsystem contents.
Budget budget(const SpectrumSeries& avg, int k_last, Real ke, Real kh);

void write_spectra_csv(std::ostream& os, const SpectrumSeries& s, const Equilibrium* eq = nullptr,
                       const StationaryResidual* res = nullptr);
void write_timeseries_header(std::ostream& os);
void write_timeseries_row(std::ostream& os, Real t, Real e, Real h, Real eps_e, Real eps_h, Real dt, int iters);

}  // namespace helispec

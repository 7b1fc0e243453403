#pragma once

#include "helispec/time_integration.hpp"

#include <optional>
#include <string>
#include <vector>

namespace helispec {

/// u = (A sin(kz) + C cos(ky), B sin(kx) + A cos(kz), C sin(ky) + B cos(kx)),
/// optionally with the argument of each coordinate shifted by a phase.
struct AbcSpec {
  int k = 1;
  Real A = 1.0, B = 1.0, C = 1.0;
  std::array<Real, 3> phase{0.0, 0.0, 0.0};  ///< added to kx, ky, kz
  std::optional<Real> energy_target;

  void validate(int n) const;
};

/// ABC flow sampled at each component's own grid locations.
SpectralVelocity abc_field(const AbcSpec& spec, const GridPtr& grid);
/// Sum of ABC flows (each normalised by its own energy_target if given).
SpectralVelocity abc_superposition(const std::vector<AbcSpec>& specs, const GridPtr& grid);

/// Seeded white-noise field, projected and dealiased.
SpectralVelocity random_velocity(const GridPtr& grid, unsigned seed);

struct ForcingSpec {
  Real k_F = 2.5;
  Real h_rel = 0.967;  ///< target K_h / (2 k_F K_e) of the initial forced modes
  Real energy = 1.0;   ///< K_e of the initial forced modes
  unsigned seed = 1;
  void validate(const GridSpec& grid) const;
};

/// Helical Euler forcing: modes with |m| <= k_F evolve as a Galerkin-truncated
/// inviscid system of their own. Their rhs comes from a small auxiliary grid
/// that carries the main scheme's symbols, uses the rotational form and the
/// sphere |m| <= k_F as dealias mask.
class EulerForcing final : public Forcing {
 public:
  EulerForcing(GridPtr main, ForcingSpec spec);

  void apply(const SpectralVelocity& u, SpectralVector& rhs) const override;
  const ModeWeights& forced_modes() const override { return mask_; }

  const ForcingSpec& spec() const { return spec_; }
  /// Positive-helicity state supported on the forced modes with the requested
  /// energy and (as close as reachable) relative helicity.
  SpectralVelocity initial_state() const;
  /// Energy and helicity held by the forced modes.
  Real band_energy(const SpectralVelocity& u) const;
  Real band_helicity(const SpectralVelocity& u) const;
  /// Largest relative helicity a band state can have with the active symbols.
  Real max_relative_helicity() const;

 private:
  SpectralVelocity restrict_to_aux(const SpectralVelocity& u) const;
  SpectralVelocity helical_state(Real power) const;

  GridPtr main_;
  GridPtr aux_;
  ForcingSpec spec_;
  ModeWeights mask_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> map_;  ///< (main index, aux index)
};

/// Physical setup of an experiment.
struct Scenario {
  std::string name;
  GridSpec grid;
  ConvectiveForm form = ConvectiveForm::Rotational;
  std::string tableau = "rk4";
  Real nu = 0.0;
  Real cfl = 0.5;
  Real t_end = 10.0;  ///< in characteristic times
  std::vector<AbcSpec> abc;
  std::optional<ForcingSpec> forcing;
  unsigned seed = 1;
};

/// inviscid32 (algorithm rows 1..6), truncated_euler, truncated_euler_small,
/// forced_helical, forced_reference.
Scenario preset(std::string_view name, int algorithm = 1);
std::vector<std::string> preset_names();

/// Initial state; creates the forcing object when the scenario is forced.
SpectralVelocity initial_state(const Scenario& sc, const GridPtr& grid, std::shared_ptr<EulerForcing>* forcing);

/// t0 = e^{-1/2} / k_1 with e the energy of `u` (the forced-mode energy for
/// forced runs) and k_1 the lowest excited wavenumber.
Real characteristic_time(const Scenario& sc, const SpectralVelocity& u, const EulerForcing* forcing);

}  // namespace helispec

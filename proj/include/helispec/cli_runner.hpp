#pragma once

#include "helispec/diagnostics.hpp"
#include "helispec/operator_verify.hpp"
#include "helispec/scenarios.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace helispec {

/// Everything a run needs. Text form: sectioned `key = value` lines, `#`
/// comments and `include = path` (relative to the including file).
struct RunConfig {
  std::string preset;  ///< empty: start from defaults
  int algorithm = 1;
  unsigned seed = 1;
  std::string restart;  ///< snapshot to resume from

  GridSpec grid;
  ConvectiveForm form = ConvectiveForm::Rotational;
  Real nu = 0.0;

  std::string tableau = "rk4";
  Real cfl = 0.5;
  Real t_end = 10.0;  ///< characteristic times
  Real dt_max = 1.0;  ///< characteristic times
  Real implicit_tol = 1e-13;
  int max_iter = 200;
  int anderson_depth = 6;

  std::vector<int> abc;                ///< ABC wavenumbers (A = B = C = 1)
  std::optional<Real> initial_energy;  ///< rescale the unforced initial state
  std::optional<ForcingSpec> forcing;

  std::string output_dir = "helispec_out";
  Real spectra_every = 0.5;   ///< characteristic times, 0 disables
  Real snapshot_every = 5.0;  ///< characteristic times, 0 disables
  Real average_from = 0.0;    ///< start of the spectra time average
  int threads = 1;
  bool measure_plans = false;

  /// Defaults overwritten by a named preset.
  static RunConfig from_preset(const std::string& name, int algorithm = 1);

  void validate() const;
  /// Every key with its effective value, in a fixed order.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
  Scenario scenario() const;
  /// `section.key`, value as written in a config file.
  void set(const std::string& key, const std::string& value);
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

/// Binary field dump: header followed by the raw coefficients of each component.
struct Snapshot {
  GridSpec grid;
  Real time = 0.0;
  std::int64_t step = 0;
  std::uint64_t config_hash = 0;
  Real t0 = 1.0;  ///< characteristic time of the run
  SpectralVelocity u;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
/// Reuses `grid` when its spec matches the file; otherwise builds one.
Snapshot read_snapshot(const std::filesystem::path& path, GridPtr grid = nullptr);

enum ExitCode { kOk = 0, kValidation = 2, kBlowup = 3, kNoConvergence = 4 };

struct RunResult {
  int exit_code = kOk;
  std::string message;
  std::int64_t steps = 0;
  Real t = 0.0, t0 = 1.0;
  Real e0 = 0.0, h0 = 0.0, e = 0.0, h = 0.0;
  Real max_rel_de = 0.0, max_rel_dh = 0.0;  ///< over the run, relative to e0 and |h0|
  Real max_spatial_e = 0.0, max_spatial_h = 0.0;  ///< largest per-step |spatial production| / dt
  SpectrumSeries average;                   ///< time-averaged spectra (samples after average_from)
  std::optional<Budget> budget;             ///< forced runs
  std::optional<StationaryResidual> residual;
  std::optional<Equilibrium> equilibrium;   ///< unforced inviscid runs
  Real ke = 0.0, kh = 0.0;                  ///< forced-band energy and helicity
  SpectralVelocity final_state;
};

struct RunHooks {
  /// Called after every accepted step with the new state.
  std::function<void(Real t, const StepReport&, const SpectralVelocity&)> on_step;
  bool write_files = true;
};

/// Runs a configuration. Numerical failures are reported through the exit
/// code; ValidationError propagates.
RunResult run(const RunConfig& cfg, const RunHooks& hooks = {});

/// Keeps large field buffers in the heap between steps instead of returning
/// them to the OS (glibc only; no-op elsewhere). Call once at startup.
void retain_freed_memory();

/// Certification of the configured grid (n <= 8).
std::vector<CertificationReport> verify(const RunConfig& cfg);

/// Human-readable g_ij table and classification of a tableau.
std::string tableau_report(const std::string& source);

/// Recompute spectra of a snapshot with the configured dynamics.
SpectrumSeries snapshot_spectra(const RunConfig& cfg, const Snapshot& s);

}  // namespace helispec

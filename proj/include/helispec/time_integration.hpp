#pragma once

#include "helispec/convection.hpp"

#include <iosfwd>
#include <memory>
#include <string>

namespace helispec {

struct ButcherTableau {
  enum class Kind { Explicit, Implicit };

  int s = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::string label;
  Kind kind = Kind::Explicit;

  /// rk4, gauss1 or euler.
  static ButcherTableau builtin(std::string_view token);
  static bool is_builtin(std::string_view token);
  /// Sets `kind` from the sparsity of `a` and checks sizes and sum(b) = 1.
  void finalize();
};

/// Tableau file: first line s, then s rows of a, then b. Tokens are decimals
/// or rationals p/q. Blank lines and '#' comments are ignored. Errors report
/// the offending line.
ButcherTableau parse_tableau(std::istream& in, std::string label);
/// Built-in token or path to a tableau file.
ButcherTableau load_tableau(std::string_view source);

/// g_ij = b_i a_ij + b_j a_ji - b_i b_j.
Eigen::MatrixXd symplecticity_defect(const ButcherTableau& t);
Real max_symplecticity_defect(const ButcherTableau& t);

/// Replaces the rhs on a subset of modes.
class Forcing {
 public:
  virtual ~Forcing() = default;
  /// Overwrite `rhs` on the forced modes given the current state.
  virtual void apply(const SpectralVelocity& u, SpectralVector& rhs) const = 0;
  /// 1 on forced modes, 0 elsewhere.
  virtual const ModeWeights& forced_modes() const = 0;
};

struct Dynamics {
  ConvectiveForm form = ConvectiveForm::Rotational;
  Real nu = 0.0;
  std::shared_ptr<const Forcing> forcing;
};

/// f = P(-N(u) + nu L u), then forced modes overwritten by the forcing.
SpectralVector rhs(const SpectralVelocity& u, const Dynamics& dyn);

struct StageEval {
  SpectralVector f;   ///< full rhs
  SpectralVector pn;  ///< projected nonlinear term P N(u)
};
StageEval evaluate(const SpectralVelocity& u, const Dynamics& dyn);

struct StepOptions {
  Real implicit_tol = 1e-13;
  int max_iter = 200;
  /// Anderson mixing depth for the stage iteration; 0 is plain fixed-point.
  int anderson_depth = 6;
  /// Compute the spatial/temporal split of the energy and helicity change.
  bool attribution = true;
};

/// Per-step bookkeeping. The changes split as
///   delta = spatial + temporal
/// with spatial = dt sum_i b_i <u_i, f_i> (or its helicity analogue) and
/// temporal = -dt^2/2 sum_ij g_ij <f_i, f_j>; `closure` is what is left over.
struct StepReport {
  Real dt = 0.0;
  int iterations = 0;
  Real residual = 0.0;
  Real e_before = 0.0, e_after = 0.0;
  Real h_before = 0.0, h_after = 0.0;
  Real delta_e = 0.0, delta_h = 0.0;
  Real spatial_e = 0.0, spatial_h = 0.0;
  Real temporal_e = 0.0, temporal_h = 0.0;
  Real closure_e = 0.0, closure_h = 0.0;
  /// dt sum_i b_i of the nonlinear-term rates alone.
  Real nonlinear_e = 0.0, nonlinear_h = 0.0;
  /// Largest |rate| of the nonlinear term over the stages.
  Real max_rate_e = 0.0, max_rate_h = 0.0;
  Eigen::Vector3d delta_momentum = Eigen::Vector3d::Zero();
};

struct StepResult {
  SpectralVelocity u;
  StepReport report;
};

StepResult step_explicit(const SpectralVelocity& u, const ButcherTableau& t, Real dt,
                         const Dynamics& dyn, const StepOptions& opt = {});
/// Fixed-point iteration on the stage values (Anderson-accelerated unless
/// the depth is 0); throws ConvergenceError.
StepResult step_implicit(const SpectralVelocity& u, const ButcherTableau& t, Real dt,
                         const Dynamics& dyn, const StepOptions& opt = {});
StepResult step_implicit_gauss(const SpectralVelocity& u, Real dt, const Dynamics& dyn,
                               Real tol = 1e-13, int max_iter = 200);
/// Dispatches on the tableau kind.
StepResult step(const SpectralVelocity& u, const ButcherTableau& t, Real dt, const Dynamics& dyn,
                const StepOptions& opt = {});

/// One step of the linear system y' = S y with the stage equations solved
/// exactly by dense LU (used for the quadratic-invariant checks).
Eigen::VectorXd step_linear(const Eigen::MatrixXd& S, const Eigen::VectorXd& y, const ButcherTableau& t, Real dt);

/// cfl * h / max_c max|u_c|, capped at dt_max.
Real cfl_dt(const SpectralVelocity& u, Real cfl, Real dt_max);

}  // namespace helispec

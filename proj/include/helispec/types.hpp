#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>

namespace helispec {

using Real = double;
using Complex = std::complex<Real>;

/// One complex coefficient per retained Fourier mode (r2c half-spectrum layout).
using ModeArray = Eigen::Array<Complex, Eigen::Dynamic, 1>;
/// One real value per mode (weights, masks, per-mode densities).
using ModeWeights = Eigen::Array<Real, Eigen::Dynamic, 1>;
/// One real value per physical grid point.
using PointArray = Eigen::Array<Real, Eigen::Dynamic, 1>;

/// Invalid configuration, grid, tableau or input file.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared in the solution.
class NumericalBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Implicit stage iteration did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace helispec

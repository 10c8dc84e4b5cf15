#pragma once

#include <stdexcept>
#include <string>

namespace dtpil {

/// A quadrature or series evaluation failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Multiplier search failed: no convergence within the iteration cap, or a
/// degenerate budget combination (e.g. the power constraint cannot bind).
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double power_residual = 0.0,
              double interference_residual = 0.0)
      : std::runtime_error(what),
        power_residual_(power_residual),
        interference_residual_(interference_residual) {}

  double power_residual() const noexcept { return power_residual_; }
  double interference_residual() const noexcept { return interference_residual_; }

private:
  double power_residual_;
  double interference_residual_;
};

}  // namespace dtpil

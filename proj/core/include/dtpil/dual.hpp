#pragma once

#include "dtpil/fading.hpp"
#include "dtpil/network.hpp"
#include "dtpil/policy.hpp"

namespace dtpil {

/// E[P(h,g) 1{X > threshold}] per user under the water-filling policy, by
/// nested adaptive quadrature (outer over g, inner over the h tail).
/// Nonincreasing in lambda, mu and threshold.
double expected_power(double lambda, double mu, double threshold,
                      const FadingModel& model_h, const FadingModel& model_g);

/// E[g P(h,g) 1{X > threshold}] per user (interference at the PBS).
double expected_interference(double lambda, double mu, double threshold,
                             const FadingModel& model_h, const FadingModel& model_g);

/// Solve for (lambda, mu, threshold) so that the per-user power constraint
/// binds, the interference constraint binds or is slack with mu = 0, and
/// threshold is the (1-p)-quantile of X. Throws SolverError when the search
/// does not converge or the power constraint cannot bind (degenerate budget).
DualSolution solve_duals(const NetworkConfig& config, const FadingModel& model_h,
                         const FadingModel& model_g);

}  // namespace dtpil

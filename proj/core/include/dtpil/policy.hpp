#pragma once

#include <cmath>

#include "dtpil/fading.hpp"

namespace dtpil {

struct DualDiagnostics {
  int outer_iterations = 0;
  int inner_iterations = 0;
  double power_residual = 0.0;         // E[P 1] - P_ave/N
  double interference_residual = 0.0;  // E[gP 1] - Q_ave/N (negative when slack)
  double sched_residual = 0.0;         // ratio_cdf(threshold) - (1 - p)
  bool interference_active = false;
  bool bracket_warning = false;  // a bisection residual violated monotonicity
};

/// Multipliers (lambda, mu) for the average-power and average-interference
/// constraints, with the scheduling threshold t = (1-p)-quantile of
/// X = h / (lambda + mu g).
struct DualSolution {
  double lambda = 0.0;
  double mu = 0.0;
  double threshold = 0.0;
  double p = 0.0;
  DualDiagnostics diag{};
};

/// Water-filling transmit power (1/(lambda + mu g) - 1/h)^+.
inline double waterfill(double h, double g, double lambda, double mu) noexcept {
  if (h <= 0.0) return 0.0;
  const double p = 1.0 / (lambda + mu * g) - 1.0 / h;
  return p > 0.0 ? p : 0.0;
}

/// Scheduling statistic X = h / (lambda + mu g); X > 1 iff waterfill > 0.
inline double ratio_value(double h, double g, double lambda, double mu) noexcept {
  return h / (lambda + mu * g);
}

/// Transmit decision: X strictly above the threshold.
inline bool schedule(double h, double g, const DualSolution& dual) noexcept {
  return ratio_value(h, g, dual.lambda, dual.mu) > dual.threshold;
}

/// Rate log(1 + h P) of a scheduled user; equals log(X) whenever X exceeds
/// max(threshold, 1) and is zero otherwise (scheduled users below the
/// water-filling level send nothing).
inline double instantaneous_rate(double h, double g, const DualSolution& dual) noexcept {
  if (!schedule(h, g, dual)) return 0.0;
  return std::log1p(h * waterfill(h, g, dual.lambda, dual.mu));
}

/// G(max(t, 1)) with G(x) = log x + 1/x - 1; the scheduling-constraint
/// multiplier level implied by threshold t. Monotone nondecreasing.
inline double eta_from_threshold(double t) noexcept {
  const double x = t > 1.0 ? t : 1.0;
  return std::log(x) + 1.0 / x - 1.0;
}

/// CDF of X = h / (lambda + mu g): E_g[F_h(x (lambda + mu g))] by adaptive
/// quadrature over g (exact F_h(lambda x) when mu = 0). Throws NumericError
/// if the quadrature fails to converge.
double ratio_cdf(double x, double lambda, double mu, const FadingModel& model_h,
                 const FadingModel& model_g);

/// Inverse of ratio_cdf: |ratio_cdf(result) - q| <= 1e-9. An optional
/// bracket hint (lo < hi) shortcuts the search; it is widened if wrong.
double ratio_quantile(double q, double lambda, double mu, const FadingModel& model_h,
                      const FadingModel& model_g, double bracket_lo = 0.0,
                      double bracket_hi = 0.0);

}  // namespace dtpil

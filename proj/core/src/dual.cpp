#include "dtpil/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dtpil/errors.hpp"
#include "dtpil/quadrature.hpp"
#include "detail_quad.hpp"

namespace dtpil {

namespace {

constexpr double kPowerRelTol = 1e-7;
constexpr double kInterferenceRelTol = 1e-7;
constexpr int kOuterCap = 500;

// E[(1/s - 1/h)^+ 1{h > T s}] over h alone, at water level 1/s with the
// scheduling gate T = max(threshold, 1). Single integral, no cancellation.
double conditional_power(double s, double gate, const FadingModel& model_h) {
  const double c = gate * s;
  const double surv_c = model_h.survival(c);
  if (surv_c <= 0.0) return 0.0;
  const double h_hi = std::max(model_h.upper_cutoff13(), 2.0 * c);
  auto integrand = [&](double h) { return (1.0 / s - 1.0 / h) * model_h.pdf(h); };
  const auto r = quad::integrate(integrand, c, h_hi, 1e-10, 0.0, 4000);
  if (!r.converged) {
    throw NumericError("expected-power inner quadrature did not converge", r.abs_error);
  }
  // h-tail beyond the cutoff: integrand between (1/s - 1/h_hi) f and f/s.
  const double tail = model_h.survival(h_hi) * (1.0 / s - 0.5 / h_hi);
  return r.value + std::max(tail, 0.0);
}

double expected_value(bool weight_g, double lambda, double mu, double threshold,
                      const FadingModel& model_h, const FadingModel& model_g) {
  if (!(lambda + mu > 0.0) || lambda < 0.0 || mu < 0.0) {
    throw std::domain_error("expected value: requires lambda, mu >= 0, lambda + mu > 0");
  }
  if (threshold < 0.0) throw std::domain_error("expected value: threshold must be >= 0");
  const double gate = std::max(threshold, 1.0);
  if (mu == 0.0) {
    // Independent of g; for the interference flavor E[g] = 1 factors out.
    return conditional_power(lambda, gate, model_h);
  }
  const double g_hi = model_g.upper_cutoff13();
  auto integrand = [&](double g) {
    const double w = weight_g ? g : 1.0;
    return w * model_g.pdf(g) * conditional_power(lambda + mu * g, gate, model_h);
  };
  const auto r = detail::integrate_over_g(model_g, g_hi, integrand, 1e-9, 1e-15, 4000);
  if (!r.converged) {
    throw NumericError("expected-value outer quadrature did not converge", r.abs_error);
  }
  // Outer g-tail (mass ~1e-13): the conditional power decreases in g.
  const double a_hi = conditional_power(lambda + mu * g_hi, gate, model_h);
  const double tail =
      model_g.survival(g_hi) * (weight_g ? 2.0 * g_hi : 1.0) * a_hi;
  return r.value + 0.5 * tail;
}

}  // namespace

double expected_power(double lambda, double mu, double threshold,
                      const FadingModel& model_h, const FadingModel& model_g) {
  return expected_value(false, lambda, mu, threshold, model_h, model_g);
}

double expected_interference(double lambda, double mu, double threshold,
                             const FadingModel& model_h, const FadingModel& model_g) {
  return expected_value(true, lambda, mu, threshold, model_h, model_g);
}

DualSolution solve_duals(const NetworkConfig& config, const FadingModel& model_h,
                         const FadingModel& model_g) {
  config.validate();
  const auto budget = per_user_budget(config);
  const double p = config.p();
  const double cdf_target = 1.0 - p;

  DualSolution sol;
  sol.p = p;
  DualDiagnostics& diag = sol.diag;

  double t_lo_hint = 0.0, t_hi_hint = 0.0;
  auto threshold_for = [&](double lambda, double mu) {
    const double t =
        ratio_quantile(cdf_target, lambda, mu, model_h, model_g, t_lo_hint, t_hi_hint);
    t_lo_hint = 0.5 * t;
    t_hi_hint = 2.0 * t;
    return t;
  };

  // Inner solve: find lambda making the power constraint bind at fixed mu.
  // The residual is strictly decreasing in lambda; violations of that are
  // recorded as a bracket warning.
  auto solve_lambda = [&](double mu, double lo, double hi, double& t_out) {
    auto residual = [&](double lam) {
      ++diag.inner_iterations;
      t_out = threshold_for(lam, mu);
      return expected_power(lam, mu, t_out, model_h, model_g) - budget.per_user_power;
    };
    const double warn_slack = 1e-9 * budget.per_user_power;
    double f_lo = residual(lo);
    int grow = 0;
    while (f_lo < 0.0) {
      hi = lo;
      lo *= 0.25;
      if (lo < 1e-12) {
        throw SolverError(
            "power constraint cannot bind: lambda driven below 1e-12 (degenerate budget)",
            f_lo, 0.0);
      }
      f_lo = residual(lo);
      if (++grow > 100) throw SolverError("lambda bracket expansion failed", f_lo, 0.0);
    }
    double f_hi = residual(hi);
    grow = 0;
    while (f_hi > 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi *= 4.0;
      f_hi = residual(hi);
      if (++grow > 100) throw SolverError("lambda bracket expansion failed", f_hi, 0.0);
    }
    double lam = 0.5 * (lo + hi);
    double f_mid = f_lo;
    for (int it = 0; it < 200; ++it) {
      lam = 0.5 * (lo + hi);
      if (lam <= lo || lam >= hi) break;
      f_mid = residual(lam);
      if (f_mid > f_lo + warn_slack || f_mid < f_hi - warn_slack) diag.bracket_warning = true;
      if (std::abs(f_mid) <= kPowerRelTol * budget.per_user_power) break;
      if (f_mid > 0.0) {
        lo = lam;
        f_lo = f_mid;
      } else {
        hi = lam;
        f_hi = f_mid;
      }
    }
    diag.power_residual = f_mid;
    return lam;
  };

  // Slackness-first: try mu = 0.
  double t0 = 0.0;
  const double lambda0 = solve_lambda(0.0, 1e-6, 10.0, t0);
  ++diag.outer_iterations;
  const double i0 = expected_interference(lambda0, 0.0, t0, model_h, model_g);
  if (i0 <= budget.per_user_interference * (1.0 + kInterferenceRelTol)) {
    sol.lambda = lambda0;
    sol.mu = 0.0;
    sol.threshold = t0;
    diag.interference_active = false;
    diag.interference_residual = i0 - budget.per_user_interference;
    diag.sched_residual =
        ratio_cdf(t0, sol.lambda, sol.mu, model_h, model_g) - cdf_target;
    return sol;
  }

  // Interference constraint active: outer bisection on mu targeting
  // interference equality, inner bisection on lambda for power equality.
  diag.interference_active = true;
  double lam_warm = lambda0;
  double t_cur = t0;
  auto interference_at = [&](double mu) {
    ++diag.outer_iterations;
    if (diag.outer_iterations > kOuterCap) {
      throw SolverError("dual solve exceeded outer iteration cap",
                        diag.power_residual, diag.interference_residual);
    }
    const double lam =
        solve_lambda(mu, std::max(0.3 * lam_warm, 1e-9), std::max(2.0 * lam_warm, 1e-6), t_cur);
    lam_warm = lam;
    return expected_interference(lam, mu, t_cur, model_h, model_g);
  };

  double mu_lo = 0.0;
  double f_ilo = i0 - budget.per_user_interference;  // > 0
  double mu_hi = 0.1;
  double f_ihi = interference_at(mu_hi) - budget.per_user_interference;
  int grow = 0;
  while (f_ihi > 0.0) {
    mu_lo = mu_hi;
    f_ilo = f_ihi;
    mu_hi *= 4.0;
    f_ihi = interference_at(mu_hi) - budget.per_user_interference;
    if (++grow > 100) {
      throw SolverError("mu bracket expansion failed", diag.power_residual, f_ihi);
    }
  }
  // mu always tracks the point lam_warm/t_cur were last solved at.
  double mu = mu_hi;
  double f_imid = f_ihi;
  const double warn_slack = 1e-9 * budget.per_user_interference;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (mid <= mu_lo || mid >= mu_hi) break;
    mu = mid;
    f_imid = interference_at(mu) - budget.per_user_interference;
    if (f_imid > f_ilo + warn_slack || f_imid < f_ihi - warn_slack) diag.bracket_warning = true;
    if (std::abs(f_imid) <= kInterferenceRelTol * budget.per_user_interference) break;
    if (f_imid > 0.0) {
      mu_lo = mu;
      f_ilo = f_imid;
    } else {
      mu_hi = mu;
      f_ihi = f_imid;
    }
  }

  sol.lambda = lam_warm;
  sol.mu = mu;
  sol.threshold = t_cur;
  diag.interference_residual = f_imid;
  diag.sched_residual =
      ratio_cdf(sol.threshold, sol.lambda, sol.mu, model_h, model_g) - cdf_target;
  return sol;
}

}  // namespace dtpil

#include "dtpil/policy.hpp"

#include <algorithm>
#include <stdexcept>

#include "dtpil/errors.hpp"
#include "dtpil/quadrature.hpp"
#include "detail_quad.hpp"

namespace dtpil {

double ratio_cdf(double x, double lambda, double mu, const FadingModel& model_h,
                 const FadingModel& model_g) {
  if (!(lambda + mu > 0.0) || lambda < 0.0 || mu < 0.0) {
    throw std::domain_error("ratio_cdf: requires lambda, mu >= 0 and lambda + mu > 0");
  }
  if (x <= 0.0) return 0.0;
  if (mu == 0.0) return model_h.cdf(lambda * x);

  const double g_hi = model_g.upper_cutoff10();
  auto integrand = [&](double g) {
    return model_g.pdf(g) * model_h.cdf(x * (lambda + mu * g));
  };
  const auto r = detail::integrate_over_g(model_g, g_hi, integrand, 1e-9, 1e-13, 4000);
  if (!r.converged) {
    throw NumericError("ratio_cdf quadrature did not converge", r.abs_error);
  }
  // The g-tail above the cutoff has mass ~1e-10; the integrand there lies
  // between F_h at the cutoff and 1, so add the midpoint of those bounds.
  const double tail_mass = model_g.survival(g_hi);
  const double value =
      r.value + tail_mass * 0.5 * (model_h.cdf(x * (lambda + mu * g_hi)) + 1.0);
  return std::clamp(value, 0.0, 1.0);
}

double ratio_quantile(double q, double lambda, double mu, const FadingModel& model_h,
                      const FadingModel& model_g, double bracket_lo, double bracket_hi) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::domain_error("ratio_quantile: q must lie in [0, 1)");
  }
  if (q == 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  if (bracket_hi > bracket_lo && bracket_lo >= 0.0 && bracket_hi > 0.0) {
    lo = bracket_lo;
    hi = bracket_hi;
    if (ratio_cdf(lo, lambda, mu, model_h, model_g) > q) lo = 0.0;
  }
  int grow = 0;
  while (ratio_cdf(hi, lambda, mu, model_h, model_g) <= q) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200) {
      throw NumericError("ratio_quantile: bracket expansion failed", q);
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = ratio_cdf(mid, lambda, mu, model_h, model_g);
    if (std::abs(f - q) <= 1e-10) return mid;
    (f < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dtpil

#pragma once

#include <cmath>

#include "dtpil/fading.hpp"
#include "dtpil/quadrature.hpp"

namespace dtpil::detail {

// Integrate f (already including the pdf factor of model_g) over (0, g_hi].
// When the pdf is singular at the origin (gamma < 1 in the class-C sense)
// the substitution g = y^k with k = ceil(1/gamma) removes the singularity.
template <class F>
quad::Result integrate_over_g(const FadingModel& model_g, double g_hi, F&& f,
                              double rel_tol, double abs_tol, int max_intervals) {
  const double gamma = model_g.tail().gamma;
  if (gamma >= 1.0) {
    return quad::integrate(f, 0.0, g_hi, rel_tol, abs_tol, max_intervals);
  }
  const double k = std::ceil(1.0 / gamma);
  auto substituted = [&f, k](double y) {
    const double g = std::pow(y, k);
    return f(g) * k * std::pow(y, k - 1.0);
  };
  return quad::integrate(substituted, 0.0, std::pow(g_hi, 1.0 / k), rel_tol, abs_tol,
                         max_intervals);
}

}  // namespace dtpil::detail

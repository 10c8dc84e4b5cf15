#pragma once

namespace dtpil::special {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly (no cancellation in the tail).
double gamma_q(double a, double x);

/// First-order Marcum Q function Q_1(a, b) via the modified-Bessel series,
/// terms truncated below 1e-15 of the running sum. Scaled Bessel values
/// come from Miller's backward recurrence, so large arguments neither
/// overflow nor lose the exponential prefactor.
double marcum_q1(double a, double b);

/// Complement 1 - Q_1(a, b), computed directly for b <= a where Q_1 is
/// close to 1 (needed for the regular-variation limit at the origin).
double marcum_p1(double a, double b);

/// Exponential integral E_1(x), x > 0.
double expint_e1(double x);

/// Scaled modified Bessel function I_0(z) exp(-z), z >= 0.
double bessel_i0_scaled(double z);

}  // namespace dtpil::special

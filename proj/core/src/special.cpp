#include "dtpil/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dtpil/errors.hpp"

namespace dtpil::special {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 500;

// Series for P(a, x), x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma series did not converge", del / sum);
}

// Continued fraction for Q(a, x), x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericError("incomplete gamma continued fraction did not converge", h);
}

// Scaled modified Bessel I_k(z) * exp(-z) for k = 0..kmax, Miller's
// backward recurrence normalized with I_0 + 2 sum_k I_k = e^z.
void scaled_bessel_i(double z, int kmax, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (z <= 0.0) {
    out[0] = 1.0;  // I_0(0) = 1, I_k(0) = 0
    return;
  }
  const int start = kmax + 40 + static_cast<int>(7.0 * std::sqrt(z));
  double next = 0.0;   // I_{k+1} (unnormalized)
  double cur = 1e-280; // I_k at k = start
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = next + (2.0 * k / z) * cur;
    next = cur;
    cur = prev;
    if (k - 1 <= kmax) out[k - 1] = cur;
    norm += 2.0 * next;
    if (cur > 1e260) {  // rescale to avoid overflow
      const double inv = 1e-260;
      cur *= inv;
      next *= inv;
      norm *= inv;
      for (auto& v : out) v *= inv;
    }
  }
  norm += cur;  // + I_0
  for (auto& v : out) v /= norm;
}

// Shared series sum_{k >= k0} r^k Ihat_k(z), prefactor exp(-(b-a)^2/2).
double marcum_series(double a, double b, int k0) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  const double r = small / big;
  const double z = a * b;
  // Enough orders that both the geometric factor and the Bessel decay are
  // below 1e-18 of the peak.
  int kmax = 10 + static_cast<int>(9.5 * std::sqrt(z));
  if (r < 0.95) {
    const int geo = static_cast<int>(std::log(1e-18) / std::log(r)) + 2;
    kmax = std::min(kmax, std::max(geo, 8));
  }
  static thread_local std::vector<double> ik;
  scaled_bessel_i(z, kmax, ik);
  double sum = 0.0;
  double rk = (k0 == 0) ? 1.0 : r;
  for (int k = k0; k <= kmax; ++k) {
    const double term = rk * ik[static_cast<std::size_t>(k)];
    sum += term;
    if (term < 1e-15 * sum) break;  // terms decrease monotonically in k
    rk *= r;
  }
  const double d = b - a;
  return sum * std::exp(-0.5 * d * d);
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::domain_error("gamma_p: shape must be positive");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0) throw std::domain_error("gamma_q: shape must be positive");
  if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double marcum_q1(double a, double b) {
  if (b <= 0.0) return 1.0;
  if (a <= 0.0) return std::exp(-0.5 * b * b);
  if (b > a) return marcum_series(a, b, 0);
  return 1.0 - marcum_series(a, b, 1);
}

double marcum_p1(double a, double b) {
  if (b <= 0.0) return 0.0;
  if (a <= 0.0) return -std::expm1(-0.5 * b * b);
  if (b > a) return 1.0 - marcum_series(a, b, 0);
  return marcum_series(a, b, 1);
}

double bessel_i0_scaled(double z) {
  if (z <= 0.0) return 1.0;
  if (z <= 30.0) {
    // All-positive power series, then rescale.
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
      term *= q / (double(k) * double(k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-z);
  }
  // Asymptotic series; truncation error ~ e^{-2z} is negligible for z > 30.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * z * k);
    if (next >= term) break;  // series started diverging
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * 3.14159265358979323846 * z);
}

double expint_e1(double x) {
  if (x <= 0.0) throw std::domain_error("expint_e1: x must be positive");
  if (x <= 1.0) {
    // -gamma - log x + sum (-1)^{k+1} x^k / (k k!)
    constexpr double kEulerGamma = 0.57721566490153286;
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -x / k;
      sum -= term / k;
      if (std::abs(term / k) < 1e-18) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Lentz continued fraction: E1(x) = e^-x / (x + 1/(1 + 1/(x + 2/(1 + ...))))
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x);
}

}  // namespace dtpil::special

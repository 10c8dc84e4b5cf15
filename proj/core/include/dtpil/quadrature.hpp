#pragma once

#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "dtpil/errors.hpp"

namespace dtpil::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 1;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double a, b, value, error;
};

template <class F>
Panel evaluate_panel(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  double fv[14];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    fv[j] = f1;
    fv[7 + j] = f2;
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double mean = kronrod * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[7 + j] - mean));
  }
  resasc *= h;
  double err = std::abs(kronrod - gauss) * h;
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double round = 50.0 * 2.220446049250313e-16 * resabs * h;
  return {a, b, kronrod * h, std::max(err, round)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]; bisects the worst
/// interval until the error estimate meets max(abs_tol, rel_tol * |value|)
/// or the interval budget is exhausted (converged = false then).
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-9,
                 double abs_tol = 0.0, int max_intervals = 2000) {
  Result res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  auto worse = [](const detail::Panel& x, const detail::Panel& y) {
    return x.error < y.error;
  };
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(worse)>
      heap(worse);
  auto first = detail::evaluate_panel(f, a, b);
  res.evaluations = 15;
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         res.intervals < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at machine resolution
      heap.push({worst.a, worst.b, worst.value, 0.0});
      total_err -= worst.error;
      continue;
    }
    const auto left = detail::evaluate_panel(f, worst.a, mid);
    const auto right = detail::evaluate_panel(f, mid, worst.b);
    res.evaluations += 30;
    res.intervals += 1;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  res.value = total;
  res.abs_error = total_err;
  res.converged =
      total_err <= std::max(abs_tol, rel_tol * std::abs(total)) && std::isfinite(total);
  return res;
}

/// As integrate(), but throws NumericError on non-convergence.
template <class F>
double integrate_or_throw(F&& f, double a, double b, double rel_tol = 1e-9,
                          double abs_tol = 0.0, int max_intervals = 2000,
                          const char* label = "quadrature") {
  const auto r = integrate(std::forward<F>(f), a, b, rel_tol, abs_tol, max_intervals);
  if (!r.converged) {
    throw NumericError(std::string(label) + " did not converge", r.abs_error);
  }
  return r.value;
}

}  // namespace dtpil::quad

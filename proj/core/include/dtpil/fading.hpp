#pragma once

#include <string>
#include <string_view>

#include "dtpil/rng.hpp"

namespace dtpil {

enum class Family { rayleigh, rician, nakagami, weibull };

/// Constants describing a class-C power-gain distribution at both ends of
/// its support: 1 - F(x) ~ alpha x^l exp(-beta x^n + H(x)) as x -> inf and
/// F(x) ~ tail_eta x^gamma as x -> 0. tail_eta is the fading constant of
/// the origin limit, unrelated to the scheduling multiplier sched_eta.
struct ClassCTail {
  double alpha = 0.0;
  double l = 0.0;
  double beta = 0.0;
  double n = 0.0;
  double h_coef = 0.0;  // H(x) = h_coef * sqrt(x)
  double tail_eta = 0.0;
  double gamma = 0.0;

  double H(double x) const { return h_coef == 0.0 ? 0.0 : h_coef * std::sqrt(x); }
  double envelope(double x) const;  // alpha x^l exp(-beta x^n + H(x))
};

/// Unit-mean fading power-gain distribution (Rayleigh, Rician K_f,
/// Nakagami-m, or Weibull c). Immutable after construction; safe for
/// concurrent read-only use.
class FadingModel {
public:
  static FadingModel rayleigh();
  static FadingModel rician(double k_factor);
  static FadingModel nakagami(double m);
  static FadingModel weibull(double c);

  /// Parse "rayleigh", "rician:1.5", "nakagami:0.5", "weibull:4".
  static FadingModel parse(std::string_view spec);

  Family family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }
  std::string to_string() const;

  double cdf(double x) const;
  double survival(double x) const;  // 1 - cdf, no cancellation in the tail
  double pdf(double x) const;

  /// Inverse CDF by bracketed bisection; |cdf(quantile(q)) - q| <= 1e-9.
  /// Throws std::domain_error unless 0 <= q < 1.
  double quantile(double q) const;

  double sample(rng::Stream& stream) const;

  /// Table row of class-C constants for this family/shape.
  const ClassCTail& tail() const noexcept { return tail_; }

  /// Cached high quantiles used as integration cutoffs.
  double upper_cutoff10() const noexcept { return cutoff10_; }  // F = 1 - 1e-10
  double upper_cutoff13() const noexcept { return cutoff13_; }  // F = 1 - 1e-13

private:
  FadingModel(Family family, double shape);

  Family family_;
  double shape_;
  ClassCTail tail_{};
  // Precomputed per-family constants.
  double wb_beta_ = 0.0;    // Weibull: Gamma(1 + 2/c)^(c/2)
  double wb_halfc_ = 0.0;   // Weibull: c/2
  double ric_a_ = 0.0;      // Rician: sqrt(2 K_f)
  double ric_scale_ = 0.0;  // Rician: 2 (K_f + 1)
  double ric_nu_ = 0.0;     // Rician: LOS amplitude sqrt(K_f/(K_f+1))
  double ric_sigma_ = 0.0;  // Rician: diffuse sigma, sqrt(1/(2(K_f+1)))
  double nak_lg_ = 0.0;     // Nakagami: lgamma(m)
  double cutoff10_ = 0.0;
  double cutoff13_ = 0.0;
};

struct TailRatio {
  double value = 0.0;
  bool saturated = false;  // survival and envelope both underflowed
};

/// (1 - F(x)) / envelope(x); approaches 1 as x grows. When both sides
/// underflow the result is reported as saturated with value 1.
TailRatio tail_ratio(const FadingModel& model, const ClassCTail& tail, double x);

/// F(x) / (tail_eta x^gamma); approaches 1 as x decreases to 0.
double origin_ratio(const FadingModel& model, const ClassCTail& tail, double x);

}  // namespace dtpil

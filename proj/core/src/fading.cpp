#include "dtpil/fading.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dtpil/special.hpp"

namespace dtpil {

namespace {

constexpr double kQuantileFTol = 1e-12;
constexpr int kQuantileMaxIter = 200;

double require_positive_shape(Family family, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::domain_error("fading shape parameter must be positive and finite");
  }
  (void)family;
  return shape;
}

// Marsaglia-Tsang Gamma(shape, 1) sampler; the shape < 1 case is boosted
// through Gamma(shape + 1) with the u^(1/shape) factor.
double gamma_sample(double shape, rng::Stream& s) {
  if (shape < 1.0) {
    const double u = s.next_unit();
    return gamma_sample(shape + 1.0, s) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = s.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.next_unit();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double ClassCTail::envelope(double x) const {
  return alpha * std::pow(x, l) * std::exp(-beta * std::pow(x, n) + H(x));
}

FadingModel::FadingModel(Family family, double shape) : family_(family), shape_(shape) {
  using std::numbers::pi;
  switch (family_) {
    case Family::rayleigh:
      tail_ = {1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0};
      break;
    case Family::rician: {
      const double k = shape_;
      ric_a_ = std::sqrt(2.0 * k);
      ric_scale_ = 2.0 * (k + 1.0);
      ric_nu_ = std::sqrt(k / (k + 1.0));
      ric_sigma_ = std::sqrt(0.5 / (k + 1.0));
      const double alpha =
          1.0 / (2.0 * std::sqrt(pi) * std::exp(k) * std::pow(k * (k + 1.0), 0.25));
      tail_ = {alpha, -0.25, k + 1.0, 1.0, 2.0 * std::sqrt(k * (k + 1.0)),
               (k + 1.0) * std::exp(-k), 1.0};
      break;
    }
    case Family::nakagami: {
      const double m = shape_;
      nak_lg_ = std::lgamma(m);
      const double c = std::pow(m, m - 1.0) / std::tgamma(m);
      tail_ = {c, m - 1.0, m, 1.0, 0.0, c, m};
      break;
    }
    case Family::weibull: {
      const double c = shape_;
      wb_halfc_ = 0.5 * c;
      wb_beta_ = std::pow(std::tgamma(1.0 + 2.0 / c), wb_halfc_);
      tail_ = {1.0, 0.0, wb_beta_, wb_halfc_, 0.0, wb_beta_, wb_halfc_};
      break;
    }
  }
  cutoff10_ = quantile(1.0 - 1e-10);
  cutoff13_ = quantile(1.0 - 1e-13);
}

FadingModel FadingModel::rayleigh() { return FadingModel(Family::rayleigh, 0.0); }

FadingModel FadingModel::rician(double k_factor) {
  return FadingModel(Family::rician, require_positive_shape(Family::rician, k_factor));
}

FadingModel FadingModel::nakagami(double m) {
  return FadingModel(Family::nakagami, require_positive_shape(Family::nakagami, m));
}

FadingModel FadingModel::weibull(double c) {
  return FadingModel(Family::weibull, require_positive_shape(Family::weibull, c));
}

FadingModel FadingModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  double shape = 0.0;
  bool has_shape = false;
  if (colon != std::string_view::npos) {
    const std::string s(spec.substr(colon + 1));
    std::size_t used = 0;
    try {
      shape = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid fading shape in model spec '" + std::string(spec) + "'");
    }
    if (used != s.size()) {
      throw std::invalid_argument("invalid fading shape in model spec '" + std::string(spec) + "'");
    }
    has_shape = true;
  }
  auto need_shape = [&](const char* fam) {
    if (!has_shape) {
      throw std::invalid_argument(std::string("model '") + fam + "' requires a shape, e.g. '" +
                                  fam + ":1.0'");
    }
  };
  if (name == "rayleigh") {
    if (has_shape) throw std::invalid_argument("model 'rayleigh' takes no shape parameter");
    return rayleigh();
  }
  if (name == "rician") {
    need_shape("rician");
    return rician(shape);
  }
  if (name == "nakagami") {
    need_shape("nakagami");
    return nakagami(shape);
  }
  if (name == "weibull") {
    need_shape("weibull");
    return weibull(shape);
  }
  throw std::invalid_argument("unknown fading model '" + std::string(spec) +
                              "' (expected rayleigh, rician:K, nakagami:m or weibull:c)");
}

std::string FadingModel::to_string() const {
  auto fmt = [](const char* fam, double s) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s:%.17g", fam, s);
    return std::string(buf);
  };
  switch (family_) {
    case Family::rayleigh: return "rayleigh";
    case Family::rician: return fmt("rician", shape_);
    case Family::nakagami: return fmt("nakagami", shape_);
    case Family::weibull: return fmt("weibull", shape_);
  }
  return "?";
}

double FadingModel::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case Family::rayleigh:
      return -std::expm1(-x);
    case Family::rician:
      return special::marcum_p1(ric_a_, std::sqrt(ric_scale_ * x));
    case Family::nakagami:
      return special::gamma_p(shape_, shape_ * x);
    case Family::weibull:
      return -std::expm1(-wb_beta_ * std::pow(x, wb_halfc_));
  }
  return 0.0;
}

double FadingModel::survival(double x) const {
  if (x <= 0.0) return 1.0;
  switch (family_) {
    case Family::rayleigh:
      return std::exp(-x);
    case Family::rician:
      return special::marcum_q1(ric_a_, std::sqrt(ric_scale_ * x));
    case Family::nakagami:
      return special::gamma_q(shape_, shape_ * x);
    case Family::weibull:
      return std::exp(-wb_beta_ * std::pow(x, wb_halfc_));
  }
  return 0.0;
}

double FadingModel::pdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::rayleigh:
      return std::exp(-x);
    case Family::rician: {
      if (x == 0.0) return tail_.tail_eta;  // (K+1) e^{-K}
      // (K+1) exp(-K - (K+1)x) I_0(2 sqrt(K(K+1)x)), with the Bessel factor
      // scaled so large x neither overflows nor underflows prematurely.
      const double k = shape_;
      const double z = 2.0 * std::sqrt(k * (k + 1.0) * x);
      return (k + 1.0) * std::exp(-k - (k + 1.0) * x + z) * special::bessel_i0_scaled(z);
    }
    case Family::nakagami: {
      const double m = shape_;
      if (x == 0.0) {
        if (m > 1.0) return 0.0;
        if (m == 1.0) return 1.0;
        return std::numeric_limits<double>::infinity();
      }
      return std::exp(m * std::log(m) + (m - 1.0) * std::log(x) - m * x - nak_lg_);
    }
    case Family::weibull: {
      const double hc = wb_halfc_;
      if (x == 0.0) {
        if (hc > 1.0) return 0.0;
        if (hc == 1.0) return wb_beta_;
        return std::numeric_limits<double>::infinity();
      }
      return wb_beta_ * hc * std::pow(x, hc - 1.0) * std::exp(-wb_beta_ * std::pow(x, hc));
    }
  }
  return 0.0;
}

double FadingModel::quantile(double q) const {
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::domain_error("quantile: q must lie in [0, 1)");
  }
  if (q == 0.0) return 0.0;
  double hi = 1.0;
  int grow = 0;
  while (cdf(hi) <= q) {
    hi *= 2.0;
    if (++grow > 200) throw std::domain_error("quantile: bracket expansion failed");
  }
  double lo = 0.0;
  double mid = 0.0;
  for (int it = 0; it < kQuantileMaxIter; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = cdf(mid);
    if (std::abs(f - q) <= kQuantileFTol) return mid;
    (f < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double FadingModel::sample(rng::Stream& stream) const {
  switch (family_) {
    case Family::rayleigh:
      return -std::log(stream.next_unit());
    case Family::rician: {
      const double x = ric_nu_ + ric_sigma_ * stream.next_normal();
      const double y = ric_sigma_ * stream.next_normal();
      const double g = x * x + y * y;
      return g > 0.0 ? g : std::numeric_limits<double>::min();
    }
    case Family::nakagami:
      return gamma_sample(shape_, stream) / shape_;
    case Family::weibull:
      return std::pow(-std::log(stream.next_unit()) / wb_beta_, 1.0 / wb_halfc_);
  }
  return 0.0;
}

TailRatio tail_ratio(const FadingModel& model, const ClassCTail& tail, double x) {
  if (!(x > 0.0)) throw std::domain_error("tail_ratio: x must be positive");
  const double surv = model.survival(x);
  const double env = tail.envelope(x);
  if (surv == 0.0 || env == 0.0) return {1.0, true};
  return {surv / env, false};
}

double origin_ratio(const FadingModel& model, const ClassCTail& tail, double x) {
  if (!(x > 0.0)) throw std::domain_error("origin_ratio: x must be positive");
  return model.cdf(x) / (tail.tail_eta * std::pow(x, tail.gamma));
}

}  // namespace dtpil

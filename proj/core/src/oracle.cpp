#include "dtpil/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dtpil/errors.hpp"
#include "dtpil/policy.hpp"
#include "dtpil/rng.hpp"

namespace dtpil {

namespace {

constexpr double kStallImprovement = 1e-12;
constexpr int kStallWindow = 50;
constexpr int kIterCap = 200000;
constexpr double kStartAgreement = 1e-6;

struct Instance {
  std::vector<double> h, g, m;
  double pb = 0.0, qb = 0.0, p = 0.0;
  std::size_t size() const { return h.size(); }
};

Instance make_instance(const DiscreteJointState& d, const ConstraintBudget& budget, double p) {
  if (!(budget.per_user_power > 0.0) || !(budget.per_user_interference > 0.0)) {
    throw std::invalid_argument("oracle: budgets must be positive");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("oracle: scheduling probability must lie in (0, 1]");
  }
  Instance inst;
  inst.pb = budget.per_user_power;
  inst.qb = budget.per_user_interference;
  inst.p = p;
  inst.h.reserve(d.states.size());
  for (const auto& s : d.states) {
    inst.h.push_back(s.h);
    inst.g.push_back(s.g);
    inst.m.push_back(s.mass);
  }
  return inst;
}

// w log(1 + h q / w), continuously extended by 0 at w = 0.
double rate_term(double h, double q, double w) {
  if (w <= 0.0 || q <= 0.0) return 0.0;
  const double ratio = h * q / w;
  if (ratio > 1e15) return w * (std::log(h * q) - std::log(w));
  return w * std::log1p(ratio);
}

double objective_of(const Instance& inst, const std::vector<double>& q,
                    const std::vector<double>& w) {
  double obj = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    obj += inst.m[s] * rate_term(inst.h[s], q[s], w[s]);
  }
  return obj;
}

// Projection of w onto {0 <= w <= 1, sum m w = p} by bisection on the shift.
void project_weights(std::vector<double>& w, const std::vector<double>& m, double p) {
  const std::size_t n = w.size();
  double lo = 1e300, hi = -1e300;
  for (std::size_t s = 0; s < n; ++s) {
    lo = std::min(lo, (w[s] - 1.0) / m[s]);
    hi = std::max(hi, w[s] / m[s]);
  }
  auto mass_at = [&](double nu) {
    double mass = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      mass += m[s] * std::clamp(w[s] - nu * m[s], 0.0, 1.0);
    }
    return mass;
  };
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass_at(mid) > p ? lo : hi) = mid;
  }
  const double nu = 0.5 * (lo + hi);
  for (std::size_t s = 0; s < n; ++s) {
    w[s] = std::clamp(w[s] - nu * m[s], 0.0, 1.0);
  }
}

// q(nu1, nu2) = (v - nu1 c1 - nu2 c2)^+ and its weighted sums.
double weighted_sum(const std::vector<double>& v, const std::vector<double>& c1,
                    const std::vector<double>& c2, double nu1, double nu2,
                    const std::vector<double>& weight) {
  double sum = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    const double q = v[s] - nu1 * c1[s] - nu2 * c2[s];
    if (q > 0.0) sum += weight[s] * q;
  }
  return sum;
}

// Solve nu1 >= 0 with sum c1 (v - nu1 c1 - nu2 c2)^+ = B1 (0 if already below).
double solve_shift(const std::vector<double>& v, const std::vector<double>& c1,
                   const std::vector<double>& c2, double nu2, double target) {
  if (weighted_sum(v, c1, c2, 0.0, nu2, c1) <= target) return 0.0;
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (weighted_sum(v, c1, c2, hi, nu2, c1) > target) {
    lo = hi;
    hi *= 4.0;
    if (++grow > 400) break;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (weighted_sum(v, c1, c2, mid, nu2, c1) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Euclidean projection of q onto {q >= 0, sum c1 q <= B1, sum c2 q <= B2}.
void project_power(std::vector<double>& q, const std::vector<double>& c1, double b1,
                   const std::vector<double>& c2, double b2) {
  for (auto& x : q) x = std::max(x, 0.0);
  const std::vector<double>& v = q;
  const bool ok1 = weighted_sum(v, c1, c2, 0.0, 0.0, c1) <= b1;
  const bool ok2 = weighted_sum(v, c1, c2, 0.0, 0.0, c2) <= b2;
  if (ok1 && ok2) return;

  // Try each constraint alone first (the other may stay slack).
  if (!ok1) {
    const double nu1 = solve_shift(v, c1, c2, 0.0, b1);
    if (weighted_sum(v, c1, c2, nu1, 0.0, c2) <= b2 * (1.0 + 1e-12)) {
      for (std::size_t s = 0; s < q.size(); ++s) {
        q[s] = std::max(v[s] - nu1 * c1[s], 0.0);
      }
      return;
    }
  }
  {
    const double nu2 = solve_shift(v, c2, c1, 0.0, b2);  // roles swapped
    if (weighted_sum(v, c2, c1, nu2, 0.0, c1) <= b1 * (1.0 + 1e-12)) {
      for (std::size_t s = 0; s < q.size(); ++s) {
        q[s] = std::max(v[s] - nu2 * c2[s], 0.0);
      }
      return;
    }
  }

  // Both active: outer bisection on the interference shift, inner exact
  // power shift; the interference sum is monotone in the outer shift.
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while (true) {
    const double nu1 = solve_shift(v, c1, c2, hi, b1);
    if (weighted_sum(v, c1, c2, nu1, hi, c2) <= b2) break;
    lo = hi;
    hi *= 4.0;
    if (++grow > 400) break;
  }
  double nu1 = 0.0, nu2 = 0.0;
  for (int it = 0; it < 70; ++it) {
    nu2 = 0.5 * (lo + hi);
    nu1 = solve_shift(v, c1, c2, nu2, b1);
    (weighted_sum(v, c1, c2, nu1, nu2, c2) > b2 ? lo : hi) = nu2;
  }
  nu2 = hi;  // feasible side
  nu1 = solve_shift(v, c1, c2, nu2, b1);
  for (std::size_t s = 0; s < q.size(); ++s) {
    q[s] = std::max(v[s] - nu1 * c1[s] - nu2 * c2[s], 0.0);
  }
}

struct PgResult {
  std::vector<double> q, w;
  double objective = 0.0;
  int iterations = 0;
};

PgResult run_start(const Instance& inst, rng::Stream& stream) {
  const std::size_t n = inst.size();
  std::vector<double> mg(n);
  for (std::size_t s = 0; s < n; ++s) mg[s] = inst.m[s] * inst.g[s];

  std::vector<double> q(n), w(n);
  for (std::size_t s = 0; s < n; ++s) {
    w[s] = stream.next_unit();
    q[s] = stream.next_unit() * inst.pb / (inst.m[s] * double(n));
  }
  project_weights(w, inst.m, inst.p);
  project_power(q, inst.m, inst.pb, mg, inst.qb);
  for (std::size_t s = 0; s < n; ++s) {
    if (w[s] <= 0.0) q[s] = 0.0;
  }

  std::vector<double> gq(n), gw(n), qt(n), wt(n);
  double obj = objective_of(inst, q, w);
  int stall = 0;
  int iter = 0;
  for (; iter < kIterCap; ++iter) {
    for (std::size_t s = 0; s < n; ++s) {
      const double denom = w[s] + inst.h[s] * q[s];
      gq[s] = denom > 0.0 ? inst.m[s] * inst.h[s] * w[s] / denom : 0.0;
      if (w[s] > 0.0 && q[s] > 0.0) {
        const double ratio = inst.h[s] * q[s] / w[s];
        const double lg = ratio > 1e15 ? std::log(ratio) : std::log1p(ratio);
        gw[s] = inst.m[s] * (lg - ratio / (1.0 + ratio));
      } else {
        gw[s] = 0.0;
      }
    }
    double step = 1.0;
    double best = obj;
    bool improved = false;
    while (step >= 1e-18) {
      for (std::size_t s = 0; s < n; ++s) {
        qt[s] = q[s] + step * gq[s];
        wt[s] = w[s] + step * gw[s];
      }
      project_weights(wt, inst.m, inst.p);
      project_power(qt, inst.m, inst.pb, mg, inst.qb);
      for (std::size_t s = 0; s < n; ++s) {
        if (wt[s] <= 0.0) qt[s] = 0.0;
      }
      const double cand = objective_of(inst, qt, wt);
      if (cand > best) {
        best = cand;
        q.swap(qt);
        w.swap(wt);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    const double gain = best - obj;
    obj = best;
    if (!improved || gain < kStallImprovement) {
      if (++stall >= kStallWindow) break;
    } else {
      stall = 0;
    }
  }
  return {std::move(q), std::move(w), obj, iter};
}

// Least-squares fit of y_s = lambda + mu g_s over the power-active states,
// with mu clamped at 0 when the interference constraint is slack.
void recover_multipliers(const Instance& inst, const std::vector<double>& q,
                         const std::vector<double>& w, OracleSolution& out) {
  double interference = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) interference += inst.m[s] * inst.g[s] * q[s];
  const bool interference_tight = interference >= inst.qb * (1.0 - 1e-6);

  double sw = 0.0, sg = 0.0, sgg = 0.0, sy = 0.0, sgy = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    if (w[s] <= 1e-9 || q[s] <= 0.0) continue;
    const double y = inst.h[s] / (1.0 + inst.h[s] * q[s] / w[s]);
    sw += 1.0;
    sg += inst.g[s];
    sgg += inst.g[s] * inst.g[s];
    sy += y;
    sgy += inst.g[s] * y;
  }
  double lambda = 0.0, mu = 0.0;
  if (sw > 0.0) {
    const double det = sw * sgg - sg * sg;
    if (interference_tight && std::abs(det) > 1e-12 * std::max(1.0, sw * sgg)) {
      mu = (sw * sgy - sg * sy) / det;
      lambda = (sy - mu * sg) / sw;
      if (mu < 0.0) {
        mu = 0.0;
        lambda = sy / sw;
      }
    } else {
      lambda = sy / sw;
    }
  }
  out.lambda = std::max(lambda, 0.0);
  out.mu = std::max(mu, 0.0);

  // Scheduling multiplier from the fractional states; when w is fully
  // binary, take the midpoint of the bracketing G values.
  double eta_frac = 0.0;
  int n_frac = 0;
  double g_in = 1e300, g_out = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    const double x = inst.h[s] / (out.lambda + out.mu * inst.g[s]);
    const double gval = eta_from_threshold(x);
    if (w[s] > 1e-6 && w[s] < 1.0 - 1e-6) {
      eta_frac += gval;
      ++n_frac;
    } else if (w[s] >= 1.0 - 1e-6) {
      g_in = std::min(g_in, gval);
    } else {
      g_out = std::max(g_out, gval);
    }
  }
  if (n_frac > 0) {
    out.sched_eta = eta_frac / n_frac;
  } else if (g_in < 1e300) {
    out.sched_eta = 0.5 * (g_in + g_out);
  } else {
    out.sched_eta = g_out;
  }
}

}  // namespace

DiscreteJointState discretize(const FadingModel& model_h, const FadingModel& model_g,
                              int n_h_grid, int n_g_grid) {
  if (n_h_grid < 2 || n_g_grid < 2) {
    throw std::invalid_argument("discretize: grid sizes must be >= 2");
  }
  DiscreteJointState d;
  d.n_h_grid = n_h_grid;
  d.n_g_grid = n_g_grid;
  std::vector<double> hs(n_h_grid), gs(n_g_grid);
  for (int i = 0; i < n_h_grid; ++i) {
    hs[i] = model_h.quantile((i + 0.5) / n_h_grid);
  }
  for (int j = 0; j < n_g_grid; ++j) {
    gs[j] = model_g.quantile((j + 0.5) / n_g_grid);
  }
  const double mass = 1.0 / (double(n_h_grid) * double(n_g_grid));
  d.states.reserve(static_cast<std::size_t>(n_h_grid) * n_g_grid);
  for (int i = 0; i < n_h_grid; ++i) {
    for (int j = 0; j < n_g_grid; ++j) {
      d.states.push_back({hs[i], gs[j], mass});
    }
  }
  return d;
}

OracleSolution solve_relaxed(const DiscreteJointState& states, const ConstraintBudget& budget,
                             double p, int starts, std::uint64_t seed) {
  const Instance inst = make_instance(states, budget, p);
  if (starts < 1) throw std::invalid_argument("solve_relaxed: starts must be >= 1");

  PgResult best;
  double obj_lo = 1e300, obj_hi = -1e300;
  int total_iters = 0;
  for (int k = 0; k < starts; ++k) {
    rng::Stream stream(seed, static_cast<std::uint64_t>(k), 0);
    PgResult r = run_start(inst, stream);
    total_iters += r.iterations;
    obj_lo = std::min(obj_lo, r.objective);
    obj_hi = std::max(obj_hi, r.objective);
    if (k == 0 || r.objective > best.objective) best = std::move(r);
  }
  const double spread = (obj_hi - obj_lo) / std::max(std::abs(obj_hi), 1e-30);
  if (spread > kStartAgreement) {
    throw SolverError("solve_relaxed: starts disagree beyond tolerance (spread " +
                      std::to_string(spread) + ")");
  }

  OracleSolution out;
  out.q = std::move(best.q);
  out.w = std::move(best.w);
  out.objective = best.objective;
  out.start_spread = spread;
  out.iterations = total_iters;
  double power = 0.0, interference = 0.0, mass = 0.0;
  for (std::size_t s = 0; s < inst.size(); ++s) {
    power += inst.m[s] * out.q[s];
    interference += inst.m[s] * inst.g[s] * out.q[s];
    mass += inst.m[s] * out.w[s];
  }
  out.power_residual = power - inst.pb;
  out.interference_residual = interference - inst.qb;
  out.sched_residual = mass - inst.p;
  recover_multipliers(inst, out.q, out.w, out);
  return out;
}

double closed_form_objective(const DiscreteJointState& states, const ConstraintBudget& budget,
                             double p) {
  const Instance inst = make_instance(states, budget, p);
  const std::size_t n = inst.size();

  std::vector<std::size_t> order(n);
  struct Eval {
    double power = 0.0, interference = 0.0, objective = 0.0;
  };
  auto eval_at = [&](double lambda, double mu) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> x(n);
    for (std::size_t s = 0; s < n; ++s) x[s] = inst.h[s] / (lambda + mu * inst.g[s]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    Eval e;
    double cum = 0.0;
    for (const std::size_t s : order) {
      if (cum >= inst.p) break;
      const double w = std::min(1.0, (inst.p - cum) / inst.m[s]);
      cum += inst.m[s] * w;
      const double pw = waterfill(inst.h[s], inst.g[s], lambda, mu);
      const double q = w * pw;
      e.power += inst.m[s] * q;
      e.interference += inst.m[s] * inst.g[s] * q;
      if (x[s] > 1.0) e.objective += inst.m[s] * w * std::log(x[s]);
    }
    return e;
  };

  // Power constraint always binds; bisect lambda at fixed mu.
  auto solve_lambda = [&](double mu) {
    double lo = 1e-9, hi = 1.0;
    int grow = 0;
    while (eval_at(hi, mu).power > inst.pb) {
      lo = hi;
      hi *= 4.0;
      if (++grow > 300) throw SolverError("closed_form_objective: lambda bracket failed");
    }
    grow = 0;
    while (eval_at(lo, mu).power < inst.pb) {
      hi = lo;
      lo *= 0.25;
      if (++grow > 300) throw SolverError("closed_form_objective: lambda bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double res = eval_at(mid, mu).power - inst.pb;
      if (std::abs(res) <= 1e-12 * inst.pb) return mid;
      (res > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  double lambda = solve_lambda(0.0);
  Eval e = eval_at(lambda, 0.0);
  if (e.interference <= inst.qb * (1.0 + 1e-10)) {
    return e.objective;
  }

  double mu_lo = 0.0, mu_hi = 0.1;
  int grow = 0;
  while (true) {
    lambda = solve_lambda(mu_hi);
    if (eval_at(lambda, mu_hi).interference <= inst.qb) break;
    mu_lo = mu_hi;
    mu_hi *= 4.0;
    if (++grow > 300) throw SolverError("closed_form_objective: mu bracket failed");
  }
  double mu = mu_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (mid <= mu_lo || mid >= mu_hi) break;
    mu = mid;
    lambda = solve_lambda(mu);
    const double res = eval_at(lambda, mu).interference - inst.qb;
    if (std::abs(res) <= 1e-12 * inst.qb) break;
    (res > 0.0 ? mu_lo : mu_hi) = mu;
  }
  return eval_at(lambda, mu).objective;
}

}  // namespace dtpil

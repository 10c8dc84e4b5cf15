#pragma once

#include <cstdint>
#include <vector>

#include "dtpil/fading.hpp"
#include "dtpil/network.hpp"

namespace dtpil {

/// Discretized joint channel state: an equiprobable-quantile product grid
/// over (h, g) with uniform masses.
struct DiscreteJointState {
  struct State {
    double h = 0.0;
    double g = 0.0;
    double mass = 0.0;
  };
  std::vector<State> states;
  int n_h_grid = 0;
  int n_g_grid = 0;
};

/// Grid points at the (i + 1/2)/n quantiles of each marginal, product
/// masses 1/(n_h_grid * n_g_grid).
DiscreteJointState discretize(const FadingModel& model_h, const FadingModel& model_g,
                              int n_h_grid, int n_g_grid);

/// Solution of the relaxed problem on a discrete instance: per-state
/// effective power q = P w, scheduling weights w in [0,1], and multipliers
/// recovered from stationarity. sched_eta is the scheduling-constraint
/// multiplier (unrelated to the fading tail_eta constant).
struct OracleSolution {
  std::vector<double> q;
  std::vector<double> w;
  double objective = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double sched_eta = 0.0;
  double power_residual = 0.0;
  double interference_residual = 0.0;
  double sched_residual = 0.0;
  double start_spread = 0.0;  // relative objective spread across starts
  int iterations = 0;
};

/// Maximize sum_s m_s w_s log(1 + h_s q_s / w_s) subject to the power,
/// interference and scheduling-mass constraints, by projected-gradient
/// ascent with backtracking from `starts` random feasible points. All
/// starts must agree within 1e-6 relative or a SolverError is thrown.
OracleSolution solve_relaxed(const DiscreteJointState& states, const ConstraintBudget& budget,
                             double p, int starts = 20, std::uint64_t seed = 1);

/// Objective achieved by the closed-form policy on the same discrete
/// instance: water-filling power, top-ratio scheduling with a fractional
/// weight at the single boundary state (discrete X has atoms), and
/// multipliers searched so both budgets bind (mu = 0 if slack).
double closed_form_objective(const DiscreteJointState& states, const ConstraintBudget& budget,
                             double p);

}  // namespace dtpil

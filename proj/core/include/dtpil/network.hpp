#pragma once

#include <stdexcept>

namespace dtpil {

/// Secondary-network configuration: N users, linear-scale budgets on total
/// transmit power (P_ave) and interference at the primary base station
/// (Q_ave), and per-user scheduling probability p (defaults to 1/N).
struct NetworkConfig {
  int n_users = 1;
  double p_ave = 1.0;
  double q_ave = 1.0;
  double sched_prob = 0.0;  // 0 means "use the default 1/n_users"

  double p() const noexcept { return sched_prob > 0.0 ? sched_prob : 1.0 / n_users; }

  void validate() const {
    if (n_users < 1) throw std::invalid_argument("n_users must be >= 1");
    if (!(p_ave > 0.0)) throw std::invalid_argument("p_ave must be positive");
    if (!(q_ave > 0.0)) throw std::invalid_argument("q_ave must be positive");
    const double prob = p();
    if (!(prob > 0.0 && prob < 1.0)) {
      throw std::invalid_argument("scheduling probability must lie in (0, 1)");
    }
  }
};

/// Per-user budget pair (P_ave/N, Q_ave/N).
struct ConstraintBudget {
  double per_user_power = 0.0;
  double per_user_interference = 0.0;
};

inline ConstraintBudget per_user_budget(const NetworkConfig& cfg) {
  return {cfg.p_ave / cfg.n_users, cfg.q_ave / cfg.n_users};
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace dtpil

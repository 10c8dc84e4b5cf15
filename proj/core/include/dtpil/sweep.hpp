#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dtpil/fading.hpp"
#include "dtpil/network.hpp"

namespace dtpil {

struct SweepRow {
  int n_users = 0;
  double throughput = 0.0;
  double std_error = 0.0;
  double asymptote = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double threshold = 0.0;
  double p_an = 0.0;
  bool failed = false;
  std::string error;
};

/// Models and budgets shared by every row of a sweep; N and p = 1/N vary
/// per row.
struct SweepConfig {
  FadingModel model_h;
  FadingModel model_g;
  double p_ave = 0.0;  // linear
  double q_ave = 0.0;  // linear
};

/// Leading-order throughput (1/(e n_h)) log log N + (1/e) log p_ave, with
/// n_h = c/2 for Weibull channels to the secondary base station and 1 for
/// Rayleigh, Rician and Nakagami. Throws std::domain_error for n_users <= 2
/// where log log N is not positive.
double asymptote(int n_users, const FadingModel& model_h, double p_ave);

/// Pre-log tail exponent n_h of the STSB gain distribution.
double scaling_exponent(const FadingModel& model_h);

/// For each N: solve the duals, simulate, attach the asymptote. Rows come
/// back ordered by N; solver or simulation failures mark the row failed and
/// the sweep continues. Rows with N = 2 get asymptote = NaN. Rows with
/// N <= 200 run 10x the slot count (higher variance at small N).
std::vector<SweepRow> sweep(const SweepConfig& config, const std::vector<int>& n_list,
                            std::uint64_t slots, std::uint64_t seed, int threads = 0);

/// const_part = log(1/lambda) p_an, growth_part = throughput - const_part.
std::pair<double, double> rate_decomposition(const SweepRow& row, double p_ave);

/// CSV with the exact header n,throughput,stderr,asymptote,lambda,mu,threshold,p_an.
/// Doubles are written round-trip exact; failed rows carry nan fields.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_csv(std::istream& in);

}  // namespace dtpil

#include "dtpil/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dtpil/dual.hpp"
#include "dtpil/sim.hpp"

namespace dtpil {

namespace {

constexpr char kCsvHeader[] = "n,throughput,stderr,asymptote,lambda,mu,threshold,p_an";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep csv: bad numeric field '" + field + "' on line " +
                                std::to_string(line_no));
  }
}

}  // namespace

double scaling_exponent(const FadingModel& model_h) {
  return model_h.family() == Family::weibull ? 0.5 * model_h.shape() : 1.0;
}

double asymptote(int n_users, const FadingModel& model_h, double p_ave) {
  if (n_users <= 2) {
    throw std::domain_error("asymptote: requires n_users >= 3 (log log N must be positive)");
  }
  if (!(p_ave > 0.0)) throw std::domain_error("asymptote: p_ave must be positive");
  const double e = std::numbers::e;
  return std::log(std::log(double(n_users))) / (e * scaling_exponent(model_h)) +
         std::log(p_ave) / e;
}

std::vector<SweepRow> sweep(const SweepConfig& config, const std::vector<int>& n_list,
                            std::uint64_t slots, std::uint64_t seed, int threads) {
  if (slots < 1) throw std::invalid_argument("sweep: slots must be >= 1");
  std::vector<int> ns = n_list;
  std::sort(ns.begin(), ns.end());
  std::vector<SweepRow> rows;
  rows.reserve(ns.size());
  for (const int n : ns) {
    SweepRow row;
    row.n_users = n;
    try {
      NetworkConfig net{n, config.p_ave, config.q_ave, 0.0};
      net.validate();
      const DualSolution dual = solve_duals(net, config.model_h, config.model_g);
      const std::uint64_t row_slots = (n <= 200) ? slots * 10 : slots;
      const std::uint64_t row_seed = rng::mix_seed(seed, static_cast<std::uint64_t>(n));
      const SimStats stats = estimate(net, dual, config.model_h, config.model_g,
                                      row_slots, row_seed, threads);
      row.throughput = stats.throughput;
      row.std_error = stats.throughput_stderr;
      row.lambda = dual.lambda;
      row.mu = dual.mu;
      row.threshold = dual.threshold;
      row.p_an = stats.p_an;
      try {
        row.asymptote = asymptote(n, config.model_h, config.p_ave);
      } catch (const std::domain_error&) {
        row.asymptote = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const std::exception& ex) {
      row.failed = true;
      row.error = ex.what();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.throughput = row.std_error = row.asymptote = nan;
      row.lambda = row.mu = row.threshold = row.p_an = nan;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<double, double> rate_decomposition(const SweepRow& row, double p_ave) {
  (void)p_ave;  // the decomposition itself needs only the row
  const double const_part = std::log(1.0 / row.lambda) * row.p_an;
  return {const_part, row.throughput - const_part};
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n_users << ',' << fmt_double(r.throughput) << ',' << fmt_double(r.std_error)
        << ',' << fmt_double(r.asymptote) << ',' << fmt_double(r.lambda) << ','
        << fmt_double(r.mu) << ',' << fmt_double(r.threshold) << ',' << fmt_double(r.p_an)
        << '\n';
  }
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("sweep csv: missing or malformed header");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw std::invalid_argument("sweep csv: expected 8 fields on line " +
                                  std::to_string(line_no));
    }
    SweepRow r;
    r.n_users = static_cast<int>(parse_double(fields[0], line_no));
    r.throughput = parse_double(fields[1], line_no);
    r.std_error = parse_double(fields[2], line_no);
    r.asymptote = parse_double(fields[3], line_no);
    r.lambda = parse_double(fields[4], line_no);
    r.mu = parse_double(fields[5], line_no);
    r.threshold = parse_double(fields[6], line_no);
    r.p_an = parse_double(fields[7], line_no);
    r.failed = std::isnan(r.throughput);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace dtpil

#include "dtpil/sim.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dtpil {

namespace {

// Streaming per-slot scan; O(1) state regardless of N.
struct SlotScan {
  double x1 = 0.0, x2 = 0.0;  // top-2 ratios over all users
  double tx_x = 0.0;          // ratio of the most recent transmitter
  int ntx = 0;
  double power = 0.0, interference = 0.0;

  void add(double h, double g, const DualSolution& dual, double gate) {
    const double x = ratio_value(h, g, dual.lambda, dual.mu);
    if (x > x1) {
      x2 = x1;
      x1 = x;
    } else if (x > x2) {
      x2 = x;
    }
    if (x > gate) {
      ++ntx;
      tx_x = x;
      const double p = waterfill(h, g, dual.lambda, dual.mu);
      power += p;
      interference += g * p;
    }
  }
};

double slot_gate(const DualSolution& dual) { return std::max(dual.threshold, 1.0); }

SlotOutcome finish_collision(const SlotScan& s) {
  SlotOutcome out;
  out.rate = (s.ntx == 1) ? std::log(s.tx_x) : 0.0;
  out.num_transmitters = s.ntx;
  out.total_power = s.power;
  out.interference = s.interference;
  out.top_ratio = s.x1;
  out.second_ratio = s.x2;
  return out;
}

SlotOutcome finish_orderstat(const SlotScan& s, double gate) {
  SlotOutcome out;
  out.rate = (s.x1 > gate && s.x2 <= gate) ? std::log(s.x1) : 0.0;
  out.num_transmitters = s.ntx;
  out.total_power = s.power;
  out.interference = s.interference;
  out.top_ratio = s.x1;
  out.second_ratio = s.x2;
  return out;
}

SlotScan scan_slot(const NetworkConfig& config, const DualSolution& dual,
                   const FadingModel& model_h, const FadingModel& model_g,
                   std::uint64_t seed, std::uint64_t slot_index) {
  const double gate = slot_gate(dual);
  SlotScan scan;
  for (int i = 0; i < config.n_users; ++i) {
    rng::Stream stream(seed, slot_index, static_cast<std::uint32_t>(i));
    const double h = model_h.sample(stream);
    const double g = model_g.sample(stream);
    scan.add(h, g, dual, gate);
  }
  return scan;
}

struct Partials {
  double rate = 0.0, rate_sq = 0.0;
  double an = 0.0;
  double power = 0.0, power_sq = 0.0;
  double interference = 0.0, interference_sq = 0.0;

  Partials& operator+=(const Partials& o) {
    rate += o.rate;
    rate_sq += o.rate_sq;
    an += o.an;
    power += o.power;
    power_sq += o.power_sq;
    interference += o.interference;
    interference_sq += o.interference_sq;
    return *this;
  }
};

// Fixed-shape pairwise tree; the reduction order never depends on which
// worker produced which chunk.
Partials reduce_tree(const std::vector<Partials>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Partials left = reduce_tree(v, lo, mid);
  left += reduce_tree(v, mid, hi);
  return left;
}

constexpr std::uint64_t kChunkSlots = 1024;

template <bool OrderStat>
SimStats estimate_impl(const NetworkConfig& config, const DualSolution& dual,
                       const FadingModel& model_h, const FadingModel& model_g,
                       std::uint64_t slots, std::uint64_t seed, int threads) {
  config.validate();
  if (slots < 1) throw std::invalid_argument("estimate: slots must be >= 1");
  if constexpr (OrderStat) {
    if (config.n_users < 2) {
      throw std::invalid_argument("estimate_orderstat: requires N >= 2");
    }
  }
  const double gate = slot_gate(dual);
  const std::uint64_t n_chunks = (slots + kChunkSlots - 1) / kChunkSlots;
  std::vector<Partials> partials(n_chunks);

  auto run_chunk = [&](std::uint64_t chunk) {
    const std::uint64_t begin = chunk * kChunkSlots;
    const std::uint64_t end = std::min(begin + kChunkSlots, slots);
    Partials acc;
    for (std::uint64_t s = begin; s < end; ++s) {
      const SlotScan scan = scan_slot(config, dual, model_h, model_g, seed, s);
      const SlotOutcome out =
          OrderStat ? finish_orderstat(scan, gate) : finish_collision(scan);
      acc.rate += out.rate;
      acc.rate_sq += out.rate * out.rate;
      acc.an += (out.num_transmitters == 1) ? 1.0 : 0.0;
      acc.power += out.total_power;
      acc.power_sq += out.total_power * out.total_power;
      acc.interference += out.interference;
      acc.interference_sq += out.interference * out.interference;
    }
    partials[chunk] = acc;
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(n_threads), n_chunks));
  if (n_threads <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  const Partials sum = reduce_tree(partials, 0, n_chunks);
  const double n = static_cast<double>(slots);
  auto mean_stderr = [n](double s, double s_sq, double& mean, double& se) {
    mean = s / n;
    if (n > 1.5) {
      const double var = std::max(0.0, (s_sq - n * mean * mean) / (n - 1.0));
      se = std::sqrt(var / n);
    } else {
      se = 0.0;
    }
  };

  SimStats stats;
  stats.slots = slots;
  mean_stderr(sum.rate, sum.rate_sq, stats.throughput, stats.throughput_stderr);
  mean_stderr(sum.an, sum.an, stats.p_an, stats.p_an_stderr);  // indicator: x^2 = x
  mean_stderr(sum.power, sum.power_sq, stats.avg_power, stats.avg_power_stderr);
  mean_stderr(sum.interference, sum.interference_sq, stats.avg_interference,
              stats.avg_interference_stderr);
  return stats;
}

}  // namespace

SlotOutcome evaluate_slot(const DualSolution& dual, std::span<const ChannelDraw> draws) {
  const double gate = slot_gate(dual);
  SlotScan scan;
  for (const auto& d : draws) scan.add(d.h, d.g, dual, gate);
  return finish_collision(scan);
}

SlotOutcome evaluate_slot_orderstat(const DualSolution& dual,
                                    std::span<const ChannelDraw> draws) {
  const double gate = slot_gate(dual);
  SlotScan scan;
  for (const auto& d : draws) scan.add(d.h, d.g, dual, gate);
  return finish_orderstat(scan, gate);
}

SlotOutcome run_slot(const NetworkConfig& config, const DualSolution& dual,
                     const FadingModel& model_h, const FadingModel& model_g,
                     std::uint64_t seed, std::uint64_t slot_index) {
  config.validate();
  return finish_collision(scan_slot(config, dual, model_h, model_g, seed, slot_index));
}

SlotOutcome run_slot_orderstat(const NetworkConfig& config, const DualSolution& dual,
                               const FadingModel& model_h, const FadingModel& model_g,
                               std::uint64_t seed, std::uint64_t slot_index) {
  config.validate();
  return finish_orderstat(scan_slot(config, dual, model_h, model_g, seed, slot_index),
                          slot_gate(dual));
}

SimStats estimate(const NetworkConfig& config, const DualSolution& dual,
                  const FadingModel& model_h, const FadingModel& model_g,
                  std::uint64_t slots, std::uint64_t seed, int threads) {
  return estimate_impl<false>(config, dual, model_h, model_g, slots, seed, threads);
}

SimStats estimate_orderstat(const NetworkConfig& config, const DualSolution& dual,
                            const FadingModel& model_h, const FadingModel& model_g,
                            std::uint64_t slots, std::uint64_t seed, int threads) {
  return estimate_impl<true>(config, dual, model_h, model_g, slots, seed, threads);
}

}  // namespace dtpil

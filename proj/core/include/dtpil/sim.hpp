#pragma once

#include <cstdint>
#include <span>

#include "dtpil/fading.hpp"
#include "dtpil/network.hpp"
#include "dtpil/policy.hpp"

namespace dtpil {

struct ChannelDraw {
  double h = 0.0;
  double g = 0.0;
};

struct SlotOutcome {
  double rate = 0.0;  // nats; zero unless exactly one user transmits
  int num_transmitters = 0;
  double total_power = 0.0;
  double interference = 0.0;
  double top_ratio = 0.0;     // X_(1)
  double second_ratio = 0.0;  // X_(2); 0 when N = 1
};

struct SimStats {
  double throughput = 0.0;
  double throughput_stderr = 0.0;
  double p_an = 0.0;  // fraction of slots with exactly one transmitter
  double p_an_stderr = 0.0;
  double avg_power = 0.0;
  double avg_power_stderr = 0.0;
  double avg_interference = 0.0;
  double avg_interference_stderr = 0.0;
  std::uint64_t slots = 0;
};

/// One slot from explicit channel draws; a user transmits iff its ratio
/// X = h/(lambda + mu g) strictly exceeds max(threshold, 1). Rate comes
/// from the collision rule: log of the single transmitter's X, else 0.
SlotOutcome evaluate_slot(const DualSolution& dual, std::span<const ChannelDraw> draws);

/// Same draws, rate computed from the order statistics instead:
/// log(X_(1)) 1{X_(1) > max(t,1), X_(2) <= max(t,1)}. Must match
/// evaluate_slot bit for bit on shared draws.
SlotOutcome evaluate_slot_orderstat(const DualSolution& dual,
                                    std::span<const ChannelDraw> draws);

/// One simulated slot; user i draws from the (seed, slot_index, i) substream.
SlotOutcome run_slot(const NetworkConfig& config, const DualSolution& dual,
                     const FadingModel& model_h, const FadingModel& model_g,
                     std::uint64_t seed, std::uint64_t slot_index);

SlotOutcome run_slot_orderstat(const NetworkConfig& config, const DualSolution& dual,
                               const FadingModel& model_h, const FadingModel& model_g,
                               std::uint64_t seed, std::uint64_t slot_index);

/// Monte Carlo average over `slots` independent slots. Counter-based
/// per-slot substreams and a fixed pairwise reduction over fixed-size slot
/// chunks make the result bit-identical for any worker count.
/// threads = 0 picks std::thread::hardware_concurrency().
SimStats estimate(const NetworkConfig& config, const DualSolution& dual,
                  const FadingModel& model_h, const FadingModel& model_g,
                  std::uint64_t slots, std::uint64_t seed, int threads = 0);

/// As estimate(), but per-slot rates come from the order-statistic formula.
SimStats estimate_orderstat(const NetworkConfig& config, const DualSolution& dual,
                            const FadingModel& model_h, const FadingModel& model_g,
                            std::uint64_t slots, std::uint64_t seed, int threads = 0);

}  // namespace dtpil

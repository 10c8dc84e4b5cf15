#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dtpil::rng {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
/// Stateless: output depends only on (counter, key), which is what makes
/// per-(seed, slot, user) substreams reproducible across worker counts.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// One independent random stream per (seed, slot, user) triple.
///
/// The Philox key is derived from the seed, the counter encodes
/// (slot, user, block); consuming a variable number of values (e.g. a
/// rejection sampler) in one stream never perturbs any other stream.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t slot, std::uint32_t user) {
    std::uint64_t s = seed;
    const std::uint64_t k = splitmix64(s);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    base_ = {static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32), user, 0};
  }

  /// Plain sequential stream (slot 0, user 0) for non-slotted Monte Carlo.
  static Stream scalar(std::uint64_t seed) { return Stream(seed, 0, 0); }

  std::uint64_t next_u64() {
    if (pos_ == 2) refill();
    return buf_[pos_++];
  }

  /// Uniform strictly inside (0, 1); never returns 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  void refill() {
    auto ctr = base_;
    ctr[3] = block_++;
    const auto out = philox4x32(ctr, key_);
    buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
    buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> base_{};
  std::array<std::uint64_t, 2> buf_{};
  std::uint32_t block_ = 0;
  int pos_ = 2;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stable 64-bit mix of a seed and an integer tag (e.g. a sweep row's N),
/// used to decorrelate otherwise identically-keyed runs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  return splitmix64(s);
}

}  // namespace dtpil::rng

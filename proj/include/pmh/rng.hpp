#pragma once

// Philox4x32-10 (Salmon, Moraes, Dror, Shaw; SC'11) as a counter-based
// 64-bit generator. The 64-bit key is the master seed; the 128-bit counter
// holds (block index, stream id). Replicate r of an experiment draws from
// stream r, so results do not depend on scheduling or thread count.

#include <array>
#include <cstdint>
#include <limits>

namespace pmh {

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) {
      const Block counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
      buffer_ = generate(counter, key_);
      ++block_;
      lane_ = 0;
    }
    const auto lo = static_cast<std::uint64_t>(buffer_[2 * lane_]);
    const auto hi = static_cast<std::uint64_t>(buffer_[2 * lane_ + 1]);
    ++lane_;
    return lo | (hi << 32);
  }

  // Ten rounds on one counter block; the raw bijection, exposed for
  // known-answer tests.
  static Block generate(Block counter, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53U;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int lane_ = 2;
};

// Stream id for replicate r of sweep cell c (e.g. the index of theta_0).
inline std::uint64_t stream_id(std::uint64_t cell, std::uint64_t replicate) {
  return (cell << 32) ^ replicate;
}

// 53 random bits mapped to [0, 1).
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

template <class Engine>
bool bernoulli(Engine& engine, double p) {
  return uniform01(engine) < p;
}

}  // namespace pmh

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bbmsel {

/**
 * Philox4x32-10 counter-based generator.
 *
 * The key is the user seed; the 128-bit counter is (block, replica, lane),
 * so streams for distinct (replica, lane) pairs never overlap.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint32_t replica, std::uint32_t lane);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    if (pos_ == kBuffered) refill();
    return buf_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  double exponential(double rate);
  long poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint32_t replica() const { return replica_; }
  std::uint32_t lane() const { return lane_; }

 private:
  // Philox blocks generated per refill; each block yields two outputs.
  static constexpr int kBlocks = 8;
  static constexpr int kBuffered = 2 * kBlocks;

  void refill();

  std::uint64_t seed_;
  std::uint32_t replica_;
  std::uint32_t lane_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, kBuffered> buf_{};
  int pos_ = kBuffered;
};

Rng rng_stream(std::uint64_t seed, std::uint32_t replica, std::uint32_t lane);

/// Fixed lane assignments so that each consumer of randomness has its own stream.
namespace lanes {
inline constexpr std::uint32_t initial = 0;
inline constexpr std::uint32_t dynamics = 1;
inline constexpr std::uint32_t trials = 2;
inline constexpr std::uint32_t levy = 3;
inline constexpr std::uint32_t aux = 4;
}  // namespace lanes

}  // namespace bbmsel

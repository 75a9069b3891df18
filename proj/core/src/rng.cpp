#include "bbmsel/rng.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>

#include "bbmsel/errors.hpp"

namespace bbmsel {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint32_t replica, std::uint32_t lane)
    : seed_(seed), replica_(replica), lane_(lane) {}

// Integer-only, so every clone produces the same bits.
__attribute__((target_clones("avx2", "default"))) void Rng::refill() {
  // Lane-wise layout so the rounds vectorise across the blocks of one refill.
  std::uint32_t c0[kBlocks], c1[kBlocks], c2[kBlocks], c3[kBlocks];
  for (int b = 0; b < kBlocks; ++b) {
    const std::uint64_t blk = block_ + static_cast<std::uint64_t>(b);
    c0[b] = static_cast<std::uint32_t>(blk);
    c1[b] = static_cast<std::uint32_t>(blk >> 32);
    c2[b] = replica_;
    c3[b] = lane_;
  }
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int r = 0; r < 10; ++r) {
    for (int b = 0; b < kBlocks; ++b) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0[b];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2[b];
      const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[b] ^ k0;
      const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[b] ^ k1;
      c1[b] = static_cast<std::uint32_t>(p1);
      c3[b] = static_cast<std::uint32_t>(p0);
      c0[b] = n0;
      c2[b] = n2;
    }
    k0 += kW0;
    k1 += kW1;
  }
  for (int b = 0; b < kBlocks; ++b) {
    buf_[2 * b] = (static_cast<std::uint64_t>(c1[b]) << 32) | c0[b];
    buf_[2 * b + 1] = (static_cast<std::uint64_t>(c3[b]) << 32) | c2[b];
  }
  block_ += kBlocks;
  pos_ = 0;
}

double Rng::uniform_open() {
  return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

double Rng::exponential(double rate) {
  if (!(rate > 0)) throw DomainError("exponential rate must be positive");
  boost::random::exponential_distribution<double> dist(rate);
  return dist(*this);
}

long Rng::poisson(double mean) {
  if (!(mean >= 0) || !std::isfinite(mean)) throw DomainError("poisson mean must be finite and >= 0");
  if (mean == 0) return 0;
  boost::random::poisson_distribution<long, double> dist(mean);
  return dist(*this);
}

Rng rng_stream(std::uint64_t seed, std::uint32_t replica, std::uint32_t lane) {
  return Rng(seed, replica, lane);
}

}  // namespace bbmsel

#include "mimosd/rng.hpp"

#include <cmath>

namespace mimosd {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) >> 64);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> x = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t hi0 = mulhi64(kMul0, x[0]);
    const std::uint64_t lo0 = kMul0 * x[0];
    const std::uint64_t hi1 = mulhi64(kMul1, x[2]);
    const std::uint64_t lo1 = kMul1 * x[2];
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t sub0, std::uint64_t sub1, std::uint64_t sub2)
    : key_{seed, stream},
      counter_{0, sub0, sub1, sub2},
      buffer_pos_(4),
      cached_normal_(0.0),
      has_cached_normal_(false) {}

void CounterRng::refill() {
  buffer_ = philox4x64(counter_, key_);
  // 256-bit counter increment; the carry only matters after 2^64 blocks per
  // substream but keeping it exact matches the reference generator.
  if (++counter_[0] == 0) {
    if (++counter_[1] == 0) {
      if (++counter_[2] == 0) {
        ++counter_[3];
      }
    }
  }
  buffer_pos_ = 0;
}

std::uint64_t CounterRng::next_u64() {
  if (buffer_pos_ >= 4) {
    refill();
  }
  return buffer_[buffer_pos_++];
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double angle = 2.0 * M_PI * uniform();
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::complex<double> CounterRng::complex_normal(double stddev_per_dim) {
  const double re = normal() * stddev_per_dim;
  const double im = normal() * stddev_per_dim;
  return {re, im};
}

}  // namespace mimosd

#ifndef MIMOSD_RNG_HPP
#define MIMOSD_RNG_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace mimosd {

// Raw Philox4x64-10 block function. Exposed so tests can check it against
// reference outputs (numpy.random.Philox uses the same variant).
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Counter-based generator addressed by (seed, stream, three substream words).
// Streams with distinct coordinates are statistically independent, and a
// stream's output depends only on its coordinates, never on call order
// elsewhere. That makes parallel and serial runs produce identical draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream,
             std::uint64_t sub0 = 0, std::uint64_t sub1 = 0, std::uint64_t sub2 = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal();

  // Circularly symmetric complex Gaussian with the given per-dimension
  // standard deviation.
  std::complex<double> complex_normal(double stddev_per_dim);

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_;
  int buffer_pos_;
  double cached_normal_;
  bool has_cached_normal_;
};

// Stream identifiers used by the simulation pipeline. Keeping them in one
// place guarantees two purposes never collide on the same substream.
namespace stream {
inline constexpr std::uint64_t kInfoBits = 1;
inline constexpr std::uint64_t kChannel = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kInterleaver = 4;
inline constexpr std::uint64_t kTest = 100;
}  // namespace stream

}  // namespace mimosd

#endif

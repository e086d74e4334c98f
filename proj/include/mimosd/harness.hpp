#ifndef MIMOSD_HARNESS_HPP
#define MIMOSD_HARNESS_HPP

#include <cstdint>
#include <vector>

#include "mimosd/config.hpp"
#include "mimosd/fec.hpp"

namespace mimosd {

// One coded block's worth of measurements. chain and snr_index order the
// records; the CSV emitter drops them. frames is the number of coded blocks
// aggregated into the row (always 1 here).
struct MetricsRecord {
  double snr_db = 0.0;
  double ter = 0.0;
  double mu = 0.0;
  std::size_t n_est = 0;
  ClipMode clip_mode = ClipMode::kAdaptive;
  double fixed_clip = 0.0;
  std::uint64_t block_index = 0;
  double l_cl = 0.0;
  double ber_measured = 0.0;
  double ber_estimated = 0.0;
  double avg_visited_nodes = 0.0;
  std::uint64_t frames = 1;

  std::size_t snr_index = 0;
  std::uint64_t chain = 0;
  std::uint64_t bit_errors = 0;
};

// Encode, interleave, modulate, fade, detect at the given clip level, decode,
// measure. Deterministic in (config.seed, snr_index, chain, block_index)
// regardless of call order, which keeps threaded runs reproducible.
MetricsRecord run_block(const SimConfig& config, const Interleaver& interleaver,
                        std::size_t snr_index, std::uint64_t chain, std::uint64_t block_index,
                        double clip_level);

// One tracking chain: `frames` consecutive blocks. In adaptive mode each
// block is detected at the level set by the previous block's BER estimate.
std::vector<MetricsRecord> run_chain(const SimConfig& config, const Interleaver& interleaver,
                                     std::size_t snr_index, std::uint64_t chain);

// All SNR points, all chains, optional error-count stopping rule, optional
// worker threads. Records come back sorted by (snr point, chain, block) and
// are byte-for-byte independent of the thread count.
std::vector<MetricsRecord> run_experiment(const SimConfig& config);

// Number of channel uses one coded block occupies.
std::size_t uses_per_block(const SimConfig& config);

}  // namespace mimosd

#endif

#ifndef MIMOSD_ADAPT_HPP
#define MIMOSD_ADAPT_HPP

#include <cstddef>
#include <stdexcept>

#include "mimosd/fec.hpp"

namespace mimosd {

struct adapt_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Controller state for one tracking chain. clip_level always stays inside
// [min_clip, clip_ceiling]; clip_ceiling is the level whose per-bit error
// probability equals the target rate: ln(1/ter - 1).
struct ClippingState {
  double clip_level;
  double clip_ceiling;
  double target_ber;
  double step_size;
  double min_clip;
  double last_estimate;
};

struct BerEstimate {
  double p_hat;
  std::size_t n_used;
  std::size_t n_total;
};

// Hard-decision error probability of a bit with the given a-posteriori LLR
// magnitude: 1 / (1 + e^{|L|}).
double bit_error_prob(double llr_magnitude);

// Block BER estimate from the n smallest LLR magnitudes (ties broken by bit
// index), normalized by the full block length.
BerEstimate estimate_block_ber(const LlrVector& info_llrs, std::size_t n);

ClippingState init_clipping(double ter, double mu, double min_clip);

// One controller step: the candidate moves by step_size times the log-domain
// error between target and estimate, then is clamped into
// [min_clip, clip_ceiling].
ClippingState update_clipping(const ClippingState& state, double p_hat_prev);

}  // namespace mimosd

#endif

#include "mimosd/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mimosd {

double bit_error_prob(double llr_magnitude) {
  if (llr_magnitude < 0.0 || !std::isfinite(llr_magnitude)) {
    throw adapt_error("bit_error_prob: magnitude must be finite and >= 0");
  }
  // exp(-m) form stays away from overflow for large magnitudes.
  const double e = std::exp(-llr_magnitude);
  return e / (1.0 + e);
}

BerEstimate estimate_block_ber(const LlrVector& info_llrs, std::size_t n) {
  const std::size_t total = info_llrs.size();
  if (n < 1 || n > total) {
    throw adapt_error("estimate_block_ber: n out of range");
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  auto weaker = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(info_llrs[a]);
    const double mb = std::abs(info_llrs[b]);
    if (ma != mb) return ma < mb;
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + (n - 1), order.end(), weaker);

  double sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    sum += bit_error_prob(std::abs(info_llrs[order[r]]));
  }
  return {sum / static_cast<double>(total), n, total};
}

ClippingState init_clipping(double ter, double mu, double min_clip) {
  if (!(ter > 0.0 && ter < 0.5)) {
    throw adapt_error("init_clipping: ter must lie in (0, 0.5)");
  }
  if (mu < 0.0) {
    throw adapt_error("init_clipping: mu must be >= 0");
  }
  if (!(min_clip > 0.0)) {
    throw adapt_error("init_clipping: min_clip must be > 0");
  }
  ClippingState state;
  state.clip_ceiling = std::log(1.0 / ter - 1.0);
  state.clip_level = state.clip_ceiling;
  state.target_ber = ter;
  state.step_size = mu;
  state.min_clip = min_clip;
  state.last_estimate = ter;
  return state;
}

ClippingState update_clipping(const ClippingState& state, double p_hat_prev) {
  if (!(p_hat_prev > 0.0) || !std::isfinite(p_hat_prev)) {
    throw adapt_error("update_clipping: estimate must be positive");
  }
  ClippingState next = state;
  const double candidate =
      state.clip_level - state.step_size * (std::log(state.target_ber) - std::log(p_hat_prev));
  next.clip_level = std::max(std::min(state.clip_ceiling, candidate), state.min_clip);
  next.last_estimate = p_hat_prev;
  return next;
}

}  // namespace mimosd

#include "mimosd/channel.hpp"

#include <cmath>

namespace mimosd {

namespace {
constexpr int kMaxRedraws = 100;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

ChannelRealization draw_channel(std::size_t m_r, std::size_t m_t, CounterRng& rng,
                                std::uint64_t use_index) {
  if (m_t < 1 || m_r < m_t) {
    throw dimension_error("draw_channel: need m_r >= m_t >= 1");
  }
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    ComplexMatrix h(m_r, m_t);
    for (std::size_t i = 0; i < m_r; ++i) {
      for (std::size_t j = 0; j < m_t; ++j) {
        h(i, j) = rng.complex_normal(kInvSqrt2);
      }
    }
    try {
      QrFactors qr = qr_decompose(h);
      return {std::move(h), std::move(qr), use_index};
    } catch (const rank_deficient_error&) {
      // degenerate draw, try again
    }
  }
  throw rank_deficient_error("draw_channel: persistent rank-deficient draws");
}

NoiseModel sigma2_for_snr(double snr_db, std::size_t m_t) {
  if (m_t < 1) {
    throw dimension_error("sigma2_for_snr: m_t must be >= 1");
  }
  const double snr_lin = std::pow(10.0, snr_db / 10.0);
  const double complex_var = static_cast<double>(m_t) / snr_lin;  // 2*sigma2
  return {complex_var / 2.0, snr_db};
}

std::vector<cplx> transmit(const std::vector<cplx>& s, const ChannelRealization& ch,
                           const NoiseModel& noise, CounterRng& rng) {
  if (s.size() != ch.h.cols()) {
    throw dimension_error("transmit: symbol count must equal transmit antennas");
  }
  std::vector<cplx> y = mat_vec(ch.h, s);
  const double stddev = std::sqrt(noise.sigma2);
  for (cplx& v : y) {
    v += rng.complex_normal(stddev);
  }
  return y;
}

}  // namespace mimosd

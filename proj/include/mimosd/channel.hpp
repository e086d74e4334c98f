#ifndef MIMOSD_CHANNEL_HPP
#define MIMOSD_CHANNEL_HPP

#include <cstdint>

#include "mimosd/linalg.hpp"
#include "mimosd/rng.hpp"

namespace mimosd {

// One flat-fading realization with its QR factors attached.
struct ChannelRealization {
  ComplexMatrix h;
  QrFactors qr;
  std::uint64_t use_index;
};

// sigma2 is the per-real-dimension noise variance, so each complex noise
// sample has variance 2*sigma2.
struct NoiseModel {
  double sigma2;
  double snr_db;
};

// i.i.d. CN(0,1) entries (variance 0.5 per real dimension). A rank-deficient
// draw is redrawn internally; a persistent failure throws.
ChannelRealization draw_channel(std::size_t m_r, std::size_t m_t, CounterRng& rng,
                                std::uint64_t use_index = 0);

// SNR is defined as average received signal power per receive antenna over
// the complex noise power: SNR_lin = m_t * E_s / (2*sigma2) with E_s = 1.
NoiseModel sigma2_for_snr(double snr_db, std::size_t m_t);

// y = h*s + n with i.i.d. complex Gaussian noise of variance 2*sigma2.
std::vector<cplx> transmit(const std::vector<cplx>& s, const ChannelRealization& ch,
                           const NoiseModel& noise, CounterRng& rng);

}  // namespace mimosd

#endif

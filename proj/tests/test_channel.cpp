#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mimosd/channel.hpp"

using namespace mimosd;

TEST_CASE("noise calibration worked values") {
  // SNR_lin = m_t / (2 sigma2): four transmit antennas at 0 dB give a
  // complex noise power of 4.
  CHECK(2.0 * sigma2_for_snr(0.0, 4).sigma2 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(2.0 * sigma2_for_snr(10.0, 4).sigma2 == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(2.0 * sigma2_for_snr(14.0, 4).sigma2 == doctest::Approx(0.1593).epsilon(2e-3));
  CHECK(2.0 * sigma2_for_snr(14.0, 4).sigma2 ==
        doctest::Approx(4.0 * std::pow(10.0, -1.4)).epsilon(1e-14));
  CHECK(2.0 * sigma2_for_snr(0.0, 1).sigma2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sigma2_for_snr(3.0, 4).snr_db == 3.0);
}

TEST_CASE("channel entries are unit-variance complex gaussians") {
  CounterRng rng(21, stream::kTest);
  const int draws = 4000;  // 4x4 entries each -> 64000 samples
  double sum_re = 0.0, sum_im = 0.0, sum_sq = 0.0;
  int count = 0;
  for (int d = 0; d < draws; ++d) {
    const ChannelRealization ch = draw_channel(4, 4, rng, static_cast<std::uint64_t>(d));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        sum_re += ch.h(i, j).real();
        sum_im += ch.h(i, j).imag();
        sum_sq += std::norm(ch.h(i, j));
        ++count;
      }
  }
  CHECK(sum_re / count == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(sum_im / count == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(sum_sq / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("qr factors are attached and consistent") {
  CounterRng rng(22, stream::kTest);
  const ChannelRealization ch = draw_channel(4, 4, rng, 5);
  CHECK(ch.use_index == 5);
  REQUIRE(ch.qr.q.rows() == 4);
  REQUIRE(ch.qr.r.rows() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += ch.qr.q(i, k) * ch.qr.r(k, j);
      CHECK(std::abs(acc - ch.h(i, j)) < 1e-12);
    }
}

TEST_CASE("transmit adds calibrated noise") {
  CounterRng ch_rng(23, stream::kTest);
  const ChannelRealization ch = draw_channel(2, 2, ch_rng, 0);
  const NoiseModel noise = sigma2_for_snr(6.0, 2);

  // with a zero input the output is pure noise; estimate its power
  const std::vector<cplx> zero(2, cplx(0.0, 0.0));
  CounterRng n_rng(24, stream::kTest);
  double power = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    const auto y = transmit(zero, ch, noise, n_rng);
    for (const cplx& v : y) power += std::norm(v);
  }
  power /= 2 * reps;
  CHECK(power == doctest::Approx(2.0 * noise.sigma2).epsilon(0.03));
}

TEST_CASE("noiseless limit reproduces h*s") {
  CounterRng ch_rng(25, stream::kTest);
  const ChannelRealization ch = draw_channel(3, 3, ch_rng, 0);
  const NoiseModel nearly_clean = sigma2_for_snr(300.0, 3);
  const std::vector<cplx> s = {cplx(1.0, 0.0), cplx(0.0, -1.0), cplx(-1.0, 1.0)};
  CounterRng n_rng(26, stream::kTest);
  const auto y = transmit(s, ch, nearly_clean, n_rng);
  const auto hs = mat_vec(ch.h, s);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(y[i] - hs[i]) < 1e-9);
}

TEST_CASE("rotation by q preserves noise statistics") {
  // ||q^H y|| == ||y|| for square channels, so detection metrics are
  // unchanged by the preprocessing.
  CounterRng rng(27, stream::kTest);
  const ChannelRealization ch = draw_channel(4, 4, rng, 0);
  CounterRng n_rng(28, stream::kTest);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<cplx> y(4);
    for (auto& v : y) v = n_rng.complex_normal(1.0);
    const auto yr = rotate_received(ch.qr.q, y);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      a += std::norm(y[i]);
      b += std::norm(yr[i]);
    }
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("draws are reproducible from coordinates") {
  CounterRng a(29, stream::kChannel, 3, 7, 9);
  CounterRng b(29, stream::kChannel, 3, 7, 9);
  const ChannelRealization ca = draw_channel(4, 4, a, 0);
  const ChannelRealization cb = draw_channel(4, 4, b, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(ca.h(i, j) == cb.h(i, j));
}

TEST_CASE("dimension validation") {
  CounterRng rng(30, stream::kTest);
  const ChannelRealization ch = draw_channel(2, 2, rng, 0);
  const NoiseModel noise = sigma2_for_snr(10.0, 2);
  CounterRng n_rng(31, stream::kTest);
  CHECK_THROWS_AS(transmit(std::vector<cplx>(3), ch, noise, n_rng), dimension_error);
}

#include "mimosd/fec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mimosd/rng.hpp"

namespace mimosd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInputSaturation = 60.0;

// Jacobian logarithm: ln(e^a + e^b) evaluated exactly.
inline double jac(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

inline double saturate(double v) {
  return std::clamp(v, -kInputSaturation, kInputSaturation);
}

}  // namespace

const RscTrellis& rsc_trellis() {
  // State is (d1, d2) packed as d1*2 + d2, d1 the most recent register.
  // Feedback taps d1, d2; feedforward tap d2.
  static const RscTrellis t = [] {
    RscTrellis trellis{};
    for (int state = 0; state < 4; ++state) {
      const int d1 = (state >> 1) & 1;
      const int d2 = state & 1;
      for (int bit = 0; bit < 2; ++bit) {
        const int a = bit ^ d1 ^ d2;
        trellis.parity_out[state][bit] = static_cast<uint8_t>(a ^ d2);
        trellis.next_state[state][bit] = static_cast<uint8_t>((a << 1) | d1);
      }
    }
    return trellis;
  }();
  return t;
}

CodeBlock rsc_encode(const std::vector<uint8_t>& info_bits) {
  if (info_bits.empty()) {
    throw fec_error("rsc_encode: empty input");
  }
  const RscTrellis& trellis = rsc_trellis();
  CodeBlock block;
  block.info_bits = info_bits;
  block.coded_bits.resize(2 * info_bits.size());
  uint8_t state = 0;
  for (std::size_t k = 0; k < info_bits.size(); ++k) {
    const uint8_t bit = info_bits[k] & 1;
    block.coded_bits[2 * k] = bit;
    block.coded_bits[2 * k + 1] = trellis.parity_out[state][bit];
    state = trellis.next_state[state][bit];
  }
  return block;
}

Interleaver make_interleaver(std::size_t length, std::uint64_t seed) {
  Interleaver pi;
  pi.seed = seed;
  pi.permutation.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    pi.permutation[i] = i;
  }
  CounterRng rng(seed, stream::kInterleaver);
  for (std::size_t i = length; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(pi.permutation[i - 1], pi.permutation[j]);
  }
  return pi;
}

BcjrResult bcjr_decode(const LlrVector& a_priori) {
  if (a_priori.size() % 2 != 0 || a_priori.empty()) {
    throw fec_error("bcjr_decode: input length must be 2N");
  }
  const std::size_t n = a_priori.size() / 2;
  for (double v : a_priori) {
    if (!std::isfinite(v)) {
      throw fec_error("bcjr_decode: non-finite a-priori LLR");
    }
  }
  const RscTrellis& trellis = rsc_trellis();

  // Branch metric for (state, input bit) at step k:
  //   (c_sys * L_sys + c_par * L_par) / 2 with bipolar c in {-1,+1}.
  auto gamma = [&](std::size_t k, int state, int bit) {
    const double l_sys = saturate(a_priori[2 * k]);
    const double l_par = saturate(a_priori[2 * k + 1]);
    const double c_sys = bit ? 1.0 : -1.0;
    const double c_par = trellis.parity_out[state][bit] ? 1.0 : -1.0;
    return 0.5 * (c_sys * l_sys + c_par * l_par);
  };

  // Forward recursion from the zero state.
  std::vector<std::array<double, 4>> alpha(n + 1);
  alpha[0] = {0.0, kNegInf, kNegInf, kNegInf};
  for (std::size_t k = 0; k < n; ++k) {
    std::array<double, 4> next = {kNegInf, kNegInf, kNegInf, kNegInf};
    for (int state = 0; state < 4; ++state) {
      if (alpha[k][state] == kNegInf) continue;
      for (int bit = 0; bit < 2; ++bit) {
        const int ns = trellis.next_state[state][bit];
        next[ns] = jac(next[ns], alpha[k][state] + gamma(k, state, bit));
      }
    }
    // Normalize to keep the recursion bounded.
    const double m = std::max(std::max(next[0], next[1]), std::max(next[2], next[3]));
    if (m != kNegInf) {
      for (double& v : next) v -= m;
    }
    alpha[k + 1] = next;
  }

  // Backward recursion, uniform over final states (unterminated trellis).
  std::vector<std::array<double, 4>> beta(n + 1);
  beta[n] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = n; k-- > 0;) {
    std::array<double, 4> prev = {kNegInf, kNegInf, kNegInf, kNegInf};
    for (int state = 0; state < 4; ++state) {
      for (int bit = 0; bit < 2; ++bit) {
        const int ns = trellis.next_state[state][bit];
        prev[state] = jac(prev[state], beta[k + 1][ns] + gamma(k, state, bit));
      }
    }
    const double m = std::max(std::max(prev[0], prev[1]), std::max(prev[2], prev[3]));
    if (m != kNegInf) {
      for (double& v : prev) v -= m;
    }
    beta[k] = prev;
  }

  BcjrResult result;
  result.app_info.resize(n);
  result.app_coded.resize(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    double num_sys = kNegInf, den_sys = kNegInf;
    double num_par = kNegInf, den_par = kNegInf;
    for (int state = 0; state < 4; ++state) {
      if (alpha[k][state] == kNegInf) continue;
      for (int bit = 0; bit < 2; ++bit) {
        const int ns = trellis.next_state[state][bit];
        const double metric = alpha[k][state] + gamma(k, state, bit) + beta[k + 1][ns];
        if (bit) {
          num_sys = jac(num_sys, metric);
        } else {
          den_sys = jac(den_sys, metric);
        }
        if (trellis.parity_out[state][bit]) {
          num_par = jac(num_par, metric);
        } else {
          den_par = jac(den_par, metric);
        }
      }
    }
    result.app_info[k] = num_sys - den_sys;
    result.app_coded[2 * k] = result.app_info[k];
    result.app_coded[2 * k + 1] = num_par - den_par;
  }
  return result;
}

}  // namespace mimosd

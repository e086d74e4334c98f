#ifndef MIMOSD_FEC_HPP
#define MIMOSD_FEC_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mimosd {

using LlrVector = std::vector<double>;

struct fec_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rate-1/2 recursive systematic convolutional code, feedback 1+D+D^2,
// feedforward 1+D^2, started in the zero state and left unterminated.
// Coded bits are interlaced per info bit: systematic first, parity second.
struct CodeBlock {
  std::vector<uint8_t> info_bits;   // length N, logical 0/1
  std::vector<uint8_t> coded_bits;  // length 2N
};

CodeBlock rsc_encode(const std::vector<uint8_t>& info_bits);

// Seeded pseudo-random permutation over the coded-bit positions.
struct Interleaver {
  std::vector<std::size_t> permutation;
  std::uint64_t seed;
};

Interleaver make_interleaver(std::size_t length, std::uint64_t seed);

// interleaved[i] = input[permutation[i]]; deinterleave inverts this exactly.
template <typename T>
std::vector<T> interleave(const std::vector<T>& input, const Interleaver& pi) {
  if (input.size() != pi.permutation.size()) {
    throw fec_error("interleave: length mismatch");
  }
  std::vector<T> out(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = input[pi.permutation[i]];
  }
  return out;
}

template <typename T>
std::vector<T> deinterleave(const std::vector<T>& input, const Interleaver& pi) {
  if (input.size() != pi.permutation.size()) {
    throw fec_error("deinterleave: length mismatch");
  }
  std::vector<T> out(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[pi.permutation[i]] = input[i];
  }
  return out;
}

struct BcjrResult {
  LlrVector app_info;   // a-posteriori LLRs of the N info bits
  LlrVector app_coded;  // a-posteriori LLRs of the 2N coded bits
};

// Exact log-MAP BCJR over the unterminated trellis: forward recursion from
// the zero state, backward recursion from a uniform distribution. Input are
// a-priori LLRs of the 2N coded bits (positive means logical 1); inputs are
// saturated at +-60 before use.
BcjrResult bcjr_decode(const LlrVector& a_priori);

// Trellis description, exposed for structural tests and the MAP oracle.
struct RscTrellis {
  // next_state[state][input_bit], systematic/parity outputs as logical bits
  uint8_t next_state[4][2];
  uint8_t parity_out[4][2];
};

const RscTrellis& rsc_trellis();

}  // namespace mimosd

#endif

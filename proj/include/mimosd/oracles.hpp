#ifndef MIMOSD_ORACLES_HPP
#define MIMOSD_ORACLES_HPP

#include "mimosd/fec.hpp"
#include "mimosd/sphere_decoder.hpp"

namespace mimosd {

struct oracle_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact max-log LLRs by full enumeration over all |S|^{M_T} symbol vectors.
// Ignores the problem's clip level. Refuses instances above 2^16 vectors.
LlrVector exhaustive_maxlog_llrs(const DetectionProblem& problem);

struct ExhaustiveMapResult {
  LlrVector app_info;   // length K
  LlrVector app_coded;  // length 2K
};

// Exact a-posteriori LLRs by log-domain summation over all 2^K codewords of
// the rate-1/2 systematic recursive code. Deliberately shares no code with
// bcjr_decode; the encoder recursion is re-derived locally.
ExhaustiveMapResult exhaustive_map_decode(const LlrVector& a_priori, std::size_t k_info);

}  // namespace mimosd

#endif

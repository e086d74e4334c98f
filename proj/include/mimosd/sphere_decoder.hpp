#ifndef MIMOSD_SPHERE_DECODER_HPP
#define MIMOSD_SPHERE_DECODER_HPP

#include <cstdint>
#include <vector>

#include "mimosd/fec.hpp"
#include "mimosd/linalg.hpp"
#include "mimosd/modem.hpp"

namespace mimosd {

// One detection problem after QR preprocessing: r upper triangular with real
// positive diagonal, y the rotated observation. sigma2 is the per-dimension
// noise variance; clip is the LLR clipping level (may be infinite).
struct DetectionProblem {
  ComplexMatrix r;
  std::vector<cplx> y;
  const Constellation* constellation;
  double sigma2;
  double clip;
};

struct SoftDetectionResult {
  LlrVector llrs;              // per bit, antenna-major, first bit of a block first
  std::uint64_t visited_nodes; // nodes whose partial distance was computed
  double ml_metric;            // min over all symbol vectors of ||y - r s||^2
};

// Depth-first single tree search: one traversal maintains the ML hypothesis
// and one counter-hypothesis metric per bit. Children are enumerated in
// ascending partial-metric order (ties by constellation index), a subtree is
// pruned when its partial metric exceeds every metric its leaves could still
// improve, and finite clipping bounds the counter metrics at
// ml + 2*sigma2*clip so the tree shrinks as the clip level drops. The output
// equals the element-wise clamp of the exact max-log LLRs.
class SphereDecoder {
 public:
  SoftDetectionResult detect(const DetectionProblem& problem);

 private:
  void expand(int antenna, double parent_metric);
  void process_leaf(double metric);
  double bound_for_subtree(int fixed_from_bit) const;

  // problem view
  const ComplexMatrix* r_ = nullptr;
  const std::vector<cplx>* y_ = nullptr;
  const Constellation* constellation_ = nullptr;
  int num_antennas_ = 0;
  int bits_per_symbol_ = 0;
  int num_bits_ = 0;
  double metric_clip_window_ = 0.0;  // 2*sigma2*clip, may be +inf

  // search state
  std::vector<int> chosen_index_;     // per antenna
  std::vector<uint8_t> path_labels_;  // per bit, logical 0/1
  std::vector<uint8_t> ml_labels_;
  std::vector<double> counter_metrics_;
  double ml_metric_ = 0.0;
  bool have_ml_ = false;
  std::uint64_t visited_ = 0;

  struct Child {
    double increment;
    int index;
  };
  std::vector<std::vector<Child>> children_;  // per antenna scratch
};

// Convenience wrapper; allocates a decoder per call.
SoftDetectionResult detect(const DetectionProblem& problem);

}  // namespace mimosd

#endif

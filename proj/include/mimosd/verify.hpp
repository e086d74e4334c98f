#ifndef MIMOSD_VERIFY_HPP
#define MIMOSD_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mimosd/sphere_decoder.hpp"

namespace mimosd {

using DetectFn = std::function<SoftDetectionResult(const DetectionProblem&)>;

// Coordinates that fully determine one random detection instance.
struct InstanceSpec {
  std::uint64_t seed = 1;
  std::uint64_t index = 0;
  std::size_t num_antennas = 2;
  int order = 4;
  double snr_db = 10.0;
  double clip = std::numeric_limits<double>::infinity();
};

// Process-lifetime constellation for the given order, so DetectionProblem's
// raw pointer stays valid in value-returned instances.
const Constellation& shared_constellation(int order);

// Rayleigh channel, random payload, calibrated noise, QR preprocessing.
DetectionProblem make_random_instance(const InstanceSpec& spec);

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::int64_t first_failing_index = -1;  // -1 when clean
  double worst_error = 0.0;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool ok() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t detector_instances = 120;
  std::size_t decoder_instances = 40;
  std::size_t controller_instances = 200;
  DetectFn detector;  // empty = the library sphere decoder
};

// Cross-checks the fast implementations against the exhaustive references:
// unclipped detector output vs full-enumeration max-log LLRs, clipped output
// vs the clamped reference plus tree-size monotonicity in the clip level,
// decoder a-posteriori output vs full-codebook summation, and the clipping
// controller's envelope/fixed-point behaviour.
VerifyReport run_verification(const VerifyOptions& options);

std::string format_report(const VerifyReport& report);

}  // namespace mimosd

#endif

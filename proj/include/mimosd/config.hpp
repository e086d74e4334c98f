#ifndef MIMOSD_CONFIG_HPP
#define MIMOSD_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimosd {

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ClipMode { kAdaptive, kFixed, kOff };

// Full experiment description. Defaults give the reference setup: 4x4
// Rayleigh MIMO, Gray 16QAM, rate-1/2 code with 1152 info bits per block
// (144 channel uses), adaptive clipping toward a 1e-4 target.
struct SimConfig {
  std::size_t m_t = 4;
  std::size_t m_r = 4;
  int order = 16;
  std::size_t n_info = 1152;
  double ter = 1e-4;
  double mu = 0.1;
  std::size_t n_est = 50;
  std::size_t frames = 100;  // blocks per tracking chain
  std::size_t chains = 1;    // chains launched per round at each SNR point
  std::uint64_t seed = 1;
  ClipMode clip_mode = ClipMode::kAdaptive;
  double fixed_clip = std::numeric_limits<double>::infinity();
  double l_min = 0.05;
  std::size_t min_errors = 0;      // 0 disables the error-count stopping rule
  std::size_t max_frames = 10000;  // per-SNR frame cap when the rule is active
  std::size_t threads = 1;
  std::vector<double> snr_db = {14.0};
};

bool operator==(const SimConfig& a, const SimConfig& b);
inline bool operator!=(const SimConfig& a, const SimConfig& b) { return !(a == b); }

// "a,b,c" or "start:step:stop" (stop inclusive up to a half-step slack).
std::vector<double> parse_snr_spec(const std::string& text);

// "adaptive", "off", or "fixed=<level>".
void parse_clip_spec(const std::string& text, ClipMode& mode, double& level);
std::string render_clip_spec(ClipMode mode, double level);

// Applies one key=value pair (keys match the CLI long option names). Throws
// config_error naming the key on unknown keys or bad values.
void apply_key_value(SimConfig& config, const std::string& key, const std::string& value);

// key=value file, '#' comments and blank lines ignored. Recognized keys are
// applied onto `base`; unrecognized keys go into `extras` when given,
// otherwise they are an error.
SimConfig load_config_file(const std::string& path, const SimConfig& base,
                           std::map<std::string, std::string>* extras = nullptr);

// Throws config_error naming the offending field.
void validate_config(const SimConfig& config);

// key=value lines; load_config_file(render) reproduces the config exactly.
std::string render_config(const SimConfig& config);

}  // namespace mimosd

#endif

#include "mimosd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mimosd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double_field(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v{};
  const auto* end = t.data() + t.size();
  const auto res = std::from_chars(t.data(), end, v, std::chars_format::general);
  if (res.ec != std::errc{} || res.ptr != end)
    throw config_error(key + ": invalid number '" + text + "'");
  return v;
}

std::uint64_t parse_u64_field(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v{};
  const auto* end = t.data() + t.size();
  const auto res = std::from_chars(t.data(), end, v, 10);
  if (res.ec != std::errc{} || res.ptr != end)
    throw config_error(key + ": invalid unsigned integer '" + text + "'");
  return v;
}

// Shortest representation that parses back to the identical double.
std::string shortest_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool is_known_key(const std::string& key) {
  static const char* kKeys[] = {"mt", "mr", "order", "n-info", "ter", "mu", "n-est",
                                "frames", "chains", "seed", "clip", "l-min", "min-errors",
                                "max-frames", "threads", "snr"};
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

}  // namespace

bool operator==(const SimConfig& a, const SimConfig& b) {
  return a.m_t == b.m_t && a.m_r == b.m_r && a.order == b.order && a.n_info == b.n_info &&
         a.ter == b.ter && a.mu == b.mu && a.n_est == b.n_est && a.frames == b.frames &&
         a.chains == b.chains && a.seed == b.seed && a.clip_mode == b.clip_mode &&
         a.fixed_clip == b.fixed_clip && a.l_min == b.l_min && a.min_errors == b.min_errors &&
         a.max_frames == b.max_frames && a.threads == b.threads && a.snr_db == b.snr_db;
}

std::vector<double> parse_snr_spec(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw config_error("snr: empty specification");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::istringstream is(t);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c) ||
        c.find(':') != std::string::npos)
      throw config_error("snr: range must be start:step:stop");
    const double start = parse_double_field("snr", a);
    const double step = parse_double_field("snr", b);
    const double stop = parse_double_field("snr", c);
    if (step == 0.0 || !std::isfinite(step)) throw config_error("snr: step must be nonzero");
    if ((stop - start) * step < 0.0) throw config_error("snr: step points away from stop");
    const double slack = std::abs(step) * 1e-9;
    for (double v = start, k = 1.0;
         step > 0 ? v <= stop + slack : v >= stop - slack; v = start + k * step, k += 1.0)
      out.push_back(v);
  } else {
    std::istringstream is(t);
    std::string item;
    while (std::getline(is, item, ',')) {
      const std::string v = trim(item);
      if (v.empty()) throw config_error("snr: empty list entry");
      out.push_back(parse_double_field("snr", v));
    }
  }
  if (out.empty()) throw config_error("snr: no points");
  return out;
}

void parse_clip_spec(const std::string& text, ClipMode& mode, double& level) {
  const std::string t = trim(text);
  if (t == "adaptive") {
    mode = ClipMode::kAdaptive;
    level = std::numeric_limits<double>::infinity();
  } else if (t == "off") {
    mode = ClipMode::kOff;
    level = std::numeric_limits<double>::infinity();
  } else if (t.rfind("fixed=", 0) == 0) {
    mode = ClipMode::kFixed;
    level = parse_double_field("clip", t.substr(6));
    if (!(level > 0.0)) throw config_error("clip: fixed level must be positive");
  } else {
    throw config_error("clip: expected adaptive, off, or fixed=<level>");
  }
}

std::string render_clip_spec(ClipMode mode, double level) {
  switch (mode) {
    case ClipMode::kAdaptive: return "adaptive";
    case ClipMode::kOff: return "off";
    case ClipMode::kFixed: return "fixed=" + shortest_double(level);
  }
  return "adaptive";
}

void apply_key_value(SimConfig& config, const std::string& key, const std::string& value) {
  if (key == "mt") config.m_t = parse_u64_field(key, value);
  else if (key == "mr") config.m_r = parse_u64_field(key, value);
  else if (key == "order") config.order = static_cast<int>(parse_u64_field(key, value));
  else if (key == "n-info") config.n_info = parse_u64_field(key, value);
  else if (key == "ter") config.ter = parse_double_field(key, value);
  else if (key == "mu") config.mu = parse_double_field(key, value);
  else if (key == "n-est") config.n_est = parse_u64_field(key, value);
  else if (key == "frames") config.frames = parse_u64_field(key, value);
  else if (key == "chains") config.chains = parse_u64_field(key, value);
  else if (key == "seed") config.seed = parse_u64_field(key, value);
  else if (key == "clip") parse_clip_spec(value, config.clip_mode, config.fixed_clip);
  else if (key == "l-min") config.l_min = parse_double_field(key, value);
  else if (key == "min-errors") config.min_errors = parse_u64_field(key, value);
  else if (key == "max-frames") config.max_frames = parse_u64_field(key, value);
  else if (key == "threads") config.threads = parse_u64_field(key, value);
  else if (key == "snr") config.snr_db = parse_snr_spec(value);
  else throw config_error("unknown configuration key '" + key + "'");
}

SimConfig load_config_file(const std::string& path, const SimConfig& base,
                           std::map<std::string, std::string>* extras) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  SimConfig config = base;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) + " is not key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    // "fixed=<level>" puts a second '=' in clip values; the first '=' splits.
    if (key.empty()) throw config_error("config: line " + std::to_string(lineno) + " has no key");
    if (!is_known_key(key)) {
      if (extras != nullptr) {
        (*extras)[key] = value;
        continue;
      }
      throw config_error("unknown configuration key '" + key + "'");
    }
    apply_key_value(config, key, value);
  }
  return config;
}

void validate_config(const SimConfig& config) {
  if (config.m_t < 1) throw config_error("mt: need at least one transmit antenna");
  if (config.m_r < config.m_t)
    throw config_error("mr: receive antennas must be at least the transmit antennas");
  if (config.order != 2 && config.order != 4 && config.order != 16 && config.order != 64)
    throw config_error("order: supported constellation orders are 2, 4, 16, 64");
  const auto q = static_cast<std::size_t>(std::lround(std::log2(config.order)));
  if (config.n_info < 1) throw config_error("n-info: block must carry at least one bit");
  const std::size_t per_use = config.m_t * q;
  if ((2 * config.n_info) % per_use != 0)
    throw config_error("n-info: coded length 2N must divide into channel uses of " +
                       std::to_string(per_use) + " bits");
  if (!(config.ter > 0.0) || !(config.ter < 0.5))
    throw config_error("ter: target error rate must lie in (0, 0.5)");
  if (!(config.mu >= 0.0) || !std::isfinite(config.mu))
    throw config_error("mu: step size must be finite and non-negative");
  if (config.n_est < 1 || config.n_est > config.n_info)
    throw config_error("n-est: estimator depth must lie in [1, n-info]");
  if (config.frames < 1) throw config_error("frames: need at least one block per chain");
  if (config.chains < 1) throw config_error("chains: need at least one chain");
  if (!(config.l_min > 0.0)) throw config_error("l-min: clip floor must be positive");
  const double ceiling = std::log(1.0 / config.ter - 1.0);
  if (!(config.l_min < ceiling))
    throw config_error("l-min: clip floor must stay below the target's clip ceiling");
  if (config.clip_mode == ClipMode::kFixed && !(config.fixed_clip > 0.0))
    throw config_error("clip: fixed level must be positive");
  if (config.max_frames < 1) throw config_error("max-frames: must be positive");
  if (config.threads < 1) throw config_error("threads: need at least one worker");
  if (config.snr_db.empty()) throw config_error("snr: need at least one point");
  for (double v : config.snr_db)
    if (!std::isfinite(v)) throw config_error("snr: points must be finite");
}

std::string render_config(const SimConfig& config) {
  std::ostringstream os;
  os << "mt=" << config.m_t << "\n";
  os << "mr=" << config.m_r << "\n";
  os << "order=" << config.order << "\n";
  os << "n-info=" << config.n_info << "\n";
  os << "ter=" << shortest_double(config.ter) << "\n";
  os << "mu=" << shortest_double(config.mu) << "\n";
  os << "n-est=" << config.n_est << "\n";
  os << "frames=" << config.frames << "\n";
  os << "chains=" << config.chains << "\n";
  os << "seed=" << config.seed << "\n";
  os << "clip=" << render_clip_spec(config.clip_mode, config.fixed_clip) << "\n";
  os << "l-min=" << shortest_double(config.l_min) << "\n";
  os << "min-errors=" << config.min_errors << "\n";
  os << "max-frames=" << config.max_frames << "\n";
  os << "threads=" << config.threads << "\n";
  os << "snr=";
  for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
    if (i) os << ",";
    os << shortest_double(config.snr_db[i]);
  }
  os << "\n";
  return os.str();
}

}  // namespace mimosd

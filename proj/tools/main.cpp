#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "mimosd/csv.hpp"
#include "mimosd/harness.hpp"
#include "mimosd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

struct RawOption {
  const char* key;
  const char* flag;
  const char* help;
  std::string value;
  CLI::Option* opt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level MIMO simulator: soft-output sphere detection with adaptive LLR clipping"};

  RawOption raw[] = {
      {"snr", "--snr", "SNR points in dB: comma list or start:step:stop", {}, nullptr},
      {"ter", "--ter", "target error rate in (0, 0.5)", {}, nullptr},
      {"mu", "--mu", "controller step size (0 freezes the clip level)", {}, nullptr},
      {"n-est", "--n-est", "weakest-bit count used by the BER estimator", {}, nullptr},
      {"frames", "--frames", "blocks per tracking chain", {}, nullptr},
      {"chains", "--chains", "tracking chains per round at each SNR point", {}, nullptr},
      {"seed", "--seed", "RNG seed (falls back to SIM_SEED, then 1)", {}, nullptr},
      {"clip", "--clip", "adaptive, off, or fixed=<level>", {}, nullptr},
      {"mt", "--mt", "transmit antennas", {}, nullptr},
      {"mr", "--mr", "receive antennas", {}, nullptr},
      {"order", "--order", "constellation order: 2, 4, 16, 64", {}, nullptr},
      {"n-info", "--n-info", "info bits per block", {}, nullptr},
      {"l-min", "--l-min", "lower bound on the adaptive clip level", {}, nullptr},
      {"min-errors", "--min-errors", "steady-state bit errors to collect (0 = one round)", {}, nullptr},
      {"max-frames", "--max-frames", "frame cap per SNR point for the stopping rule", {}, nullptr},
      {"threads", "--threads", "worker threads", {}, nullptr},
  };
  for (auto& r : raw) r.opt = app.add_option(r.flag, r.value, r.help);

  std::string config_path;
  std::string out_path;
  bool verify = false;
  app.add_option("--config", config_path, "key=value configuration file; flags override it");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_flag("--verify", verify, "run the oracle cross-checks instead of an experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  mimosd::SimConfig config;
  try {
    if (!config_path.empty()) {
      std::map<std::string, std::string> extras;
      config = mimosd::load_config_file(config_path, config, &extras);
      for (const auto& [key, value] : extras) {
        if (key == "out") {
          if (out_path.empty()) out_path = value;
        } else {
          throw mimosd::config_error("unknown configuration key '" + key + "'");
        }
      }
    }
    for (const auto& r : raw) {
      if (std::string_view{r.key} != "seed" || r.opt->count() > 0) continue;
      if (const char* env = std::getenv("SIM_SEED"); env != nullptr && *env != '\0')
        mimosd::apply_key_value(config, "seed", env);
    }
    for (const auto& r : raw)
      if (r.opt->count() > 0) mimosd::apply_key_value(config, r.key, r.value);
    mimosd::validate_config(config);
  } catch (const mimosd::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (verify) {
    mimosd::VerifyOptions options;
    options.seed = config.seed;
    const mimosd::VerifyReport report = mimosd::run_verification(options);
    std::cout << mimosd::format_report(report);
    return report.ok() ? kExitOk : kExitVerify;
  }

  std::vector<mimosd::MetricsRecord> records;
  try {
    records = mimosd::run_experiment(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::out | std::ios::trunc);
    if (!file) {
      std::cerr << "I/O error: cannot open '" << out_path << "' for writing\n";
      return kExitIo;
    }
    os = &file;
  }
  mimosd::emit_csv(*os, records);
  os->flush();
  if (!*os) {
    std::cerr << "I/O error: failed writing output\n";
    return kExitIo;
  }
  if (records.empty()) {
    std::cerr << "no records produced\n";
    return kExitConfig;
  }
  return kExitOk;
}

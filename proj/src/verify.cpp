#include "mimosd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "mimosd/adapt.hpp"
#include "mimosd/channel.hpp"
#include "mimosd/oracles.hpp"

namespace mimosd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close(double a, double b, double tol) {
  if (a == b) return true;  // covers equal infinities
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

double clamp_mag(double v, double clip) { return std::clamp(v, -clip, clip); }

struct Mix {
  std::size_t m;
  int order;
};

// Small enough for the exhaustive reference, varied enough to exercise the
// tree shapes: scalar, tall QPSK, dense QAM.
constexpr Mix kMixes[] = {
    {1, 2}, {2, 4}, {2, 16}, {3, 4}, {4, 4}, {2, 64}, {3, 16}, {1, 64},
};
constexpr double kSnrGrid[] = {0.0, 6.0, 12.0, 18.0};

void record_failure(CheckResult& check, std::uint64_t index, double err) {
  if (check.failures == 0) check.first_failing_index = static_cast<std::int64_t>(index);
  ++check.failures;
  check.worst_error = std::max(check.worst_error, err);
}

}  // namespace

bool VerifyReport::ok() const {
  for (const auto& c : checks)
    if (c.failures != 0) return false;
  return true;
}

const Constellation& shared_constellation(int order) {
  static std::mutex mu;
  static Constellation cache[4];  // orders 2, 4, 16, 64
  int slot;
  switch (order) {
    case 2: slot = 0; break;
    case 4: slot = 1; break;
    case 16: slot = 2; break;
    case 64: slot = 3; break;
    default: throw modem_error("unsupported constellation order");
  }
  std::scoped_lock lock(mu);
  if (cache[slot].order == 0) cache[slot] = make_constellation(order);
  return cache[slot];
}

DetectionProblem make_random_instance(const InstanceSpec& spec) {
  const Constellation& c = shared_constellation(spec.order);
  const std::size_t m = spec.num_antennas;
  CounterRng rng(spec.seed, stream::kTest, spec.index,
                 static_cast<std::uint64_t>(m) * 256 + static_cast<std::uint64_t>(spec.order), 0);

  std::vector<BitBlock> blocks(m);
  for (auto& blk : blocks) {
    blk.resize(c.bits_per_symbol);
    for (auto& bit : blk) bit = rng.uniform() < 0.5 ? int8_t{-1} : int8_t{1};
  }
  const std::vector<cplx> s = assemble_vector(blocks, c, m);

  ChannelRealization ch = draw_channel(m, m, rng, spec.index);
  const NoiseModel noise = sigma2_for_snr(spec.snr_db, m);
  const std::vector<cplx> y = transmit(s, ch, noise, rng);

  DetectionProblem problem;
  problem.r = ch.qr.r;
  problem.y = rotate_received(ch.qr.q, y);
  problem.constellation = &c;
  problem.sigma2 = noise.sigma2;
  problem.clip = spec.clip;
  return problem;
}

VerifyReport run_verification(const VerifyOptions& options) {
  DetectFn detector = options.detector;
  if (!detector) detector = [](const DetectionProblem& p) { return detect(p); };

  VerifyReport report;
  report.seed = options.seed;

  {
    CheckResult check{"detector-exact-llr", 0, 0, -1, 0.0};
    for (std::size_t i = 0; i < options.detector_instances; ++i) {
      InstanceSpec spec;
      spec.seed = options.seed;
      spec.index = i;
      const Mix& mix = kMixes[i % std::size(kMixes)];
      spec.num_antennas = mix.m;
      spec.order = mix.order;
      spec.snr_db = kSnrGrid[(i / std::size(kMixes)) % std::size(kSnrGrid)];
      spec.clip = kInf;
      const DetectionProblem problem = make_random_instance(spec);

      const LlrVector ref = exhaustive_maxlog_llrs(problem);
      const SoftDetectionResult got = detector(problem);
      ++check.instances;
      double err = 0.0;
      bool bad = got.llrs.size() != ref.size();
      if (!bad) {
        for (std::size_t k = 0; k < ref.size(); ++k) {
          err = std::max(err, std::abs(got.llrs[k] - ref[k]));
          if (!close(got.llrs[k], ref[k], 1e-9)) bad = true;
        }
      }
      if (bad) record_failure(check, i, err);
      check.worst_error = std::max(check.worst_error, err);
    }
    report.checks.push_back(check);
  }

  {
    CheckResult check{"detector-clip-clamp", 0, 0, -1, 0.0};
    constexpr double kClips[] = {0.25, 1.0, 4.0, kInf};
    for (std::size_t i = 0; i < options.detector_instances; ++i) {
      InstanceSpec spec;
      spec.seed = options.seed;
      spec.index = i;
      const Mix& mix = kMixes[i % std::size(kMixes)];
      spec.num_antennas = mix.m;
      spec.order = mix.order;
      spec.snr_db = kSnrGrid[(i / std::size(kMixes)) % std::size(kSnrGrid)];
      spec.clip = kInf;
      const DetectionProblem base = make_random_instance(spec);
      const LlrVector ref = exhaustive_maxlog_llrs(base);

      ++check.instances;
      bool bad = false;
      double err = 0.0;
      std::uint64_t prev_nodes = 0;
      for (double clip : kClips) {
        DetectionProblem problem = base;
        problem.clip = clip;
        const SoftDetectionResult got = detector(problem);
        if (got.llrs.size() != ref.size()) {
          bad = true;
          break;
        }
        for (std::size_t k = 0; k < ref.size(); ++k) {
          const double want = clamp_mag(ref[k], clip);
          err = std::max(err, std::abs(got.llrs[k] - want));
          if (!close(got.llrs[k], want, 1e-9)) bad = true;
        }
        if (got.visited_nodes < prev_nodes) bad = true;  // tree must grow with the clip level
        prev_nodes = got.visited_nodes;
      }
      if (bad) record_failure(check, i, err);
      check.worst_error = std::max(check.worst_error, err);
    }
    report.checks.push_back(check);
  }

  {
    CheckResult check{"decoder-exact-app", 0, 0, -1, 0.0};
    constexpr std::size_t kInfoLen = 10;
    for (std::size_t i = 0; i < options.decoder_instances; ++i) {
      CounterRng rng(options.seed, stream::kTest, i, 0xB, 0);
      LlrVector a_priori(2 * kInfoLen);
      for (auto& v : a_priori) v = (rng.uniform() * 2.0 - 1.0) * 8.0;

      const ExhaustiveMapResult ref = exhaustive_map_decode(a_priori, kInfoLen);
      const BcjrResult got = bcjr_decode(a_priori);
      ++check.instances;
      bool bad = got.app_info.size() != ref.app_info.size() ||
                 got.app_coded.size() != ref.app_coded.size();
      double err = 0.0;
      if (!bad) {
        for (std::size_t k = 0; k < ref.app_info.size(); ++k) {
          err = std::max(err, std::abs(got.app_info[k] - ref.app_info[k]));
          if (!close(got.app_info[k], ref.app_info[k], 1e-9)) bad = true;
        }
        for (std::size_t k = 0; k < ref.app_coded.size(); ++k) {
          err = std::max(err, std::abs(got.app_coded[k] - ref.app_coded[k]));
          if (!close(got.app_coded[k], ref.app_coded[k], 1e-9)) bad = true;
        }
      }
      if (bad) record_failure(check, i, err);
      check.worst_error = std::max(check.worst_error, err);
    }
    report.checks.push_back(check);
  }

  {
    CheckResult check{"controller-envelope", 0, 0, -1, 0.0};
    constexpr double kTers[] = {1e-2, 1e-3, 3e-4, 1e-4, 1e-5};
    for (std::size_t i = 0; i < options.controller_instances; ++i) {
      CounterRng rng(options.seed, stream::kTest, i, 0xC, 0);
      const double ter = kTers[i % std::size(kTers)];
      const double mu = 0.01 + rng.uniform() * 0.49;
      ++check.instances;
      bool bad = false;
      try {
        ClippingState state = init_clipping(ter, mu, 0.05);
        if (state.clip_level != state.clip_ceiling) bad = true;

        // Exact fixed point: an estimate on target leaves the level alone.
        ClippingState fp = update_clipping(state, ter);
        if (fp.clip_level != state.clip_level) bad = true;

        // Zero gain freezes the level regardless of the estimate.
        ClippingState frozen = state;
        frozen.step_size = 0.0;
        if (update_clipping(frozen, 1e-6).clip_level != frozen.clip_level) bad = true;

        for (int step = 0; step < 32 && !bad; ++step) {
          const double p_hat = std::pow(10.0, -6.0 * rng.uniform());  // [1e-6, 1]
          const ClippingState next = update_clipping(state, std::min(p_hat, 0.4));
          if (next.clip_level < state.min_clip || next.clip_level > state.clip_ceiling) bad = true;
          const double p_used = std::min(p_hat, 0.4);
          if (p_used > ter && next.clip_level < state.clip_level) bad = true;
          if (p_used < ter && next.clip_level > state.clip_level) bad = true;
          state = next;
        }
      } catch (const std::exception&) {
        bad = true;
      }
      if (bad) record_failure(check, i, 0.0);
    }
    report.checks.push_back(check);
  }

  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  os << "verification seed " << report.seed << "\n";
  for (const auto& c : report.checks) {
    os << "check " << c.name << ": " << c.instances << " instances, " << c.failures
       << " failures";
    if (c.failures != 0) os << " (first at index " << c.first_failing_index << ")";
    os << ", worst deviation " << c.worst_error << "\n";
  }
  os << (report.ok() ? "verification PASSED" : "verification FAILED") << "\n";
  return os.str();
}

}  // namespace mimosd

#include "mimosd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "mimosd/adapt.hpp"
#include "mimosd/channel.hpp"
#include "mimosd/sphere_decoder.hpp"
#include "mimosd/verify.hpp"

namespace mimosd {

namespace {

std::uint64_t cell_id(std::size_t snr_index, std::uint64_t chain) {
  return (static_cast<std::uint64_t>(snr_index) << 32) | chain;
}

double initial_clip_level(const SimConfig& config) {
  switch (config.clip_mode) {
    case ClipMode::kAdaptive: return init_clipping(config.ter, config.mu, config.l_min).clip_level;
    case ClipMode::kFixed: return config.fixed_clip;
    case ClipMode::kOff: return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

std::size_t uses_per_block(const SimConfig& config) {
  const auto q = static_cast<std::size_t>(std::lround(std::log2(config.order)));
  return 2 * config.n_info / (config.m_t * q);
}

MetricsRecord run_block(const SimConfig& config, const Interleaver& interleaver,
                        std::size_t snr_index, std::uint64_t chain, std::uint64_t block_index,
                        double clip_level) {
  const Constellation& c = shared_constellation(config.order);
  const std::size_t q = static_cast<std::size_t>(c.bits_per_symbol);
  const std::size_t n = config.n_info;
  const std::size_t bits_per_use = config.m_t * q;
  const std::size_t uses = 2 * n / bits_per_use;
  const std::uint64_t cell = cell_id(snr_index, chain);

  CounterRng bit_rng(config.seed, stream::kInfoBits, 0, block_index, cell);
  std::vector<uint8_t> info(n);
  for (auto& b : info) b = bit_rng.uniform() < 0.5 ? 0 : 1;

  const CodeBlock code = rsc_encode(info);
  const std::vector<uint8_t> sent = interleave(code.coded_bits, interleaver);

  const NoiseModel noise = sigma2_for_snr(config.snr_db[snr_index], config.m_t);
  SphereDecoder decoder;
  LlrVector channel_llrs(2 * n);
  std::uint64_t visited = 0;

  std::vector<BitBlock> blocks(config.m_t, BitBlock(q));
  for (std::size_t u = 0; u < uses; ++u) {
    const std::size_t base = u * bits_per_use;
    for (std::size_t a = 0; a < config.m_t; ++a)
      for (std::size_t b = 0; b < q; ++b)
        blocks[a][b] = sent[base + a * q + b] ? int8_t{1} : int8_t{-1};
    const std::vector<cplx> s = assemble_vector(blocks, c, config.m_t);

    CounterRng ch_rng(config.seed, stream::kChannel, u, block_index, cell);
    CounterRng noise_rng(config.seed, stream::kNoise, u, block_index, cell);
    const ChannelRealization ch = draw_channel(config.m_r, config.m_t, ch_rng, u);
    const std::vector<cplx> y = transmit(s, ch, noise, noise_rng);

    DetectionProblem problem;
    problem.r = ch.qr.r;
    problem.y = rotate_received(ch.qr.q, y);
    problem.constellation = &c;
    problem.sigma2 = noise.sigma2;
    problem.clip = clip_level;
    const SoftDetectionResult det = decoder.detect(problem);
    visited += det.visited_nodes;
    std::copy(det.llrs.begin(), det.llrs.end(), channel_llrs.begin() + base);
  }

  const LlrVector a_priori = deinterleave(channel_llrs, interleaver);
  const BcjrResult decoded = bcjr_decode(a_priori);

  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const uint8_t hard = decoded.app_info[k] > 0.0 ? 1 : 0;
    if (hard != info[k]) ++errors;
  }
  const BerEstimate estimate = estimate_block_ber(decoded.app_info, config.n_est);

  MetricsRecord rec;
  rec.snr_db = config.snr_db[snr_index];
  rec.ter = config.ter;
  rec.mu = config.mu;
  rec.n_est = config.n_est;
  rec.clip_mode = config.clip_mode;
  rec.fixed_clip = config.fixed_clip;
  rec.block_index = block_index;
  rec.l_cl = clip_level;
  rec.ber_measured = static_cast<double>(errors) / static_cast<double>(n);
  rec.ber_estimated = estimate.p_hat;
  rec.avg_visited_nodes = static_cast<double>(visited) / static_cast<double>(uses);
  rec.frames = 1;
  rec.snr_index = snr_index;
  rec.chain = chain;
  rec.bit_errors = errors;
  return rec;
}

std::vector<MetricsRecord> run_chain(const SimConfig& config, const Interleaver& interleaver,
                                     std::size_t snr_index, std::uint64_t chain) {
  std::vector<MetricsRecord> records;
  records.reserve(config.frames);
  ClippingState state{};
  const bool adaptive = config.clip_mode == ClipMode::kAdaptive;
  if (adaptive) state = init_clipping(config.ter, config.mu, config.l_min);
  double level = adaptive ? state.clip_level : initial_clip_level(config);

  for (std::uint64_t b = 0; b < config.frames; ++b) {
    MetricsRecord rec = run_block(config, interleaver, snr_index, chain, b, level);
    if (adaptive) {
      // Next block reacts to this block's estimate; exp underflow on very
      // confident blocks is floored so the controller still steps down.
      const double p_hat = std::max(rec.ber_estimated, std::numeric_limits<double>::min());
      state = update_clipping(state, p_hat);
      level = state.clip_level;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

struct ChainTask {
  std::size_t snr_index;
  std::uint64_t chain;
};

// Runs one round of chain tasks, preserving task order in the output.
std::vector<std::vector<MetricsRecord>> run_round(const SimConfig& config,
                                                  const Interleaver& interleaver,
                                                  const std::vector<ChainTask>& tasks) {
  std::vector<std::vector<MetricsRecord>> results(tasks.size());
  const std::size_t workers = std::min<std::size_t>(config.threads, tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      results[i] = run_chain(config, interleaver, tasks[i].snr_index, tasks[i].chain);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size() || failed.load()) return;
        try {
          results[i] = run_chain(config, interleaver, tasks[i].snr_index, tasks[i].chain);
        } catch (...) {
          std::scoped_lock lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace

std::vector<MetricsRecord> run_experiment(const SimConfig& config) {
  validate_config(config);
  const Interleaver interleaver = make_interleaver(2 * config.n_info, config.seed);

  struct PointState {
    std::uint64_t chains_done = 0;
    std::uint64_t steady_errors = 0;
    bool settled = false;
  };
  std::vector<PointState> points(config.snr_db.size());
  std::vector<MetricsRecord> all;

  const std::uint64_t steady_from = config.frames / 2;  // steady state: later half of a chain
  for (;;) {
    std::vector<ChainTask> tasks;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].settled) continue;
      for (std::uint64_t j = 0; j < config.chains; ++j)
        tasks.push_back({i, points[i].chains_done + j});
    }
    if (tasks.empty()) break;

    const auto results = run_round(config, interleaver, tasks);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      PointState& ps = points[tasks[t].snr_index];
      for (const MetricsRecord& rec : results[t])
        if (rec.block_index >= steady_from) ps.steady_errors += rec.bit_errors;
      all.insert(all.end(), results[t].begin(), results[t].end());
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].settled) continue;
      points[i].chains_done += config.chains;
      const std::uint64_t frames_done = points[i].chains_done * config.frames;
      if (config.min_errors == 0 || points[i].steady_errors >= config.min_errors ||
          frames_done + config.chains * config.frames > config.max_frames)
        points[i].settled = true;
    }
  }

  std::sort(all.begin(), all.end(), [](const MetricsRecord& a, const MetricsRecord& b) {
    if (a.snr_index != b.snr_index) return a.snr_index < b.snr_index;
    if (a.chain != b.chain) return a.chain < b.chain;
    return a.block_index < b.block_index;
  });
  return all;
}

}  // namespace mimosd

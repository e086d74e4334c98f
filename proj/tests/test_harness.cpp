#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mimosd/adapt.hpp"
#include "mimosd/harness.hpp"

using namespace mimosd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimConfig small_config() {
  SimConfig cfg;
  cfg.m_t = 2;
  cfg.m_r = 2;
  cfg.order = 4;
  cfg.n_info = 128;
  cfg.frames = 6;
  cfg.chains = 2;
  cfg.seed = 9;
  cfg.snr_db = {8.0, 12.0};
  return cfg;
}

bool same_records(const std::vector<MetricsRecord>& a, const std::vector<MetricsRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].snr_db != b[i].snr_db || a[i].block_index != b[i].block_index ||
        a[i].chain != b[i].chain || a[i].l_cl != b[i].l_cl ||
        a[i].ber_measured != b[i].ber_measured || a[i].ber_estimated != b[i].ber_estimated ||
        a[i].avg_visited_nodes != b[i].avg_visited_nodes)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("channel uses per coded block") {
  SimConfig cfg;  // defaults: 4x4, 16QAM, 1152 info bits
  CHECK(uses_per_block(cfg) == 144);
  CHECK(uses_per_block(small_config()) == 64);
  cfg.order = 64;
  cfg.n_info = 1152;
  CHECK(uses_per_block(cfg) == 96);
}

TEST_CASE("experiment shape and ordering") {
  const SimConfig cfg = small_config();
  const auto records = run_experiment(cfg);
  REQUIRE(records.size() == 2 * 2 * 6);  // snr points x chains x frames

  std::size_t i = 0;
  for (std::size_t s = 0; s < 2; ++s)
    for (std::uint64_t ch = 0; ch < 2; ++ch)
      for (std::uint64_t b = 0; b < 6; ++b, ++i) {
        CHECK(records[i].snr_db == cfg.snr_db[s]);
        CHECK(records[i].chain == ch);
        CHECK(records[i].block_index == b);
        CHECK(records[i].frames == 1);
      }

  // config echo
  for (const auto& rec : records) {
    CHECK(rec.ter == cfg.ter);
    CHECK(rec.mu == cfg.mu);
    CHECK(rec.n_est == cfg.n_est);
    CHECK(rec.clip_mode == ClipMode::kAdaptive);
  }
}

TEST_CASE("adaptive chains start at the ceiling and stay inside the band") {
  const SimConfig cfg = small_config();
  const double ceiling = std::log(1.0 / cfg.ter - 1.0);
  const auto records = run_experiment(cfg);
  for (const auto& rec : records) {
    if (rec.block_index == 0) CHECK(rec.l_cl == doctest::Approx(ceiling).epsilon(1e-12));
    CHECK(rec.l_cl >= cfg.l_min - 1e-12);
    CHECK(rec.l_cl <= ceiling + 1e-12);
  }
}

TEST_CASE("zero step size freezes the clip level") {
  SimConfig cfg = small_config();
  cfg.mu = 0.0;
  cfg.snr_db = {10.0};
  cfg.chains = 1;
  const double ceiling = std::log(1.0 / cfg.ter - 1.0);
  for (const auto& rec : run_experiment(cfg))
    CHECK(rec.l_cl == doctest::Approx(ceiling).epsilon(1e-12));
}

TEST_CASE("clean channel measures zero errors") {
  SimConfig cfg = small_config();
  cfg.snr_db = {40.0};
  cfg.chains = 1;
  cfg.frames = 3;
  for (const auto& rec : run_experiment(cfg)) {
    CHECK(rec.ber_measured == 0.0);
    CHECK(rec.ber_estimated >= 0.0);
  }
}

TEST_CASE("disabled clipping equals an infinite fixed level") {
  SimConfig off = small_config();
  off.clip_mode = ClipMode::kOff;
  off.chains = 1;
  off.frames = 4;

  SimConfig fixed = off;
  fixed.clip_mode = ClipMode::kFixed;
  fixed.fixed_clip = kInf;

  const auto a = run_experiment(off);
  const auto b = run_experiment(fixed);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].l_cl == kInf);
    CHECK(b[i].l_cl == kInf);
    CHECK(a[i].ber_measured == b[i].ber_measured);
    CHECK(a[i].ber_estimated == b[i].ber_estimated);
    CHECK(a[i].avg_visited_nodes == b[i].avg_visited_nodes);
  }
}

TEST_CASE("thread count never changes the records") {
  SimConfig cfg = small_config();
  cfg.chains = 4;
  const auto serial = run_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = run_experiment(cfg);
  CHECK(same_records(serial, parallel));
}

TEST_CASE("estimator depth changes the estimate only") {
  SimConfig shallow = small_config();
  shallow.clip_mode = ClipMode::kFixed;
  shallow.fixed_clip = 3.0;
  shallow.chains = 1;
  shallow.frames = 4;
  shallow.n_est = 8;

  SimConfig deep = shallow;
  deep.n_est = 128;

  const auto a = run_experiment(shallow);
  const auto b = run_experiment(deep);
  REQUIRE(a.size() == b.size());
  bool estimates_differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ber_measured == b[i].ber_measured);
    CHECK(a[i].avg_visited_nodes == b[i].avg_visited_nodes);
    CHECK(a[i].l_cl == b[i].l_cl);
    if (a[i].ber_estimated != b[i].ber_estimated) estimates_differ = true;
  }
  CHECK(estimates_differ);
}

TEST_CASE("error-count stopping rule launches more chains") {
  SimConfig cfg = small_config();
  cfg.snr_db = {8.0};
  cfg.chains = 1;
  cfg.frames = 4;
  cfg.min_errors = 1000000000;  // unreachable: run to the frame cap
  cfg.max_frames = 12;
  const auto records = run_experiment(cfg);
  CHECK(records.size() == 12);  // three rounds of one 4-frame chain
  std::uint64_t max_chain = 0;
  for (const auto& rec : records) max_chain = std::max(max_chain, rec.chain);
  CHECK(max_chain == 2);

  // plenty of errors at 0 dB: one round satisfies the rule
  cfg.snr_db = {0.0};
  cfg.min_errors = 1;
  cfg.max_frames = 1000;
  CHECK(run_experiment(cfg).size() == 4);
}

TEST_CASE("stopping rule counts steady-state errors per point independently") {
  SimConfig cfg = small_config();
  cfg.snr_db = {0.0, 40.0};  // the clean point must hit the cap, the noisy one stops
  cfg.chains = 1;
  cfg.frames = 4;
  cfg.min_errors = 1;
  cfg.max_frames = 8;
  const auto records = run_experiment(cfg);
  std::size_t noisy = 0, clean = 0;
  for (const auto& rec : records) (rec.snr_db == 0.0 ? noisy : clean)++;
  CHECK(noisy == 4);
  CHECK(clean == 8);
}

TEST_CASE("invalid configs are rejected before running") {
  SimConfig cfg = small_config();
  cfg.n_info = 101;  // 202 coded bits do not divide into 4-bit channel uses
  CHECK_THROWS_AS(run_experiment(cfg), config_error);

  cfg = small_config();
  cfg.snr_db.clear();
  CHECK_THROWS_AS(run_experiment(cfg), config_error);

  cfg = small_config();
  cfg.ter = 0.0;
  CHECK_THROWS_AS(run_experiment(cfg), config_error);
}

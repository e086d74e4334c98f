#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mimosd/fec.hpp"
#include "mimosd/oracles.hpp"
#include "mimosd/rng.hpp"
#include "mimosd/verify.hpp"

using namespace mimosd;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}
}  // namespace

TEST_CASE("exhaustive detector on the scalar case") {
  DetectionProblem p;
  p.r = ComplexMatrix(1, 1);
  p.r(0, 0) = cplx(1.0, 0.0);
  p.y = {cplx(0.3, 0.0)};
  p.constellation = &shared_constellation(2);
  p.sigma2 = 0.5;
  p.clip = kInf;
  const LlrVector llrs = exhaustive_maxlog_llrs(p);
  REQUIRE(llrs.size() == 1);
  CHECK(llrs[0] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("exhaustive detector guards") {
  DetectionProblem p;
  p.r = ComplexMatrix(1, 1);
  p.r(0, 0) = cplx(1.0, 0.0);
  p.y = {cplx(0.0, 0.0)};
  p.constellation = &shared_constellation(2);
  p.sigma2 = 0.5;
  p.clip = kInf;

  DetectionProblem bad = p;
  bad.constellation = nullptr;
  CHECK_THROWS_AS(exhaustive_maxlog_llrs(bad), oracle_error);

  bad = p;
  bad.sigma2 = -1.0;
  CHECK_THROWS_AS(exhaustive_maxlog_llrs(bad), oracle_error);

  bad = p;
  bad.y.clear();
  CHECK_THROWS_AS(exhaustive_maxlog_llrs(bad), oracle_error);

  // 5 x 64QAM = 2^30 leaves: refused rather than attempted
  DetectionProblem huge;
  huge.r = ComplexMatrix(5, 5);
  for (std::size_t i = 0; i < 5; ++i) huge.r(i, i) = cplx(1.0, 0.0);
  huge.y.assign(5, cplx(0.0, 0.0));
  huge.constellation = &shared_constellation(64);
  huge.sigma2 = 0.5;
  huge.clip = kInf;
  CHECK_THROWS_AS(exhaustive_maxlog_llrs(huge), oracle_error);
}

TEST_CASE("exhaustive map decoder with one info bit") {
  // K = 1: the code has exactly two codewords, 0|0 and 1|1, so the info
  // posterior is the sum of the systematic and parity priors.
  LlrVector priors = {0.7, -0.4};
  const ExhaustiveMapResult res = exhaustive_map_decode(priors, 1);
  REQUIRE(res.app_info.size() == 1);
  REQUIRE(res.app_coded.size() == 2);
  CHECK(res.app_info[0] == doctest::Approx(0.7 + -0.4).epsilon(1e-12));
  CHECK(res.app_coded[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(res.app_coded[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("exhaustive map decoder with two info bits") {
  // K = 2 enumerates four codewords by hand.
  const LlrVector priors = {0.9, -0.2, 0.5, 1.1};
  const ExhaustiveMapResult res = exhaustive_map_decode(priors, 2);

  double num[2], den[2];
  for (int k = 0; k < 2; ++k) num[k] = den[k] = -kInf;
  for (unsigned w = 0; w < 4; ++w) {
    const std::vector<std::uint8_t> u = {static_cast<std::uint8_t>(w & 1),
                                         static_cast<std::uint8_t>((w >> 1) & 1)};
    const std::vector<std::uint8_t> cw = rsc_encode(u).coded_bits;
    double lp = 0.0;
    for (std::size_t j = 0; j < cw.size(); ++j)
      lp += (cw[j] ? 0.5 : -0.5) * priors[j];
    for (int k = 0; k < 2; ++k) {
      if (u[static_cast<std::size_t>(k)])
        num[k] = log_sum_exp2(num[k], lp);
      else
        den[k] = log_sum_exp2(den[k], lp);
    }
  }
  for (int k = 0; k < 2; ++k)
    CHECK(res.app_info[static_cast<std::size_t>(k)] ==
          doctest::Approx(num[k] - den[k]).epsilon(1e-12));
}

TEST_CASE("map decoder guards") {
  const LlrVector ok = {0.1, 0.2};
  CHECK_THROWS_AS(exhaustive_map_decode(ok, 0), oracle_error);
  CHECK_THROWS_AS(exhaustive_map_decode(ok, 2), oracle_error);  // needs 4 llrs
  const LlrVector big(2 * 13, 0.0);
  CHECK_THROWS_AS(exhaustive_map_decode(big, 13), oracle_error);
}

TEST_CASE("map decoder agrees with bcjr on short blocks") {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    CounterRng rng(900 + rep, stream::kTest, 0, 0, 0);
    const std::size_t k_info = 4 + (rep % 5);
    LlrVector priors(2 * k_info);
    for (double& v : priors) v = 4.0 * (rng.uniform() - 0.5);
    const ExhaustiveMapResult ref = exhaustive_map_decode(priors, k_info);
    const BcjrResult got = bcjr_decode(priors);
    REQUIRE(got.app_info.size() == k_info);
    for (std::size_t k = 0; k < k_info; ++k)
      CHECK(got.app_info[k] ==
            doctest::Approx(ref.app_info[k]).epsilon(1e-10).scale(1.0));
  }
}

#include "mimosd/oracles.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace mimosd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without under/overflow.
double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

LlrVector exhaustive_maxlog_llrs(const DetectionProblem& problem) {
  if (problem.constellation == nullptr) throw oracle_error("constellation is null");
  const Constellation& c = *problem.constellation;
  const std::size_t m = problem.y.size();
  if (m == 0) throw oracle_error("empty observation");
  if (problem.r.rows() != m || problem.r.cols() != m)
    throw oracle_error("triangular factor shape mismatch");
  if (!(problem.sigma2 > 0.0)) throw oracle_error("noise variance must be positive");

  const std::size_t q = c.bits_per_symbol;
  const std::size_t num_bits = m * q;
  double total = 1.0;
  for (std::size_t a = 0; a < m; ++a) total *= static_cast<double>(c.order);
  if (total > 65536.0) throw oracle_error("instance too large for exhaustive enumeration");

  std::vector<double> best_zero(num_bits, kInf);   // bit value -1
  std::vector<double> best_one(num_bits, kInf);    // bit value +1

  std::vector<std::size_t> idx(m, 0);
  std::vector<cplx> s(m);
  const auto count = static_cast<std::size_t>(total);
  for (std::size_t n = 0; n < count; ++n) {
    // Decode the flat counter into per-antenna constellation indices.
    std::size_t rem = n;
    for (std::size_t a = m; a-- > 0;) {
      idx[a] = rem % c.order;
      rem /= c.order;
      s[a] = c.points[idx[a]];
    }
    double metric = 0.0;
    for (std::size_t row = 0; row < m; ++row) {
      cplx acc = problem.y[row];
      for (std::size_t col = row; col < m; ++col) acc -= problem.r(row, col) * s[col];
      metric += std::norm(acc);
    }
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < q; ++b) {
        const std::size_t k = a * q + b;
        const bool one = ((idx[a] >> (q - 1 - b)) & 1u) != 0;
        double& slot = one ? best_one[k] : best_zero[k];
        slot = std::min(slot, metric);
      }
    }
  }

  LlrVector llrs(num_bits);
  const double scale = 1.0 / (2.0 * problem.sigma2);
  for (std::size_t k = 0; k < num_bits; ++k)
    llrs[k] = scale * (best_zero[k] - best_one[k]);
  return llrs;
}

ExhaustiveMapResult exhaustive_map_decode(const LlrVector& a_priori, std::size_t k_info) {
  if (k_info == 0 || k_info > 12) throw oracle_error("info length out of range for exhaustive decode");
  if (a_priori.size() != 2 * k_info) throw oracle_error("observation length must be twice the info length");

  const std::size_t n_coded = 2 * k_info;
  std::vector<double> num_info(k_info, -kInf), den_info(k_info, -kInf);
  std::vector<double> num_coded(n_coded, -kInf), den_coded(n_coded, -kInf);

  std::vector<unsigned> code(n_coded);
  const std::size_t words = std::size_t{1} << k_info;
  for (std::size_t w = 0; w < words; ++w) {
    // Recursive systematic encoder, re-derived from the generator polynomials:
    // recursion a_t = u_t ^ a_{t-1} ^ a_{t-2}, parity p_t = a_t ^ a_{t-2}.
    unsigned a1 = 0, a2 = 0;
    double lp = 0.0;
    for (std::size_t t = 0; t < k_info; ++t) {
      const unsigned u = (w >> t) & 1u;
      const unsigned a = u ^ a1 ^ a2;
      const unsigned p = a ^ a2;
      a2 = a1;
      a1 = a;
      code[2 * t] = u;
      code[2 * t + 1] = p;
      lp += (u ? 0.5 : -0.5) * a_priori[2 * t];
      lp += (p ? 0.5 : -0.5) * a_priori[2 * t + 1];
    }
    for (std::size_t t = 0; t < k_info; ++t) {
      double& info_slot = ((w >> t) & 1u) ? num_info[t] : den_info[t];
      info_slot = log_sum_exp(info_slot, lp);
    }
    for (std::size_t j = 0; j < n_coded; ++j) {
      double& coded_slot = code[j] ? num_coded[j] : den_coded[j];
      coded_slot = log_sum_exp(coded_slot, lp);
    }
  }

  ExhaustiveMapResult out;
  out.app_info.resize(k_info);
  out.app_coded.resize(n_coded);
  for (std::size_t t = 0; t < k_info; ++t) out.app_info[t] = num_info[t] - den_info[t];
  for (std::size_t j = 0; j < n_coded; ++j) out.app_coded[j] = num_coded[j] - den_coded[j];
  return out;
}

}  // namespace mimosd

#include "mimosd/linalg.hpp"

#include <cmath>

namespace mimosd {

namespace {
constexpr double kPivotTolerance = 1e-12;
}

QrFactors qr_decompose(const ComplexMatrix& h) {
  const std::size_t m = h.rows();
  const std::size_t n = h.cols();
  if (m < n || n == 0) {
    throw dimension_error("qr_decompose: matrix must have rows >= cols >= 1");
  }

  // Work on a copy; reflectors are stored column by column.
  ComplexMatrix a = h;
  std::vector<std::vector<cplx>> reflectors(n);
  std::vector<double> taus(n);

  for (std::size_t k = 0; k < n; ++k) {
    // Householder vector for column k below (and including) the diagonal.
    double norm_sq = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      norm_sq += std::norm(a(i, k));
    }
    const double norm = std::sqrt(norm_sq);
    if (norm < kPivotTolerance) {
      throw rank_deficient_error("qr_decompose: pivot below tolerance");
    }

    const cplx x0 = a(k, k);
    const double x0_abs = std::abs(x0);
    const cplx phase = x0_abs > 0.0 ? x0 / x0_abs : cplx(1.0, 0.0);
    const cplx alpha = -phase * norm;

    std::vector<cplx> v(m - k);
    v[0] = x0 - alpha;
    for (std::size_t i = k + 1; i < m; ++i) {
      v[i - k] = a(i, k);
    }
    double v_norm_sq = 0.0;
    for (const cplx& vi : v) {
      v_norm_sq += std::norm(vi);
    }
    const double tau = v_norm_sq > 0.0 ? 2.0 / v_norm_sq : 0.0;

    // Apply I - tau * v v^H to the trailing block of a.
    for (std::size_t j = k; j < n; ++j) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = k; i < m; ++i) {
        dot += std::conj(v[i - k]) * a(i, j);
      }
      dot *= tau;
      for (std::size_t i = k; i < m; ++i) {
        a(i, j) -= dot * v[i - k];
      }
    }

    reflectors[k] = std::move(v);
    taus[k] = tau;
  }

  // Upper triangle of a is r; everything below is exactly zero by
  // construction of the output matrix.
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      r(i, j) = a(i, j);
    }
  }

  // Thin q: apply the reflectors in reverse order to the first n columns of
  // the identity.
  ComplexMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    q(j, j) = cplx(1.0, 0.0);
  }
  for (std::size_t k = n; k-- > 0;) {
    const std::vector<cplx>& v = reflectors[k];
    const double tau = taus[k];
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = k; i < m; ++i) {
        dot += std::conj(v[i - k]) * q(i, j);
      }
      dot *= tau;
      for (std::size_t i = k; i < m; ++i) {
        q(i, j) -= dot * v[i - k];
      }
    }
  }

  // Rotate diagonal phases so every r(i,i) is real and strictly positive.
  for (std::size_t i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double d_abs = std::abs(d);
    if (d_abs < kPivotTolerance) {
      throw rank_deficient_error("qr_decompose: pivot below tolerance");
    }
    const cplx unit = d / d_abs;  // multiply row i of r by conj(unit)
    const cplx unit_conj = std::conj(unit);
    for (std::size_t j = i; j < n; ++j) {
      r(i, j) *= unit_conj;
    }
    r(i, i) = cplx(std::abs(r(i, i)), 0.0);  // kill residual imaginary dust
    for (std::size_t row = 0; row < m; ++row) {
      q(row, i) *= unit;
    }
  }

  return {std::move(q), std::move(r)};
}

std::vector<cplx> rotate_received(const ComplexMatrix& q, const std::vector<cplx>& y) {
  if (y.size() != q.rows()) {
    throw dimension_error("rotate_received: y length must equal q rows");
  }
  std::vector<cplx> out(q.cols(), cplx(0.0, 0.0));
  for (std::size_t j = 0; j < q.cols(); ++j) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < q.rows(); ++i) {
      acc += std::conj(q(i, j)) * y[i];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<cplx> mat_vec(const ComplexMatrix& a, const std::vector<cplx>& x) {
  if (x.size() != a.cols()) {
    throw dimension_error("mat_vec: x length must equal matrix cols");
  }
  std::vector<cplx> out(a.rows(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      acc += a(i, j) * x[j];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace mimosd

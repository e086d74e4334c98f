#ifndef MIMOSD_LINALG_HPP
#define MIMOSD_LINALG_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mimosd {

using cplx = std::complex<double>;

// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> data_;
};

struct QrFactors {
  ComplexMatrix q;  // rows x cols, orthonormal columns
  ComplexMatrix r;  // cols x cols, upper triangular, real positive diagonal
};

struct rank_deficient_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thin Householder QR with the diagonal of r rotated to be real and strictly
// positive. Throws rank_deficient_error when a pivot magnitude falls below
// 1e-12.
QrFactors qr_decompose(const ComplexMatrix& h);

// y' = q^H y for a column vector y.
std::vector<cplx> rotate_received(const ComplexMatrix& q, const std::vector<cplx>& y);

// Plain matrix * vector, used by the channel and by reconstruction checks.
std::vector<cplx> mat_vec(const ComplexMatrix& a, const std::vector<cplx>& x);

}  // namespace mimosd

#endif

#include "adnewton/linalg/kernels.hpp"

namespace adnewton::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void hadamard_scalar(const double* d, const double* r, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
}

void csr_matvec_scalar(std::size_t n_rows, const std::size_t* row_offsets,
                       const std::size_t* col_indices, const double* values,
                       const double* x, double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
      s += values[k] * x[col_indices[k]];
    y[r] = s;
  }
}

constexpr KernelTable kScalar{Backend::scalar, dot_scalar, axpy_scalar, xpay_scalar,
                              hadamard_scalar, csr_matvec_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace adnewton::kernels

// Compiled with -mavx2 -mfma. Nothing in here may run unless
// avx2_available() returned true.

#include "adnewton/linalg/kernels.hpp"

#include <immintrin.h>

namespace adnewton::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void hadamard_avx2(const double* d, const double* r, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(r + i)));
  for (; i < n; ++i) z[i] = d[i] * r[i];
}

// Rows of a P1 stiffness pattern hold 5-9 entries, so the row is gathered
// four entries at a time and the remainder is handled scalar.
void csr_matvec_avx2(std::size_t n_rows, const std::size_t* row_offsets,
                     const std::size_t* col_indices, const double* values,
                     const double* x, double* y) {
  static_assert(sizeof(std::size_t) == sizeof(long long));
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t k = row_offsets[r];
    const std::size_t end = row_offsets[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m256i idx =
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col_indices + k));
      const __m256d xv = _mm256_i64gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += values[k] * x[col_indices[k]];
    y[r] = s;
  }
}

constexpr KernelTable kAvx2{Backend::avx2, dot_avx2, axpy_avx2, xpay_avx2,
                            hadamard_avx2, csr_matvec_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace adnewton::kernels

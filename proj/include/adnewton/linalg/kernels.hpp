#pragma once

// Data-parallel inner loops used by the vector and CSR operations.
//
// Every kernel has a portable scalar reference implementation. When the
// build includes the AVX2/FMA variants and the running CPU supports them,
// those are selected at first use. The choice can be forced with the
// environment variable ADNEWTON_SIMD={scalar,avx2} or select_backend().
//
// The SIMD variants reassociate sums, so results agree with the scalar
// reference only to round-off; a given backend is deterministic.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace adnewton::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  /// sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y[i] += a*x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y[i] = x[i] + a*y[i]
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  /// z[i] = d[i]*r[i]
  void (*hadamard)(const double* d, const double* r, double* z, std::size_t n);
  /// y = A x for CSR (row_offsets, col_indices, values) with n_rows rows
  void (*csr_matvec)(std::size_t n_rows, const std::size_t* row_offsets,
                     const std::size_t* col_indices, const double* values,
                     const double* x, double* y);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variants were not compiled in.
const KernelTable* avx2_table();

/// True when avx2_table() is non-null and the CPU reports AVX2 and FMA.
bool avx2_available();

/// The table used by the linear-algebra layer.
const KernelTable& active();

/// Forces a backend; throws UsageError if it is unavailable on this machine.
void select_backend(Backend b);

std::string_view backend_name(Backend b);

}  // namespace adnewton::kernels

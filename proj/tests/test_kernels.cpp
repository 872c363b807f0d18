#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"
#include "adnewton/linalg/sparse_matrix.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace adnewton {
namespace {

using kernels::KernelTable;

std::vector<double> random_data(std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(testing::rng());
  return v;
}

class KernelEquivalence : public ::testing::Test {
protected:
  void SetUp() override {
    if (!kernels::avx2_available()) GTEST_SKIP() << "AVX2/FMA not available";
    simd = kernels::avx2_table();
  }
  const KernelTable& ref = kernels::scalar_table();
  const KernelTable* simd = nullptr;
};

// Sizes cover empty input, pure remainders and mixed block/remainder splits.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 100, 1023};

TEST_F(KernelEquivalence, DotMatchesScalarToRoundoff) {
  for (std::size_t n : kSizes) {
    const auto x = random_data(n);
    const auto y = random_data(n);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(x[i] * y[i]);
    EXPECT_NEAR(simd->dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n),
                4e-16 * (abs_sum + 1.0) * std::log2(n + 2.0))
        << "n=" << n;
  }
}

TEST_F(KernelEquivalence, ElementwiseKernelsAgree) {
  for (std::size_t n : kSizes) {
    const auto x = random_data(n);
    const auto d = random_data(n);
    auto y_ref = random_data(n);
    auto y_simd = y_ref;
    ref.axpy(0.7, x.data(), y_ref.data(), n);
    simd->axpy(0.7, x.data(), y_simd.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y_simd[i], y_ref[i], 1e-15);

    ref.xpay(x.data(), -1.3, y_ref.data(), n);
    simd->xpay(x.data(), -1.3, y_simd.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y_simd[i], y_ref[i], 1e-14);

    std::vector<double> z_ref(n), z_simd(n);
    ref.hadamard(d.data(), x.data(), z_ref.data(), n);
    simd->hadamard(d.data(), x.data(), z_simd.data(), n);
    EXPECT_EQ(z_ref, z_simd);
  }
}

TEST_F(KernelEquivalence, CsrMatvecAgreesOnRandomPatterns) {
  std::uniform_int_distribution<std::size_t> row_len(0, 11);
  for (std::size_t n : {1u, 2u, 5u, 40u, 257u}) {
    std::vector<Triplet> trips;
    std::uniform_int_distribution<std::size_t> col(0, n - 1);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t len = row_len(testing::rng());
      for (std::size_t k = 0; k < len; ++k) trips.push_back({r, col(testing::rng()), random_data(1)[0]});
    }
    const SparseMatrix a = SparseMatrix::from_triplets(n, trips);
    const auto x = random_data(n);
    std::vector<double> y_ref(n), y_simd(n);
    ref.csr_matvec(n, a.row_offsets().data(), a.col_indices().data(), a.values().data(), x.data(),
                   y_ref.data());
    simd->csr_matvec(n, a.row_offsets().data(), a.col_indices().data(), a.values().data(),
                     x.data(), y_simd.data());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y_simd[i], y_ref[i], 1e-14) << "row " << i;
  }
}

TEST(KernelDispatch, SelectBackendSwitchesActiveTable) {
  const kernels::Backend original = kernels::active().backend;
  kernels::select_backend(kernels::Backend::scalar);
  EXPECT_EQ(kernels::active().backend, kernels::Backend::scalar);
  if (kernels::avx2_available()) {
    kernels::select_backend(kernels::Backend::avx2);
    EXPECT_EQ(kernels::active().backend, kernels::Backend::avx2);
  } else {
    EXPECT_THROW(kernels::select_backend(kernels::Backend::avx2), UsageError);
  }
  kernels::select_backend(original);
}

TEST(KernelDispatch, BackendNames) {
  EXPECT_EQ(kernels::backend_name(kernels::Backend::scalar), "scalar");
  EXPECT_EQ(kernels::backend_name(kernels::Backend::avx2), "avx2");
}

}  // namespace
}  // namespace adnewton

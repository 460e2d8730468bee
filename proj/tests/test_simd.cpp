#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pdrwm/ergodicity_oracle.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/simd/kernels.hpp"

namespace pdrwm::simd {
namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2_available()) GTEST_SKIP() << "no AVX2/FMA on this CPU";
  }
};

// Lengths straddle the 4-lane width and the unrolled 16-element body.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 31, 33, 64, 100, 1023};

TEST_F(SimdEquivalence, ReductionsMatchScalar) {
  std::mt19937_64 rng(1);
  for (std::size_t n : kLengths) {
    const auto a = random_vector(n, rng), b = random_vector(n, rng);
    const double tol = 1e-13 * (1.0 + n);
    EXPECT_NEAR(avx2::dot(a.data(), b.data(), n), scalar::dot(a.data(), b.data(), n), tol) << n;
    EXPECT_NEAR(avx2::sum(a.data(), n), scalar::sum(a.data(), n), tol) << n;
    EXPECT_NEAR(avx2::l1_distance(a.data(), b.data(), n), scalar::l1_distance(a.data(), b.data(), n), tol)
        << n;
  }
}

TEST_F(SimdEquivalence, AxpyMatchesScalar) {
  std::mt19937_64 rng(2);
  for (std::size_t n : kLengths) {
    const auto x = random_vector(n, rng);
    auto y1 = random_vector(n, rng);
    auto y2 = y1;
    avx2::axpy(-0.37, x.data(), y1.data(), n);
    scalar::axpy(-0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1 + std::fabs(y2[i])));
  }
}

TEST_F(SimdEquivalence, MatrixKernelsMatchScalar) {
  std::mt19937_64 rng(3);
  for (std::size_t rows : {1u, 5u, 16u, 37u})
    for (std::size_t cols : {1u, 4u, 9u, 50u}) {
      const auto a = random_vector(rows * cols, rng);
      const auto x = random_vector(cols, rng), v = random_vector(rows, rng);
      std::vector<double> y1(rows), y2(rows), o1(cols), o2(cols);
      avx2::gemv(a.data(), rows, cols, x.data(), y1.data());
      scalar::gemv(a.data(), rows, cols, x.data(), y2.data());
      avx2::vecmat(v.data(), a.data(), rows, cols, o1.data());
      scalar::vecmat(v.data(), a.data(), rows, cols, o2.data());
      for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-12);
      for (std::size_t j = 0; j < cols; ++j) EXPECT_NEAR(o1[j], o2[j], 1e-12);
    }
}

TEST_F(SimdEquivalence, SpectralGapIsBackendIndependent) {
  const auto chain = build_discretized(make_exponential_tail(1.0), power_field(1.0), 1.0, 30.0, 301);
  SpectralOptions opts;
  opts.dense_limit = 10;
  set_backend(Backend::Scalar);
  const double g_scalar = spectral_analysis(chain, opts).gap;
  set_backend(Backend::Avx2);
  const double g_avx2 = spectral_analysis(chain, opts).gap;
  EXPECT_NEAR(g_scalar, g_avx2, 1e-10);
}

TEST(SimdDispatch, BackendSelection) {
  set_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_STREQ(backend_name(Backend::Scalar), "scalar");
  const double a[] = {1, 2, 3}, b[] = {4, 5, 6};
  EXPECT_EQ(dot(a, b, 3), 32.0);
  if (avx2_available()) {
    set_backend(Backend::Avx2);
    EXPECT_EQ(active_backend(), Backend::Avx2);
    EXPECT_EQ(dot(a, b, 3), 32.0);
  } else {
    EXPECT_THROW(set_backend(Backend::Avx2), Error);
  }
}

}  // namespace
}  // namespace pdrwm::simd

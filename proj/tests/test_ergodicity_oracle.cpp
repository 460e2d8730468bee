#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "pdrwm/ergodicity_oracle.hpp"
#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

DiscretizedChain lazy_walk(std::size_t n, double up, double down) {
  RowMatrix P = RowMatrix::Zero(n, n);
  std::vector<double> pi(n);
  double w = 1.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pi[i] = w;
    total += w;
    w *= up / down;
    if (i + 1 < n) P(i, i + 1) = up;
    if (i > 0) P(i, i - 1) = down;
    P(i, i) = 1.0 - P.row(i).sum();
  }
  for (auto& p : pi) p /= total;
  return DiscretizedChain::from_matrix(P, pi);
}

TEST(ErgodicityOracle, TwoStateChainGap) {
  RowMatrix P(2, 2);
  P << 0.8, 0.2, 0.3, 0.7;
  const auto chain = DiscretizedChain::from_matrix(P, {0.6, 0.4});
  EXPECT_NEAR(spectral_gap(chain), 0.5, 1e-14);
  RowMatrix Q(2, 2);
  Q << 0.1, 0.9, 0.9, 0.1;
  EXPECT_NEAR(spectral_gap(DiscretizedChain::from_matrix(Q, {0.5, 0.5})), 0.2, 1e-14);
}

TEST(ErgodicityOracle, LazyWalkMatchesClosedFormOnBothPaths) {
  const std::size_t n = 1400;
  const auto chain = lazy_walk(n, 0.25, 0.25);
  const double exact = 0.5 * (1.0 - std::cos(std::numbers::pi / n));
  const auto dense = spectral_analysis(chain);
  ASSERT_TRUE(dense.dense);
  EXPECT_NEAR(dense.gap, exact, 1e-12);
  SpectralOptions opts;
  opts.dense_limit = 100;
  const auto lanczos = spectral_analysis(chain, opts);
  ASSERT_FALSE(lanczos.dense);
  EXPECT_NEAR(lanczos.gap, exact, 1e-10);
  EXPECT_LE(lanczos.residual, 1e-6);
}

TEST(ErgodicityOracle, DenseAndLanczosAgreeOnBiasedWalk) {
  const auto chain = lazy_walk(1200, 0.26, 0.24);
  SpectralOptions opts;
  opts.dense_limit = 10;
  const auto a = spectral_analysis(chain);
  const auto b = spectral_analysis(chain, opts);
  EXPECT_NEAR(a.gap, b.gap, 1e-9 * std::max(1.0, a.gap));
  EXPECT_NEAR(a.lambda2, b.lambda2, 1e-9);
}

TEST(ErgodicityOracle, DenseAndLanczosAgreeOnDiscretizedChain) {
  const auto chain =
      build_discretized(make_exponential_tail(1.0), power_field(1.0), 1.0, 40.0, 1601);
  SpectralOptions opts;
  opts.dense_limit = 10;
  const auto a = spectral_analysis(chain);
  const auto b = spectral_analysis(chain, opts);
  EXPECT_NEAR(a.gap, b.gap, 1e-8);
}

TEST(ErgodicityOracle, ConstructionInvariants) {
  const auto chain = build_discretized(make_polynomial_tail(2.0), quadratic_field(1.0), 0.2, 15.0, 401);
  EXPECT_EQ(chain.size(), 401u);
  EXPECT_NEAR(chain.delta, 30.0 / 400.0, 1e-15);
  EXPECT_LT(row_sum_residual(chain), 1e-12);
  EXPECT_LT(stationarity_residual(chain), 1e-10);
  EXPECT_LT(reversibility_residual(chain), 1e-12);
  for (Eigen::Index i = 0; i < chain.P.rows(); ++i)
    for (Eigen::Index j = 0; j < chain.P.cols(); ++j) EXPECT_GE(chain.P(i, j), 0.0);
}

TEST(ErgodicityOracle, CoarseSpacingIsRejected) {
  EXPECT_THROW(build_discretized(make_standard_normal(), constant_field(Matrix::Identity(1, 1)), 1.0,
                                 10.0, 51),
               DiscretizationError);
  EXPECT_THROW(build_discretized(make_ridge_2d(), power_field(1.0, 2), 1.0, 10.0, 51), ParameterError);
}

TEST(ErgodicityOracle, TotalVariationIsNonIncreasing) {
  const auto chain =
      build_discretized(make_standard_normal(), constant_field(Matrix::Identity(1, 1)), 1.0, 8.0, 161);
  const auto tv = tv_decay_curve(chain, 10, 300);
  ASSERT_EQ(tv.size(), 301u);
  EXPECT_NEAR(tv[0], 1.0 - chain.pi_hat[10], 1e-14);
  for (std::size_t i = 1; i < tv.size(); ++i) EXPECT_LE(tv[i], tv[i - 1] + 1e-15);
}

TEST(ErgodicityOracle, DecayFitRecoversGeometricRate) {
  std::vector<double> tv;
  for (int n = 0; n < 200; ++n) tv.push_back(0.7 * std::pow(0.93, n) + 0.2 * std::pow(0.5, n));
  const auto fit = fit_decay_rate(tv);
  EXPECT_NEAR(fit.rate, 0.93, 1e-8);
  EXPECT_GT(fit.r_squared, 0.999999);
  EXPECT_THROW(fit_decay_rate({1.0, 1e-13, 1e-14}), NumericError);
}

TEST(ErgodicityOracle, VerdictThresholds) {
  EXPECT_EQ(classify_gap_ratio(0.9), Verdict::Geometric);
  EXPECT_EQ(classify_gap_ratio(0.5), Verdict::Inconclusive);
  EXPECT_EQ(classify_gap_ratio(0.3), Verdict::Inconclusive);
  EXPECT_EQ(classify_gap_ratio(0.2), Verdict::Inconclusive);
  EXPECT_EQ(classify_gap_ratio(0.05), Verdict::NonGeometric);
}

TEST(ErgodicityOracle, NormalTargetGapDoesNotShrinkWithDomain) {
  const auto scan = gap_growth_scan(make_standard_normal(), constant_field(Matrix::Identity(1, 1)), 1.0,
                                    {5.0, 10.0, 20.0}, 0.1);
  ASSERT_EQ(scan.size(), 3u);
  EXPECT_EQ(scan[0].n, 101u);
  EXPECT_EQ(scan[2].n, 401u);
  EXPECT_EQ(classify_gap_ratio(gap_ratio(scan)), Verdict::Geometric);
  std::ostringstream out;
  write_scan_csv(out, scan, "d1", 3);
  EXPECT_EQ(out.str().rfind("# config_digest=d1 seed=3\nL,n,gap,lambda2,construction_residual\n", 0), 0u);
}

}  // namespace
}  // namespace pdrwm

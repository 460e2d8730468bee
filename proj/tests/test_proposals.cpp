#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "pdrwm/errors.hpp"
#include "pdrwm/proposals.hpp"

namespace pdrwm {
namespace {

using boost::math::quadrature::gauss_kronrod;
using Big = boost::multiprecision::cpp_bin_float_50;

double log_phi_oracle(double x) {
  const Big v = boost::math::erfc(-Big(x) / boost::multiprecision::sqrt(Big(2))) / 2;
  return static_cast<double>(boost::multiprecision::log(v));
}

TEST(Proposals, GaussianDensityIntegratesToOne) {
  const GaussianProposal k(power_field(1.0), 0.7);
  for (double x : {0.0, 3.0, -12.0}) {
    const double sd = std::sqrt(0.7 * (1 + std::fabs(x)));
    const double mass = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return std::exp(k.log_q(point1(y), point1(x))); }, x - 12 * sd, x + 12 * sd,
        10, 1e-13);
    EXPECT_NEAR(mass, 1.0, 1e-10);
  }
}

TEST(Proposals, GaussianSampleMoments) {
  Matrix s(2, 2);
  s << 1.0, 0.4, 0.4, 2.0;
  const GaussianProposal k(constant_field(s), 0.5);
  std::mt19937_64 rng(5);
  const Point x = point2(1.0, -2.0);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d d = k.sample(x, rng) - x;
    mean += d;
    cov += d * d.transpose();
  }
  mean /= n;
  cov /= n;
  EXPECT_LT(mean.norm(), 0.01);
  EXPECT_LT((cov - 0.5 * s).cwiseAbs().maxCoeff(), 0.015);
}

TEST(Proposals, CircleAndEllipseAreUniformOnTheirSets) {
  std::mt19937_64 rng(9);
  const CircleProposal c;
  const Point x = point2(0.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const Point y = c.sample(x, rng);
    EXPECT_LE((y - x).norm(), 1.0);
    EXPECT_NEAR(c.log_q(y, x), -std::log(std::numbers::pi), 1e-14);
  }
  EXPECT_EQ(c.log_q(point2(0.0, 5.5), x), -std::numeric_limits<double>::infinity());

  const EllipseProposal e;
  EXPECT_NEAR(EllipseProposal::semi_width(point2(0.0, 3.4)), 1.0 / 9.0, 1e-15);
  for (int i = 0; i < 2000; ++i) {
    const Point y = e.sample(x, rng);
    const double w = EllipseProposal::semi_width(x);
    EXPECT_LE(std::pow((y(0) - x(0)) / w, 2) + std::pow(y(1) - x(1), 2), 1.0 + 1e-12);
    EXPECT_NEAR(e.log_q(y, x), -std::log(std::numbers::pi * w), 1e-12);
  }
}

TEST(Proposals, LogNormalCdfMatchesHighPrecisionOracle) {
  for (double x : {-40.0, -12.0, -3.0, -0.5, 0.0, 1.0, 6.0, 9.0}) {
    const double ref = log_phi_oracle(x);
    EXPECT_NEAR(log_normal_cdf(x), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
    EXPECT_NEAR(log_normal_sf(-x), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
  }
}

TEST(Proposals, TruncatedMgfMatchesQuadrature) {
  struct Case {
    TruncatedGaussianSpec spec;
    double t;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const Case cases[] = {{{0.0, 1.0, -1.0, 2.0}, 0.7},
                        {{1.0, 2.0, 0.5, inf}, -0.4},
                        {{-1.0, 0.5, -inf, 0.0}, 1.3},
                        {{0.0, 1.0, 6.0, 8.0}, 0.2}};
  for (const auto& c : cases) {
    const auto& s = c.spec;
    const double lo = std::max(s.a, s.mu - 40 * s.sigma), hi = std::min(s.b, s.mu + 40 * s.sigma);
    auto phi = [&](double y) { return std::exp(-0.5 * std::pow((y - s.mu) / s.sigma, 2)); };
    const double z = gauss_kronrod<double, 61>::integrate(phi, lo, hi, 15, 1e-14);
    const double m = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return std::exp(c.t * y) * phi(y); }, lo, hi, 15, 1e-14);
    const double mean = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return y * phi(y); }, lo, hi, 15, 1e-14);
    EXPECT_NEAR(truncated_mgf(s, c.t), m / z, 1e-9 * m / z);
    EXPECT_NEAR(truncated_log_mgf(s, c.t), std::log(m / z), 1e-9);
    EXPECT_NEAR(truncated_mean(s), mean / z, 1e-9 * (1 + std::fabs(mean / z)));
  }
  EXPECT_THROW(truncated_mgf({0.0, 1.0, 2.0, 1.0}, 0.1), ParameterError);
}

TEST(Proposals, TailBoundDominatesAndIsTight) {
  for (double x = 0.1; x <= 30.0; x *= 1.1) {
    const double q = std::exp(log_phi_oracle(-x));
    EXPECT_GT(gaussian_tail_bound(x), q) << x;
    if (x > 5) EXPECT_LT(gaussian_tail_bound(x) / q - 1, 1.5 / (x * x));
  }
  EXPECT_THROW(gaussian_tail_bound(0.0), ParameterError);
}

}  // namespace
}  // namespace pdrwm

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "pdrwm/errors.hpp"
#include "pdrwm/target_densities.hpp"

namespace pdrwm {
namespace {

TEST(TargetDensities, ExponentialLogRatioIsLinearInAbsX) {
  for (double a : {0.5, 1.0, 2.5}) {
    const auto t = make_exponential_tail(a);
    for (double x : {-30.0, -1.5, 0.3, 7.0, 120.0})
      EXPECT_NEAR(t.log_density(x) - t.log_density(0.0), -a * std::fabs(x), 1e-12 * (1 + std::fabs(x)));
  }
}

TEST(TargetDensities, SubexponentialAndPolynomialShapes) {
  const auto s = make_subexponential_tail(2.0, 0.5);
  EXPECT_NEAR(s.log_density(16.0) - s.log_density(0.0), -8.0, 1e-12);
  EXPECT_NEAR(s.log_density(-16.0), s.log_density(16.0), 0.0);
  const auto p = make_polynomial_tail(3.0);
  EXPECT_NEAR(p.log_density(9.0) - p.log_density(0.0), -3.0 * std::log(10.0), 1e-12);
}

TEST(TargetDensities, NormalAndRidge) {
  const auto n = make_standard_normal();
  EXPECT_NEAR(n.log_density(2.0) - n.log_density(0.0), -2.0, 1e-14);
  const auto r = make_ridge_2d();
  EXPECT_EQ(r.dim(), 2);
  const double x = 1.5, y = -0.7;
  EXPECT_NEAR(r.log_density(point2(x, y)) - r.log_density(point2(0, 0)),
              -x * x - y * y - x * x * y * y, 1e-13);
}

TEST(TargetDensities, RectangleLevelsAndSupport) {
  const auto t = make_rectangle();
  for (int k = 1; k <= 10; ++k) {
    const double w = std::pow(3.0, 1 - k);
    const Point inside = point2(0.9 * w, k + 0.5);
    EXPECT_EQ(rectangle_level(inside), k);
    EXPECT_TRUE(t.in_support(inside));
    EXPECT_NEAR(t.log_density(inside) - t.log_density(point2(0, 1.5)), -(k - 1) * std::log(3.0), 1e-12);
    EXPECT_FALSE(t.in_support(point2(1.1 * w, k + 0.5)));
    EXPECT_EQ(t.log_density(point2(1.1 * w, k + 0.5)), -std::numeric_limits<double>::infinity());
  }
  EXPECT_FALSE(t.in_support(point2(0.0, 0.99)));
  // Level k contributes width 2*3^{1-k} times density 3^{-k}.
  double mass = 0;
  for (int k = 1; k < 60; ++k) mass += 2 * std::pow(3.0, 1 - k) * std::pow(3.0, -k);
  EXPECT_NEAR(rectangle_total_mass(), mass, 1e-14);
}

TEST(TargetDensities, SymmetryProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  const TargetDensity targets[] = {make_exponential_tail(1.3), make_subexponential_tail(1, 0.3),
                                   make_polynomial_tail(1.5), make_standard_normal()};
  for (const auto& t : targets)
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      EXPECT_EQ(t.log_density(x), t.log_density(-x));
      EXPECT_LE(t.log_density(std::fabs(x) + 1), t.log_density(x));
    }
}

TEST(TargetDensities, ParameterValidation) {
  EXPECT_THROW(make_exponential_tail(0.0), ParameterError);
  EXPECT_THROW(make_subexponential_tail(1.0, 1.0), ParameterError);
  EXPECT_THROW(make_polynomial_tail(0.5), ParameterError);
  EXPECT_THROW(make_standard_normal().log_density(point2(0, 0)), ParameterError);
}

}  // namespace
}  // namespace pdrwm

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pdrwm/diagnostics.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/mh_core.hpp"
#include "pdrwm/rectangle_geometry.hpp"

namespace pdrwm {
namespace {

// Hit-or-miss estimate of |shape ∩ level k| with its standard error.
std::pair<double, double> hit_or_miss(const Shape& shape, int k, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto level = LevelRectangle::level(k);
  const Point c = std::visit([](const auto& s) { return s.centre; }, shape);
  const double w = std::holds_alternative<Ellipse>(shape) ? std::get<Ellipse>(shape).semi_width : 1.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng), b = u(rng);
    if (a * a + b * b > 1) continue;
    const double y1 = c(0) + w * a, y2 = c(1) + b;
    if (y2 >= level.y2_lo && y2 < level.y2_hi && std::fabs(y1) <= level.half_width) ++hits;
  }
  const double box = 4 * w, p = double(hits) / n;
  return {box * p, box * std::sqrt(p * (1 - p) / n)};
}

TEST(RectangleGeometry, LevelRectangles) {
  const auto l = LevelRectangle::level(3);
  EXPECT_EQ(l.y2_lo, 3.0);
  EXPECT_EQ(l.y2_hi, 4.0);
  EXPECT_NEAR(l.half_width, 1.0 / 9.0, 1e-16);
  EXPECT_NEAR(l.density_weight, 1.0 / 27.0, 1e-16);
  EXPECT_THROW(LevelRectangle::level(0), ParameterError);
}

TEST(RectangleGeometry, DiscInLevelOneClosedForm) {
  // Disc at (0, 1.5): the strip cuts it at +-0.5, the width never binds.
  EXPECT_NEAR(overlap_area(Disc{point2(0, 1.5)}, 1), std::sqrt(0.75) + std::numbers::pi / 3, 1e-10);
  EXPECT_NEAR(overlap_area(Disc{point2(0, 1.5)}, 1, 1.5, 10.0),
              0.5 * (std::sqrt(0.75) + std::numbers::pi / 3), 1e-10);
  EXPECT_EQ(overlap_area(Disc{point2(0, 1.5)}, 5), 0.0);
}

TEST(RectangleGeometry, OverlapMatchesHitOrMiss) {
  const Shape shapes[] = {Disc{point2(0.3, 3.2)}, Disc{point2(-0.05, 5.7)},
                          Ellipse{point2(0.02, 4.5), 1.0 / 27.0}, Ellipse{point2(0.5, 2.9), 1.0 / 3.0}};
  std::uint64_t seed = 1;
  for (const auto& s : shapes)
    for (int k = 1; k <= 7; ++k) {
      const double q = overlap_area(s, k);
      const auto [mc, se] = hit_or_miss(s, k, 400000, seed++);
      EXPECT_LT(std::fabs(q - mc), 4 * se + 1e-12) << "level " << k;
    }
}

TEST(RectangleGeometry, ExactRejectionMatchesMonteCarlo) {
  const auto t = make_rectangle();
  for (const Point& x : {point2(0.0, 3.0), point2(0.1, 2.4), point2(0.0, 5.5)}) {
    const auto r = rejection_probability(t, CircleProposal{}, x, 200000, 5);
    EXPECT_LT(std::fabs(exact_rejection_QR(x) - r.value), 4 * r.std_error + 1e-12);
  }
  for (const Point& x : {point2(0.0, 3.5), point2(0.2, 2.1), point2(0.001, 6.9)}) {
    const auto r = rejection_probability(t, EllipseProposal{}, x, 200000, 6);
    EXPECT_LT(std::fabs(exact_rejection_QP(x) - r.value), 4 * r.std_error + 1e-12);
  }
  EXPECT_THROW(exact_rejection_QR(point2(0.5, 3.5)), DomainError);
  EXPECT_THROW(exact_rejection_QP(point2(0.0, 0.5)), DomainError);
}

TEST(RectangleGeometry, BoundsAndTheirOrdering) {
  EXPECT_THROW(exact_rejection_lower_bound_QR(2), ParameterError);
  for (int p = 3; p <= 10; ++p) {
    const double exact = exact_rejection_QR(point2(0.0, p));
    EXPECT_GE(exact, corrected_rejection_lower_bound_QR(p) - 1e-9);
    EXPECT_LT(corrected_rejection_lower_bound_QR(p), exact_rejection_lower_bound_QR(p));
    EXPECT_NEAR(1 - corrected_rejection_lower_bound_QR(p), 2 * (1 - exact_rejection_lower_bound_QR(p)),
                1e-15);
  }
}

// Under the ellipse proposal a move is all-or-nothing: accepted iff x is in E_y.
TEST(RectangleGeometry, EllipseAcceptanceIsZeroOne) {
  const auto t = make_rectangle();
  const EllipseProposal k;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 3000; ++i) {
    const double x2 = 1.0 + 8.0 * u(rng);
    const double w = std::pow(3.0, 1 - std::floor(x2));
    const Point x = point2(w * (2 * u(rng) - 1), x2);
    const Point y = k.sample(x, rng);
    const double a = std::exp(log_accept_ratio(t, k, x, y));
    bool in_ey = false;
    if (t.in_support(y)) {
      const double wy = EllipseProposal::semi_width(y);
      in_ey = std::pow((x(0) - y(0)) / wy, 2) + std::pow(x(1) - y(1), 2) <= 1;
    }
    EXPECT_NEAR(a, in_ey ? 1.0 : 0.0, 1e-12);
  }
}

TEST(RectangleGeometry, HemisphereSweep) {
  const auto rows = hemisphere_sweep(2, 12);
  EXPECT_EQ(rows.size(), 99u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.check.passes) << r.k << " " << r.x1 << " " << r.x2;
    EXPECT_GE(r.check.lower_overlap, r.check.upper_overlap);
    EXPECT_TRUE(ellipse_crosses_level_boundary(point2(r.x1, r.x2)));
  }
  EXPECT_THROW(hemisphere_overlap_check(1, point2(0, 1.5)), ParameterError);
  EXPECT_THROW(hemisphere_overlap_check(3, point2(0, 4.5)), DomainError);
}

}  // namespace
}  // namespace pdrwm

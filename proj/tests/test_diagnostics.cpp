#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pdrwm/diagnostics.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/rectangle_geometry.hpp"

namespace pdrwm {
namespace {

TEST(Lyapunov, ValuesAndOverflow) {
  const LyapunovFunction e(lyapunov::ExpAbs{0.5});
  EXPECT_NEAR(e.evaluate(point1(-4.0)), std::exp(2.0), 1e-12);
  const LyapunovFunction ep(lyapunov::ExpAbsPow{0.25, 0.5});
  EXPECT_NEAR(ep.log_evaluate(point1(16.0)), 1.0, 1e-14);
  const LyapunovFunction p(lyapunov::AbsPow{0.25});
  EXPECT_EQ(p.evaluate(point1(0.3)), 1.0);
  EXPECT_NEAR(p.evaluate(point1(81.0)), 3.0, 1e-12);
  const LyapunovFunction r(lyapunov::RectangleV{});
  EXPECT_EQ(r.evaluate(point2(0.2, -3.0)), 4.0);
  EXPECT_EQ(r.evaluate(point2(2.5, 3.0)), 5.5);
  EXPECT_THROW(e.evaluate(point1(5000.0)), NumericError);
  EXPECT_NEAR(e.log_evaluate(point1(5000.0)), 2500.0, 1e-9);
}

TEST(Diagnostics, DriftMonteCarloMatchesQuadrature) {
  const auto t = make_exponential_tail(1.0);
  const auto f = power_field(1.0);
  const GaussianProposal k(f, 1.0);
  const LyapunovFunction v(lyapunov::ExpAbs{0.5});
  for (double x : {2.0, 15.0, 60.0}) {
    const auto mc = drift_ratio(t, k, v, point1(x), 200000, 5);
    const double quad = drift_ratio_quadrature(t, f, 1.0, v, x);
    EXPECT_LT(std::fabs(mc.value - quad), 4 * mc.std_error + 1e-12) << x;
    EXPECT_EQ(mc.truncated_mass, 0.0);
  }
}

TEST(Diagnostics, RejectionMonteCarloMatchesQuadrature) {
  const auto t = make_polynomial_tail(2.0);
  const auto f = quadratic_field(1.0);
  const GaussianProposal k(f, 0.5);
  for (double x : {0.0, 5.0, 100.0}) {
    const auto mc = rejection_probability(t, k, point1(x), 200000, 6);
    const double quad = rejection_probability_quadrature(t, f, 0.5, x);
    EXPECT_LT(std::fabs(mc.value - quad), 4 * mc.std_error + 1e-12) << x;
  }
}

TEST(Diagnostics, IdentityKernelHasUnitDriftAndNoRejection) {
  const auto t = make_exponential_tail(1.0);
  const IdentityProposal k(1);
  const LyapunovFunction v(lyapunov::ExpAbs{0.5});
  const auto d = drift_ratio(t, k, v, point1(7.0), 1000, 1);
  EXPECT_DOUBLE_EQ(d.value, 1.0);
  EXPECT_EQ(rejection_probability(t, k, point1(7.0), 1000, 1).value, 0.0);
  EXPECT_THROW(drift_ratio(t, k, v, point1(7.0), 999, 1), ParameterError);
}

TEST(Diagnostics, AcceptanceSetProfileIsNonIncreasing) {
  const auto t = make_exponential_tail(1.0);
  const GaussianProposal k(power_field(4.0), 1.0);
  const auto alphas = acceptance_samples(t, k, point1(20.0), 20000, 3);
  std::vector<double> eps;
  for (int i = 1; i < 50; ++i) eps.push_back(i / 50.0);
  const auto prof = acceptance_set_profile(alphas, eps);
  for (std::size_t i = 1; i < prof.size(); ++i) EXPECT_LE(prof[i], prof[i - 1]);
  const auto mass = acceptance_set_mass(t, k, point1(20.0), eps[4], 20000, 3);
  EXPECT_DOUBLE_EQ(mass.value, prof[4]);
  EXPECT_THROW(acceptance_set_mass(t, k, point1(20.0), 1.0, 20000, 3), ParameterError);
}

// The circle-proposal rejection at (0, p) dominates the full-area bound.
TEST(Diagnostics, RectangleRejectionAboveCorrectedBound) {
  const auto t = make_rectangle();
  const CircleProposal k;
  for (int p = 3; p <= 7; ++p) {
    const auto r = rejection_probability(t, k, point2(0.0, p), 100000, 10 + p);
    EXPECT_GE(r.value + 4 * r.std_error, corrected_rejection_lower_bound_QR(p)) << p;
  }
}

TEST(Diagnostics, TailAcceptanceProfileConstantField) {
  const auto t = make_exponential_tail(1.0);
  const auto prof = tail_acceptance_profile(t, constant_field(Matrix::Identity(1, 1)), 1.0, 30.0,
                                            {-1.0, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(prof[0], 1.0);
  EXPECT_NEAR(prof[1], std::exp(-0.5), 1e-14);
  EXPECT_NEAR(prof[2], std::exp(-2.0), 1e-14);
  EXPECT_THROW(tail_acceptance_profile(t, power_field(1.0), 1.0, 5.0, {1.0}), ParameterError);
}

TEST(Diagnostics, TuningHitsTargetRate) {
  const auto t = make_standard_normal();
  const auto f = power_field(1.0);
  const double h = tune_step_size(t, f, point1(0.0), 0.44, 10000, 7);
  EXPECT_NEAR(chain_acceptance_rate(t, f, h, point1(0.0), 10000, 7), 0.44, 0.01);
  EXPECT_NEAR(chain_acceptance_rate(t, f, h, point1(0.0), 50000, 99), 0.44, 0.03);
}

TEST(Diagnostics, EsjdOfFrozenChainIsZero) {
  const auto traj = run_chain(make_standard_normal(), IdentityProposal(1), point1(0.5), 100, 1);
  EXPECT_EQ(esjd(traj).value, 0.0);
  EsjdOptions opts;
  opts.h = 1.0;
  const auto scan = esjd_scan(make_standard_normal(), {0.0, 1.0}, 20000, 3, opts);
  ASSERT_EQ(scan.size(), 2u);
  for (const auto& p : scan) {
    EXPECT_EQ(p.h, 1.0);
    EXPECT_GT(p.esjd, 0.0);
  }
}

TEST(Diagnostics, ReportValidationAndCsv) {
  DiagnosticReport r;
  r.probe_name = "drift";
  r.config_digest = "ff";
  r.grid = {1.0, 2.0};
  r.values = {0.9};
  r.std_errors = {0.01, 0.02};
  EXPECT_THROW(r.validate(), ParameterError);
  r.values.push_back(0.8);
  r.n_samples = 1000;
  r.seed = 9;
  std::ostringstream out;
  r.write_csv(out);
  EXPECT_EQ(out.str().rfind("# config_digest=ff seed=9\nprobe,x,estimate,se,n,seed\n", 0), 0u);
}

}  // namespace
}  // namespace pdrwm

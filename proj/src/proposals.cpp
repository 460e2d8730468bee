#include "pdrwm/proposals.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

// Uniform point in the unit disc by the polar method, radius sqrt(u).
std::pair<double, double> unit_disc_sample(Rng& rng) {
  const double r = std::sqrt(std::generate_canonical<double, 53>(rng));
  const double theta = 2.0 * std::numbers::pi * std::generate_canonical<double, 53>(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

double log_normal_pdf(double x) { return -0.5 * kLog2Pi - 0.5 * x * x; }

}  // namespace

GaussianProposal::GaussianProposal(CovarianceField field, double h) : field_(std::move(field)), h_(h) {
  if (!(h > 0)) throw ParameterError("gaussian_proposal: h must be positive");
}

Point GaussianProposal::sample(const Point& x, Rng& rng) const {
  std::normal_distribution<double> normal;
  Eigen::VectorXd xi(field_.dim());
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = normal(rng);
  return sample_from_normal(x, xi);
}

Point GaussianProposal::sample_from_normal(const Point& x, const Eigen::VectorXd& xi) const {
  const MetricAtPoint metric = factorize(field_, x);
  return x + std::sqrt(h_) * (metric.cholesky_lower() * xi);
}

double GaussianProposal::log_q(const Point& y, const Point& x) const {
  const MetricAtPoint metric = factorize(field_, x);
  const double d = static_cast<double>(field_.dim());
  const Eigen::VectorXd diff = y - x;
  return -0.5 * d * (kLog2Pi + std::log(h_)) - 0.5 * metric.log_det_inv_metric() -
         metric.quad_form_metric(diff) / (2.0 * h_);
}

std::string GaussianProposal::description() const {
  return "gaussian(" + field_.description() + ",h=" + format_double(h_) + ")";
}

Point CircleProposal::sample(const Point& x, Rng& rng) const {
  const auto [u, v] = unit_disc_sample(rng);
  return point2(x(0) + u, x(1) + v);
}

double CircleProposal::log_q(const Point& y, const Point& x) const {
  if ((y - x).squaredNorm() > 1.0) return kNegInf;
  return -std::log(std::numbers::pi);
}

double EllipseProposal::semi_width(const Point& x) {
  return std::pow(3.0, 1.0 - std::floor(x(1)));
}

Point EllipseProposal::sample(const Point& x, Rng& rng) const {
  const auto [u, v] = unit_disc_sample(rng);
  return point2(x(0) + semi_width(x) * u, x(1) + v);
}

double EllipseProposal::log_q(const Point& y, const Point& x) const {
  const double w = semi_width(x);
  const double d1 = (y(0) - x(0)) / w;
  const double d2 = y(1) - x(1);
  if (d1 * d1 + d2 * d2 > 1.0) return kNegInf;
  return -std::log(std::numbers::pi * w);
}

double IdentityProposal::log_q(const Point& y, const Point& x) const {
  return y == x ? 0.0 : kNegInf;
}

std::unique_ptr<ProposalKernel> gaussian_proposal(CovarianceField field, double h) {
  return std::make_unique<GaussianProposal>(std::move(field), h);
}
std::unique_ptr<ProposalKernel> circle_proposal() { return std::make_unique<CircleProposal>(); }
std::unique_ptr<ProposalKernel> ellipse_proposal() { return std::make_unique<EllipseProposal>(); }

double log_normal_cdf(double x) {
  if (std::isnan(x)) return x;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  if (x == -std::numeric_limits<double>::infinity()) return kNegInf;
  if (x < -20.0) {
    // Asymptotic series for the lower tail; relative error < 1e-10 here.
    const double z = 1.0 / (x * x);
    const double series = 1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)));
    return log_normal_pdf(x) - std::log(-x) + std::log(series);
  }
  if (x < 0.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
}

double log_normal_sf(double x) { return log_normal_cdf(-x); }

double log_normal_interval(double lo, double hi) {
  if (!(lo < hi)) return kNegInf;
  if (hi <= 0.0) {
    const double lh = log_normal_cdf(hi);
    return lh + std::log1p(-std::exp(log_normal_cdf(lo) - lh));
  }
  if (lo >= 0.0) {
    const double ll = log_normal_sf(lo);
    return ll + std::log1p(-std::exp(log_normal_sf(hi) - ll));
  }
  return std::log1p(-(std::exp(log_normal_cdf(lo)) + std::exp(log_normal_sf(hi))));
}

double truncated_log_normaliser(const TruncatedGaussianSpec& spec) {
  if (!(spec.sigma > 0)) throw ParameterError("truncated gaussian: sigma must be positive");
  if (!(spec.a < spec.b)) throw ParameterError("truncated gaussian: need a < b");
  const double log_z = log_normal_interval((spec.a - spec.mu) / spec.sigma,
                                           (spec.b - spec.mu) / spec.sigma);
  if (!std::isfinite(log_z)) throw ParameterError("truncated gaussian: interval has no mass");
  return log_z;
}

double truncated_log_mgf(const TruncatedGaussianSpec& spec, double t) {
  const double log_z = truncated_log_normaliser(spec);
  const double lo = (spec.a - spec.mu) / spec.sigma;
  const double hi = (spec.b - spec.mu) / spec.sigma;
  const double st = spec.sigma * t;
  return spec.mu * t + 0.5 * st * st + log_normal_interval(lo - st, hi - st) - log_z;
}

double truncated_mgf(const TruncatedGaussianSpec& spec, double t) {
  return std::exp(truncated_log_mgf(spec, t));
}

double truncated_mean(const TruncatedGaussianSpec& spec) {
  const double log_z = truncated_log_normaliser(spec);
  const double lo = (spec.a - spec.mu) / spec.sigma;
  const double hi = (spec.b - spec.mu) / spec.sigma;
  const double upper = std::isfinite(lo) ? std::exp(log_normal_pdf(lo) - log_z) : 0.0;
  const double lower = std::isfinite(hi) ? std::exp(log_normal_pdf(hi) - log_z) : 0.0;
  return spec.mu + spec.sigma * (upper - lower);
}

double gaussian_tail_bound(double x) {
  if (!(x > 0)) throw ParameterError("gaussian_tail_bound: x must be positive");
  return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * x);
}

}  // namespace pdrwm

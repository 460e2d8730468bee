#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "pdrwm/covariance_fields.hpp"
#include "pdrwm/types.hpp"

namespace pdrwm {

/// Candidate generator Q(x, dy) = q(y | x) dy.
class ProposalKernel {
 public:
  virtual ~ProposalKernel() = default;

  virtual int dim() const = 0;
  virtual Point sample(const Point& x, Rng& rng) const = 0;
  /// log q(y | x); -infinity off the support of Q(x, .).
  virtual double log_q(const Point& y, const Point& x) const = 0;
  virtual std::string description() const = 0;

  /// Present for the Gaussian PDRWM kernel, which also admits the
  /// closed-form acceptance ratio.
  virtual const CovarianceField* field() const { return nullptr; }
  virtual double step_size() const { return 0.0; }
};

/// N(x, h G^{-1}(x)).
class GaussianProposal final : public ProposalKernel {
 public:
  GaussianProposal(CovarianceField field, double h);

  int dim() const override { return field_.dim(); }
  Point sample(const Point& x, Rng& rng) const override;
  double log_q(const Point& y, const Point& x) const override;
  std::string description() const override;

  const CovarianceField* field() const override { return &field_; }
  double step_size() const override { return h_; }

  /// Same as sample() but with a caller-supplied standard normal vector;
  /// used for common-random-number probes.
  Point sample_from_normal(const Point& x, const Eigen::VectorXd& xi) const;

 private:
  CovarianceField field_;
  double h_;
};

/// Uniform on the unit disc about x (dim 2).
class CircleProposal final : public ProposalKernel {
 public:
  int dim() const override { return 2; }
  Point sample(const Point& x, Rng& rng) const override;
  double log_q(const Point& y, const Point& x) const override;
  std::string description() const override { return "circle"; }
};

/// Uniform on the ellipse about x with horizontal semi-axis 3^{1-int(x2)}
/// and vertical semi-axis 1 (dim 2).
class EllipseProposal final : public ProposalKernel {
 public:
  int dim() const override { return 2; }
  Point sample(const Point& x, Rng& rng) const override;
  double log_q(const Point& y, const Point& x) const override;
  std::string description() const override { return "ellipse"; }

  static double semi_width(const Point& x);
};

/// Proposes y = x always; P is then the identity.
class IdentityProposal final : public ProposalKernel {
 public:
  explicit IdentityProposal(int dim) : dim_(dim) {}

  int dim() const override { return dim_; }
  Point sample(const Point& x, Rng&) const override { return x; }
  double log_q(const Point& y, const Point& x) const override;
  std::string description() const override { return "identity"; }

 private:
  int dim_;
};

std::unique_ptr<ProposalKernel> gaussian_proposal(CovarianceField field, double h);
std::unique_ptr<ProposalKernel> circle_proposal();
std::unique_ptr<ProposalKernel> ellipse_proposal();

/// Truncated Gaussian N^T_{[a,b]}(mu, sigma^2); a or b may be infinite.
struct TruncatedGaussianSpec {
  double mu = 0.0;
  double sigma = 1.0;
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();
};

/// log Phi(x), accurate in both tails.
double log_normal_cdf(double x);
/// log(1 - Phi(x)), accurate in both tails.
double log_normal_sf(double x);
/// log(Phi(hi) - Phi(lo)) for lo < hi.
double log_normal_interval(double lo, double hi);

/// log Z_{a,b} = log(Phi(B) - Phi(A)); throws ParameterError for a
/// degenerate interval.
double truncated_log_normaliser(const TruncatedGaussianSpec& spec);

/// E[e^{tX}], evaluated in the log domain.
double truncated_mgf(const TruncatedGaussianSpec& spec, double t);
double truncated_log_mgf(const TruncatedGaussianSpec& spec, double t);

/// E[X] = mu + sigma (phi(A) - phi(B)) / Z_{a,b}.
double truncated_mean(const TruncatedGaussianSpec& spec);

/// e^{-x^2/2} / (sqrt(2 pi) x), an upper bound on 1 - Phi(x) for x > 0.
double gaussian_tail_bound(double x);

}  // namespace pdrwm

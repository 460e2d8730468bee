#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pdrwm/target_densities.hpp"
#include "pdrwm/types.hpp"

namespace pdrwm {

namespace growth {
struct Bounded {};
struct SubQuadratic {
  double gamma;
};
struct Quadratic {};
struct SuperQuadratic {
  double gamma;
};
struct HigherDim {};
}  // namespace growth

using GrowthClass = std::variant<growth::Bounded, growth::SubQuadratic, growth::Quadratic,
                                 growth::SuperQuadratic, growth::HigherDim>;

std::string describe(const GrowthClass& growth_class);

/// Asymptotic exponent gamma with G^{-1}(x) ~ |x|^gamma (0 for Bounded, 2 for
/// Quadratic); NaN for HigherDim.
double growth_exponent(const GrowthClass& growth_class);

/// Position-dependent proposal covariance x -> G^{-1}(x).
///
/// Fields are frozen at construction and safe for concurrent evaluation.
class CovarianceField {
 public:
  using InvMetricFn = std::function<Matrix(const Point&)>;

  CovarianceField(int dim, InvMetricFn inv_metric, GrowthClass growth_class,
                  std::string description);

  int dim() const { return dim_; }
  const GrowthClass& growth_class() const { return growth_class_; }
  const std::string& description() const { return description_; }

  Matrix inv_metric(const Point& x) const;

 private:
  int dim_;
  InvMetricFn inv_metric_;
  GrowthClass growth_class_;
  std::string description_;
};

/// G^{-1}(x) together with its Cholesky factor, giving the log-determinant
/// and the quadratic form v^T G(x) v without forming G(x).
class MetricAtPoint {
 public:
  /// Throws NumericError (mentioning x) when the matrix is not SPD.
  MetricAtPoint(const Point& x, Matrix inv_metric);

  const Matrix& inv_metric() const { return inv_metric_; }
  /// Lower-triangular L with L L^T = G^{-1}(x).
  Matrix cholesky_lower() const { return llt_.matrixL(); }
  double log_det_inv_metric() const { return log_det_; }
  /// v^T G(x) v.
  double quad_form_metric(const Eigen::VectorXd& v) const;

 private:
  Matrix inv_metric_;
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
};

MetricAtPoint factorize(const CovarianceField& field, const Point& x);

/// G^{-1}(x) = sigma everywhere.
CovarianceField constant_field(const Matrix& sigma);

/// G^{-1}(x) = (1 + |x|)^b I; b >= 0.
CovarianceField power_field(double b, int dim = 1);

/// G^{-1}(x) = offset + x^2 in one dimension (Quadratic growth).
CovarianceField quadratic_field(double offset = 1.0);

/// G^{-1}(x) = min(pi(x)^{-1}, cap) I.
CovarianceField tempered_langevin_field(const TargetDensity& target, double cap = 1e12);

struct Region {
  std::function<bool(const Point&)> contains;
  Matrix sigma;
  std::string label;
};

/// Radial shells |x| in [r_{i-1}, r_i) (r_0 = 0, last shell unbounded);
/// sigmas.size() must equal radii.size() + 1.
std::vector<Region> radial_regions(const std::vector<double>& radii,
                                   const std::vector<Matrix>& sigmas);

/// G^{-1}(x) = sigma_i for the region containing x. With strict = true a
/// point matching zero or several regions throws PartitionError; otherwise
/// the last listed match wins (zero matches still throw).
CovarianceField regional_field(std::vector<Region> regions, bool strict = true);

/// Number of points (out of points.size()) that do not match exactly one
/// region.
std::size_t partition_violations(const std::vector<Region>& regions,
                                 const std::vector<Point>& points);

using MixtureWeightsFn = std::function<Eigen::VectorXd(const Point&)>;

/// G^{-1}(x) = sum_k w_k(x) sigma_k with w(x) on the simplex (checked at
/// every evaluation, tolerance 1e-10).
CovarianceField mixture_field(MixtureWeightsFn weights, std::vector<Matrix> sigmas);

/// Normalised Gaussian responsibilities w_k(x) ~ exp(-|x - c_k|^2 / (2 s^2)).
MixtureWeightsFn gaussian_responsibilities(std::vector<Point> centres, double bandwidth);

class PastSampleSet {
 public:
  explicit PastSampleSet(std::vector<Point> points);

  /// One point per row, comma or whitespace separated; lines starting with
  /// '#' and a non-numeric header row are skipped.
  static PastSampleSet from_csv(const std::filesystem::path& path);

  int dim() const { return static_cast<int>(points_.front().size()); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> points_;
};

/// G^{-1}(x) = gamma^2 I + nu^2 M_x H M_x^T with Gaussian kernel gradients
/// M_x = 2 [grad_x k(z_1, x), ..., grad_x k(z_n, x)] and centring matrix H.
CovarianceField kernel_adaptive_field(const PastSampleSet& samples, double gamma, double nu,
                                      double kernel_width);

using WeightFn = std::function<double(const Point& x, const Point& z)>;

/// G^{-1}(x) = sum_i w(x, z_i) (z_i - x)(z_i - x)^T + ridge I. The weights
/// must be non-negative and sum to one at every x (tolerance 1e-10).
CovarianceField weighted_empirical_field(const PastSampleSet& samples, WeightFn weight,
                                         double ridge);

/// w(x, z) = exp(-|x - z|^2 / (2 s^2)) / sum_i exp(-|x - z_i|^2 / (2 s^2)).
WeightFn normalized_gaussian_weights(const PastSampleSet& samples, double bandwidth);

}  // namespace pdrwm

#include "pdrwm/covariance_fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string point_text(const Point& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += format_double(x(i));
  }
  return out + ")";
}

void require_spd(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ParameterError(what + ": matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ParameterError(what + ": matrix is not symmetric");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw ParameterError(what + ": matrix is not positive definite");
}

GrowthClass classify_power(double b) {
  if (b == 0) return growth::Bounded{};
  if (b < 2) return growth::SubQuadratic{b};
  if (b == 2) return growth::Quadratic{};
  return growth::SuperQuadratic{b};
}

double squared_distance(const Point& a, const Point& b) { return (a - b).squaredNorm(); }

}  // namespace

std::string describe(const GrowthClass& growth_class) {
  return std::visit(
      Overloaded{
          [](const growth::Bounded&) { return std::string("Bounded"); },
          [](const growth::SubQuadratic& g) { return "SubQuadratic(" + format_double(g.gamma) + ")"; },
          [](const growth::Quadratic&) { return std::string("Quadratic"); },
          [](const growth::SuperQuadratic& g) {
            return "SuperQuadratic(" + format_double(g.gamma) + ")";
          },
          [](const growth::HigherDim&) { return std::string("HigherDim"); },
      },
      growth_class);
}

double growth_exponent(const GrowthClass& growth_class) {
  return std::visit(Overloaded{
                        [](const growth::Bounded&) { return 0.0; },
                        [](const growth::SubQuadratic& g) { return g.gamma; },
                        [](const growth::Quadratic&) { return 2.0; },
                        [](const growth::SuperQuadratic& g) { return g.gamma; },
                        [](const growth::HigherDim&) {
                          return std::numeric_limits<double>::quiet_NaN();
                        },
                    },
                    growth_class);
}

CovarianceField::CovarianceField(int dim, InvMetricFn inv_metric, GrowthClass growth_class,
                                 std::string description)
    : dim_(dim),
      inv_metric_(std::move(inv_metric)),
      growth_class_(growth_class),
      description_(std::move(description)) {
  if (dim_ < 1) throw ParameterError("field dimension must be positive");
}

Matrix CovarianceField::inv_metric(const Point& x) const {
  if (x.size() != dim_) throw ParameterError("point dimension does not match field");
  return inv_metric_(x);
}

MetricAtPoint::MetricAtPoint(const Point& x, Matrix inv_metric)
    : inv_metric_(std::move(inv_metric)), llt_(inv_metric_) {
  if (llt_.info() != Eigen::Success || !inv_metric_.allFinite())
    throw NumericError("covariance field is not SPD at x = " + point_text(x));
  const auto diag = llt_.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0)) throw NumericError("covariance field is singular at x = " + point_text(x));
    log_det_ += 2.0 * std::log(diag(i));
  }
}

double MetricAtPoint::quad_form_metric(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd w = llt_.matrixL().solve(v);
  return w.squaredNorm();
}

MetricAtPoint factorize(const CovarianceField& field, const Point& x) {
  return MetricAtPoint(x, field.inv_metric(x));
}

CovarianceField constant_field(const Matrix& sigma) {
  require_spd(sigma, "constant_field");
  std::ostringstream desc;
  desc << "constant(";
  for (Eigen::Index i = 0; i < sigma.size(); ++i) desc << (i ? "," : "") << format_double(sigma(i));
  desc << ")";
  const int dim = static_cast<int>(sigma.rows());
  return CovarianceField(
      dim, [sigma](const Point&) { return sigma; },
      dim == 1 ? GrowthClass{growth::Bounded{}} : GrowthClass{growth::HigherDim{}}, desc.str());
}

CovarianceField power_field(double b, int dim) {
  if (!(b >= 0)) throw ParameterError("power_field: b must be >= 0");
  if (dim < 1) throw ParameterError("power_field: dim must be positive");
  return CovarianceField(
      dim,
      [b, dim](const Point& x) {
        return Matrix(std::pow(1.0 + x.norm(), b) * Matrix::Identity(dim, dim));
      },
      dim == 1 ? classify_power(b) : GrowthClass{growth::HigherDim{}},
      "power(b=" + format_double(b) + ")");
}

CovarianceField quadratic_field(double offset) {
  if (!(offset > 0)) throw ParameterError("quadratic_field: offset must be positive");
  return CovarianceField(
      1,
      [offset](const Point& x) {
        Matrix m(1, 1);
        m(0, 0) = offset + x(0) * x(0);
        return m;
      },
      growth::Quadratic{}, "quadratic(offset=" + format_double(offset) + ")");
}

CovarianceField tempered_langevin_field(const TargetDensity& target, double cap) {
  if (!(cap > 0)) throw ParameterError("tempered_langevin_field: cap must be positive");
  GrowthClass growth_class = growth::HigherDim{};
  if (target.dim() == 1) {
    growth_class = growth::SuperQuadratic{std::numeric_limits<double>::infinity()};
    if (const auto* poly = std::get_if<tail::Polynomial>(&target.tail_class()))
      growth_class = classify_power(poly->p);
  }
  const double log_cap = std::log(cap);
  const int dim = target.dim();
  return CovarianceField(
      dim,
      [target, log_cap, dim](const Point& x) {
        const double lp = target.log_density(x);
        if (!std::isfinite(lp))
          throw EvaluationError("tempered_langevin_field: x = " + point_text(x) +
                                " is outside the target support");
        return Matrix(std::exp(std::min(-lp, log_cap)) * Matrix::Identity(dim, dim));
      },
      growth_class,
      "tempered_langevin(" + target.description() + ",cap=" + format_double(cap) + ")");
}

std::vector<Region> radial_regions(const std::vector<double>& radii,
                                   const std::vector<Matrix>& sigmas) {
  if (sigmas.size() != radii.size() + 1)
    throw ParameterError("radial_regions: need one more covariance than radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw ParameterError("radial_regions: radii must be positive and increasing");
  }
  std::vector<Region> regions;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double lo = i == 0 ? 0.0 : radii[i - 1];
    const double hi = i == radii.size() ? std::numeric_limits<double>::infinity() : radii[i];
    regions.push_back(Region{[lo, hi](const Point& x) {
                               const double r = x.norm();
                               return r >= lo && r < hi;
                             },
                             sigmas[i],
                             "[" + format_double(lo) + "," + format_double(hi) + ")"});
  }
  return regions;
}

CovarianceField regional_field(std::vector<Region> regions, bool strict) {
  if (regions.empty()) throw ParameterError("regional_field: no regions");
  const int dim = static_cast<int>(regions.front().sigma.rows());
  std::string desc = "regional(";
  for (const auto& r : regions) {
    require_spd(r.sigma, "regional_field");
    if (r.sigma.rows() != dim) throw ParameterError("regional_field: inconsistent dimensions");
    desc += r.label + ";";
  }
  desc += strict ? "strict)" : "last-match)";
  return CovarianceField(
      dim,
      [regions = std::move(regions), strict](const Point& x) {
        const Region* match = nullptr;
        int count = 0;
        for (const auto& r : regions) {
          if (r.contains(x)) {
            match = &r;
            ++count;
          }
        }
        if (count == 0) throw PartitionError("regional_field: no region contains x = " + point_text(x));
        if (strict && count > 1)
          throw PartitionError("regional_field: several regions contain x = " + point_text(x));
        return match->sigma;
      },
      dim == 1 ? GrowthClass{growth::Bounded{}} : GrowthClass{growth::HigherDim{}}, desc);
}

std::size_t partition_violations(const std::vector<Region>& regions,
                                 const std::vector<Point>& points) {
  std::size_t bad = 0;
  for (const auto& x : points) {
    const auto count = std::count_if(regions.begin(), regions.end(),
                                     [&](const Region& r) { return r.contains(x); });
    if (count != 1) ++bad;
  }
  return bad;
}

CovarianceField mixture_field(MixtureWeightsFn weights, std::vector<Matrix> sigmas) {
  if (sigmas.empty()) throw ParameterError("mixture_field: no components");
  const int dim = static_cast<int>(sigmas.front().rows());
  for (const auto& s : sigmas) {
    require_spd(s, "mixture_field");
    if (s.rows() != dim) throw ParameterError("mixture_field: inconsistent dimensions");
  }
  const std::string desc = "mixture(m=" + std::to_string(sigmas.size()) + ")";
  return CovarianceField(
      dim,
      [weights = std::move(weights), sigmas = std::move(sigmas), dim](const Point& x) {
        const Eigen::VectorXd w = weights(x);
        if (w.size() != static_cast<Eigen::Index>(sigmas.size()))
          throw EvaluationError("mixture_field: weight vector has wrong length");
        if (w.minCoeff() < 0 || std::abs(w.sum() - 1.0) > 1e-10)
          throw EvaluationError("mixture_field: weights are off the simplex at x = " +
                                point_text(x));
        Matrix out = Matrix::Zero(dim, dim);
        for (std::size_t k = 0; k < sigmas.size(); ++k) {
          if (w(static_cast<Eigen::Index>(k)) != 0.0) out += w(static_cast<Eigen::Index>(k)) * sigmas[k];
        }
        return out;
      },
      dim == 1 ? GrowthClass{growth::Bounded{}} : GrowthClass{growth::HigherDim{}}, desc);
}

MixtureWeightsFn gaussian_responsibilities(std::vector<Point> centres, double bandwidth) {
  if (centres.empty()) throw ParameterError("gaussian_responsibilities: no centres");
  if (!(bandwidth > 0)) throw ParameterError("gaussian_responsibilities: bandwidth must be positive");
  return [centres = std::move(centres), bandwidth](const Point& x) {
    Eigen::VectorXd logw(static_cast<Eigen::Index>(centres.size()));
    for (std::size_t k = 0; k < centres.size(); ++k)
      logw(static_cast<Eigen::Index>(k)) =
          -squared_distance(x, centres[k]) / (2 * bandwidth * bandwidth);
    const double top = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - top).exp();
    return Eigen::VectorXd(w / w.sum());
  };
}

PastSampleSet::PastSampleSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ParameterError("PastSampleSet: need at least two samples");
  const auto dim = points_.front().size();
  for (const auto& p : points_) {
    if (p.size() != dim || dim == 0) throw ParameterError("PastSampleSet: inconsistent dimensions");
    if (!p.allFinite()) throw ParameterError("PastSampleSet: non-finite sample");
  }
}

PastSampleSet PastSampleSet::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("PastSampleSet: cannot open " + path.string());
  std::vector<Point> points;
  std::string line;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    bool numeric = true;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first_data_line) {
        first_data_line = false;
        continue;
      }
      throw ParameterError("PastSampleSet: malformed row '" + line + "' in " + path.string());
    }
    first_data_line = false;
    if (values.empty()) continue;
    points.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                       static_cast<Eigen::Index>(values.size())));
  }
  return PastSampleSet(std::move(points));
}

CovarianceField kernel_adaptive_field(const PastSampleSet& samples, double gamma, double nu,
                                      double kernel_width) {
  if (!(gamma > 0) || !(nu >= 0) || !(kernel_width > 0))
    throw ParameterError("kernel_adaptive_field: gamma, kernel width must be positive, nu >= 0");
  const int dim = samples.dim();
  const double inv_var = 1.0 / (kernel_width * kernel_width);
  return CovarianceField(
      dim,
      [samples, gamma, nu, inv_var, dim](const Point& x) {
        const auto n = static_cast<Eigen::Index>(samples.size());
        // Columns of M_x: 2 grad_x k(z_i, x) = 2 k(z_i, x) (z_i - x) / sigma_k^2.
        Matrix m(dim, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::VectorXd d = samples.points()[static_cast<std::size_t>(i)] - x;
          const double k = std::exp(-0.5 * d.squaredNorm() * inv_var);
          m.col(i) = 2.0 * k * inv_var * d;
        }
        const Eigen::VectorXd col_sum = m.rowwise().sum();
        Matrix centred = m * m.transpose() - col_sum * col_sum.transpose() / static_cast<double>(n);
        centred = 0.5 * (centred + centred.transpose());
        return Matrix(gamma * gamma * Matrix::Identity(dim, dim) + nu * nu * centred);
      },
      dim == 1 ? GrowthClass{growth::Bounded{}} : GrowthClass{growth::HigherDim{}},
      "kernel_adaptive(n=" + std::to_string(samples.size()) + ",gamma=" + format_double(gamma) +
          ",nu=" + format_double(nu) + ",width=" + format_double(kernel_width) + ")");
}

CovarianceField weighted_empirical_field(const PastSampleSet& samples, WeightFn weight,
                                         double ridge) {
  if (!(ridge >= 0)) throw ParameterError("weighted_empirical_field: ridge must be >= 0");
  const int dim = samples.dim();
  return CovarianceField(
      dim,
      [samples, weight = std::move(weight), ridge, dim](const Point& x) {
        Matrix out = ridge * Matrix::Identity(dim, dim);
        double total = 0.0;
        for (const auto& z : samples.points()) {
          const double w = weight(x, z);
          if (!(w >= 0)) throw EvaluationError("weighted_empirical_field: negative weight");
          total += w;
          const Eigen::VectorXd d = z - x;
          out.noalias() += w * d * d.transpose();
        }
        if (std::abs(total - 1.0) > 1e-10)
          throw EvaluationError("weighted_empirical_field: weights sum to " + format_double(total) +
                                " at x = " + point_text(x));
        return out;
      },
      dim == 1 ? GrowthClass{growth::Bounded{}} : GrowthClass{growth::HigherDim{}},
      "weighted_empirical(n=" + std::to_string(samples.size()) + ",ridge=" + format_double(ridge) +
          ")");
}

WeightFn normalized_gaussian_weights(const PastSampleSet& samples, double bandwidth) {
  if (!(bandwidth > 0)) throw ParameterError("normalized_gaussian_weights: bandwidth must be positive");
  const double scale = 1.0 / (2 * bandwidth * bandwidth);
  return [samples, scale](const Point& x, const Point& z) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& zi : samples.points()) top = std::max(top, -squared_distance(x, zi) * scale);
    double denom = 0.0;
    for (const auto& zi : samples.points()) denom += std::exp(-squared_distance(x, zi) * scale - top);
    return std::exp(-squared_distance(x, z) * scale - top) / denom;
  };
}

}  // namespace pdrwm

#include "pdrwm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdrwm/csv.hpp"
#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogRatioCap = std::log(1e15);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Estimate iid_mean(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  Estimate out;
  out.value = mean;
  out.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

void require_samples(std::size_t n, const char* who) {
  if (n < 1000) throw ParameterError(std::string(who) + ": n must be >= 1000");
}

// Integral of f(xi) phi(xi) over [-40, 40] split at the given breakpoints.
template <class F>
double gaussian_expectation(F f, std::vector<double> breaks) {
  using boost::math::quadrature::gauss_kronrod;
  breaks.push_back(-40.0);
  breaks.push_back(40.0);
  std::sort(breaks.begin(), breaks.end());
  auto g = [&](double xi) {
    return f(xi) * std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * std::numbers::pi);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = std::max(breaks[i], -40.0);
    const double b = std::min(breaks[i + 1], 40.0);
    if (!(a < b)) continue;
    double err = 0.0;
    total += gauss_kronrod<double, 61>::integrate(g, a, b, 20, 1e-13, &err);
  }
  return total;
}

void require_1d(const TargetDensity& target, const CovarianceField& field) {
  if (target.dim() != 1 || field.dim() != 1)
    throw ParameterError("quadrature oracle: target and field must be one dimensional");
}

}  // namespace

LyapunovFunction::LyapunovFunction(Kind kind) : kind_(kind) {
  std::visit(overloaded{[](const lyapunov::ExpAbs& k) {
                          if (!(k.s > 0)) throw ParameterError("ExpAbs: s must be positive");
                        },
                        [](const lyapunov::ExpAbsPow& k) {
                          if (!(k.s > 0) || !(k.beta > 0))
                            throw ParameterError("ExpAbsPow: s and beta must be positive");
                        },
                        [](const lyapunov::AbsPow& k) {
                          if (!(k.s > 0)) throw ParameterError("AbsPow: s must be positive");
                        },
                        [](const lyapunov::RectangleV&) {}},
             kind_);
}

double LyapunovFunction::log_evaluate(const Point& x) const {
  return std::visit(
      overloaded{[&](const lyapunov::ExpAbs& k) { return k.s * x.norm(); },
                 [&](const lyapunov::ExpAbsPow& k) { return k.s * std::pow(x.norm(), k.beta); },
                 [&](const lyapunov::AbsPow& k) {
                   return std::max(0.0, k.s * std::log(x.norm()));
                 },
                 [&](const lyapunov::RectangleV&) {
                   if (x.size() != 2) throw ParameterError("RectangleV needs a 2D point");
                   return std::log(std::fabs(x(1)) + std::max(1.0, std::fabs(x(0))));
                 }},
      kind_);
}

double LyapunovFunction::evaluate(const Point& x) const {
  const double lv = log_evaluate(x);
  if (lv > std::log(std::numeric_limits<double>::max()))
    throw NumericError("Lyapunov function overflows at this point; use log_evaluate");
  return std::exp(lv);
}

std::string LyapunovFunction::name() const {
  return std::visit(
      overloaded{[](const lyapunov::ExpAbs& k) { return "ExpAbs(" + format_double(k.s) + ")"; },
                 [](const lyapunov::ExpAbsPow& k) {
                   return "ExpAbsPow(" + format_double(k.s) + "," + format_double(k.beta) + ")";
                 },
                 [](const lyapunov::AbsPow& k) { return "AbsPow(" + format_double(k.s) + ")"; },
                 [](const lyapunov::RectangleV&) { return std::string("RectangleV"); }},
      kind_);
}

DriftEstimate drift_ratio(const TargetDensity& target, const ProposalKernel& kernel,
                          const LyapunovFunction& v, const Point& x, std::size_t n,
                          std::uint64_t seed) {
  require_samples(n, "drift_ratio");
  const double log_vx = v.log_evaluate(x);
  if (!std::isfinite(log_vx)) throw ParameterError("drift_ratio: V(x) is not finite");
  Rng rng(seed);
  std::vector<double> summands(n);
  double truncated = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point y = kernel.sample(x, rng);
    const double log_alpha = log_accept_ratio(target, kernel, x, y);
    if (log_alpha == kNegInf) {
      summands[i] = 1.0;
      continue;
    }
    const double alpha = std::exp(log_alpha);
    double log_ratio = v.log_evaluate(y) - log_vx;
    if (log_ratio > kLogRatioCap) {
      truncated += alpha;
      log_ratio = kLogRatioCap;
    }
    summands[i] = std::exp(log_alpha + log_ratio) + (1.0 - alpha);
  }
  const Estimate e = iid_mean(summands);
  return {e.value, e.std_error, truncated / static_cast<double>(n)};
}

std::vector<double> acceptance_samples(const TargetDensity& target, const ProposalKernel& kernel,
                                       const Point& x, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> alphas(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point y = kernel.sample(x, rng);
    alphas[i] = std::exp(log_accept_ratio(target, kernel, x, y));
  }
  return alphas;
}

Estimate mean_acceptance(const TargetDensity& target, const ProposalKernel& kernel,
                         const Point& x, std::size_t n, std::uint64_t seed) {
  require_samples(n, "mean_acceptance");
  return iid_mean(acceptance_samples(target, kernel, x, n, seed));
}

Estimate rejection_probability(const TargetDensity& target, const ProposalKernel& kernel,
                               const Point& x, std::size_t n, std::uint64_t seed) {
  require_samples(n, "rejection_probability");
  const Estimate a = iid_mean(acceptance_samples(target, kernel, x, n, seed));
  return {1.0 - a.value, a.std_error};
}

Estimate acceptance_set_mass(const TargetDensity& target, const ProposalKernel& kernel,
                             const Point& x, double epsilon, std::size_t n, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("acceptance_set_mass: epsilon must lie in (0, 1)");
  require_samples(n, "acceptance_set_mass");
  Rng rng(seed);
  const double log_eps = std::log(epsilon);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point y = kernel.sample(x, rng);
    if (log_accept_ratio(target, kernel, x, y) >= log_eps) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

std::vector<double> acceptance_set_profile(const std::vector<double>& alphas,
                                           const std::vector<double>& epsilons) {
  std::vector<double> sorted = alphas;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), eps);
    out.push_back(static_cast<double>(sorted.end() - first) / static_cast<double>(sorted.size()));
  }
  return out;
}

std::vector<double> tail_acceptance_profile(const TargetDensity& target,
                                            const CovarianceField& field, double h, double x,
                                            const std::vector<double>& offsets,
                                            std::optional<double> gamma, double x0) {
  require_1d(target, field);
  if (std::fabs(x) < x0) throw ParameterError("tail_acceptance_profile: |x| below tail threshold");
  const double g = gamma.value_or(growth_exponent(field.growth_class()));
  if (!std::isfinite(g)) throw ParameterError("tail_acceptance_profile: gamma is undefined");
  const double scale = std::pow(std::fabs(x), g / 2.0);
  std::vector<double> out;
  out.reserve(offsets.size());
  for (double c : offsets) {
    const Point y = point1(x + c * scale);
    if (!target.in_support(y)) {
      out.push_back(0.0);
      continue;
    }
    out.push_back(std::exp(log_accept_ratio_closed_form(target, field, h, point1(x), y)));
  }
  return out;
}

double chain_acceptance_rate(const TargetDensity& target, const CovarianceField& field, double h,
                             const Point& x0, std::size_t n, std::uint64_t seed) {
  const GaussianProposal kernel(field, h);
  return run_chain(target, kernel, x0, n, seed).acceptance_rate();
}

double tune_step_size(const TargetDensity& target, const CovarianceField& field,
                      const Point& x0, double target_rate, std::size_t n_pre, std::uint64_t seed,
                      double h_lo, double h_hi, int iterations) {
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw ParameterError("tune_step_size: target rate must lie in (0, 1)");
  double lo = std::log(h_lo);
  double hi = std::log(h_hi);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chain_acceptance_rate(target, field, std::exp(mid), x0, n_pre, seed) > target_rate)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

Estimate esjd(const ChainTrajectory& traj) {
  std::vector<double> jumps;
  jumps.reserve(traj.steps());
  for (std::size_t i = 1; i < traj.states.size(); ++i)
    jumps.push_back((traj.states[i] - traj.states[i - 1]).squaredNorm());
  return batch_means(jumps);
}

std::vector<EsjdPoint> esjd_scan(const TargetDensity& target, const std::vector<double>& b_values,
                                 std::size_t n_steps, std::uint64_t seed,
                                 const EsjdOptions& options) {
  const Point x0 = Point::Zero(target.dim());
  std::vector<EsjdPoint> out;
  for (double b : b_values) {
    const CovarianceField field = power_field(b, target.dim());
    EsjdPoint point;
    point.b = b;
    point.h = options.h ? *options.h
                        : tune_step_size(target, field, x0, options.target_rate, options.n_pre,
                                         options.tune_seed);
    const GaussianProposal kernel(field, point.h);
    const ChainTrajectory traj = run_chain(target, kernel, x0, n_steps, seed);
    point.acceptance = traj.acceptance_rate();
    const Estimate e = esjd(traj);
    point.esjd = e.value;
    point.std_error = e.std_error;
    out.push_back(point);
  }
  return out;
}

double drift_ratio_quadrature(const TargetDensity& target, const CovarianceField& field, double h,
                              const LyapunovFunction& v, double x) {
  require_1d(target, field);
  const double sd = std::sqrt(h * field.inv_metric(point1(x))(0, 0));
  const Point px = point1(x);
  const double log_vx = v.log_evaluate(px);
  auto f = [&](double xi) {
    const Point y = point1(x + sd * xi);
    const double log_alpha = log_accept_ratio_closed_form(target, field, h, px, y);
    if (log_alpha == kNegInf) return 1.0;
    return 1.0 + std::exp(log_alpha + v.log_evaluate(y) - log_vx) - std::exp(log_alpha);
  };
  return gaussian_expectation(f, {0.0, -x / sd, -2.0 * x / sd});
}

double rejection_probability_quadrature(const TargetDensity& target,
                                        const CovarianceField& field, double h, double x) {
  require_1d(target, field);
  const double sd = std::sqrt(h * field.inv_metric(point1(x))(0, 0));
  const Point px = point1(x);
  auto f = [&](double xi) {
    return std::exp(log_accept_ratio_closed_form(target, field, h, px, point1(x + sd * xi)));
  };
  return 1.0 - gaussian_expectation(f, {0.0, -x / sd, -2.0 * x / sd});
}

void DiagnosticReport::validate() const {
  if (grid.size() != values.size() || grid.size() != std_errors.size())
    throw ParameterError("DiagnosticReport: grid, values and std_errors differ in length");
}

void DiagnosticReport::write_csv(std::ostream& out) const {
  validate();
  write_header_comment(out, config_digest, seed);
  out << "probe,x,estimate,se,n,seed\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << probe_name << ',' << format_double(grid[i]) << ',' << format_double(values[i]) << ','
        << format_double(std_errors[i]) << ',' << n_samples << ',' << seed << '\n';
  }
}

namespace {

template <class Probe>
DiagnosticReport profile(std::string name, std::string config, const std::vector<double>& xs,
                         std::size_t n, std::uint64_t seed, Probe probe) {
  DiagnosticReport report;
  report.probe_name = std::move(name);
  report.config_digest = digest(config);
  report.n_samples = n;
  report.seed = seed;
  for (double x : xs) {
    const Estimate e = probe(point1(x));
    report.grid.push_back(x);
    report.values.push_back(e.value);
    report.std_errors.push_back(e.std_error);
  }
  return report;
}

}  // namespace

DiagnosticReport drift_profile(const TargetDensity& target, const ProposalKernel& kernel,
                               const LyapunovFunction& v, const std::vector<double>& xs,
                               std::size_t n, std::uint64_t seed) {
  return profile("drift_ratio",
                 target.description() + "|" + kernel.description() + "|" + v.name(), xs, n, seed,
                 [&](const Point& x) {
                   const DriftEstimate d = drift_ratio(target, kernel, v, x, n, seed);
                   return Estimate{d.value, d.std_error};
                 });
}

DiagnosticReport rejection_profile(const TargetDensity& target, const ProposalKernel& kernel,
                                   const std::vector<double>& xs, std::size_t n,
                                   std::uint64_t seed) {
  return profile("rejection_probability", target.description() + "|" + kernel.description(), xs,
                 n, seed,
                 [&](const Point& x) { return rejection_probability(target, kernel, x, n, seed); });
}

DiagnosticReport acceptance_mass_profile(const TargetDensity& target,
                                         const ProposalKernel& kernel, double epsilon,
                                         const std::vector<double>& xs, std::size_t n,
                                         std::uint64_t seed) {
  return profile("acceptance_set_mass",
                 target.description() + "|" + kernel.description() +
                     "|eps=" + format_double(epsilon),
                 xs, n, seed, [&](const Point& x) {
                   return acceptance_set_mass(target, kernel, x, epsilon, n, seed);
                 });
}

}  // namespace pdrwm

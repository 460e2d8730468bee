#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "pdrwm/covariance_fields.hpp"
#include "pdrwm/mh_core.hpp"
#include "pdrwm/proposals.hpp"
#include "pdrwm/target_densities.hpp"

namespace pdrwm {

namespace lyapunov {
struct ExpAbs {
  double s;
};
struct ExpAbsPow {
  double s;
  double beta;
};
struct AbsPow {
  double s;
};
struct RectangleV {};
}  // namespace lyapunov

/// V >= 1 from the drift catalogue. |x| is the Euclidean norm.
///   ExpAbs(s)        e^{s|x|}
///   ExpAbsPow(s, b)  e^{s|x|^b}
///   AbsPow(s)        max(1, |x|^s)
///   RectangleV       |x2| + max(1, |x1|)
class LyapunovFunction {
 public:
  using Kind = std::variant<lyapunov::ExpAbs, lyapunov::ExpAbsPow, lyapunov::AbsPow,
                            lyapunov::RectangleV>;

  explicit LyapunovFunction(Kind kind);

  double evaluate(const Point& x) const;
  double log_evaluate(const Point& x) const;
  std::string name() const;
  const Kind& kind() const { return kind_; }

 private:
  Kind kind_;
};

struct DriftEstimate {
  double value = 0.0;
  double std_error = 0.0;
  /// (1/n) sum of alpha_i over summands whose ratio V(y_i)/V(x) exceeded
  /// the 1e15 cap and were clipped to it.
  double truncated_mass = 0.0;
};

/// Monte Carlo PV(x)/V(x) over n proposals y_i ~ Q(x, .).
DriftEstimate drift_ratio(const TargetDensity& target, const ProposalKernel& kernel,
                          const LyapunovFunction& v, const Point& x, std::size_t n,
                          std::uint64_t seed);

/// alpha(x, y_i) for n proposals y_i ~ Q(x, .) drawn with `seed`.
std::vector<double> acceptance_samples(const TargetDensity& target, const ProposalKernel& kernel,
                                       const Point& x, std::size_t n, std::uint64_t seed);

/// r(x) = 1 - mean alpha.
Estimate rejection_probability(const TargetDensity& target, const ProposalKernel& kernel,
                               const Point& x, std::size_t n, std::uint64_t seed);
Estimate mean_acceptance(const TargetDensity& target, const ProposalKernel& kernel,
                         const Point& x, std::size_t n, std::uint64_t seed);

/// Fraction of proposals with alpha >= epsilon, 0 < epsilon < 1.
Estimate acceptance_set_mass(const TargetDensity& target, const ProposalKernel& kernel,
                             const Point& x, double epsilon, std::size_t n, std::uint64_t seed);

/// Empirical survival function of a fixed alpha sample at each epsilon.
std::vector<double> acceptance_set_profile(const std::vector<double>& alphas,
                                           const std::vector<double>& epsilons);

/// Closed-form alpha(x, x + c x^{gamma/2}) for each offset c. gamma defaults
/// to the field's growth exponent. Throws ParameterError for |x| < x0.
std::vector<double> tail_acceptance_profile(const TargetDensity& target,
                                            const CovarianceField& field, double h, double x,
                                            const std::vector<double>& offsets,
                                            std::optional<double> gamma = std::nullopt,
                                            double x0 = 20.0);

/// Acceptance rate of an n-step chain from x0 with seed `seed`.
double chain_acceptance_rate(const TargetDensity& target, const CovarianceField& field, double h,
                             const Point& x0, std::size_t n, std::uint64_t seed);

/// Bisection on log h in [log h_lo, log h_hi] for a pre-run acceptance rate
/// of `target_rate`. The pre-runs share `seed`.
double tune_step_size(const TargetDensity& target, const CovarianceField& field,
                      const Point& x0, double target_rate, std::size_t n_pre, std::uint64_t seed,
                      double h_lo = 1e-4, double h_hi = 1e4, int iterations = 24);

struct EsjdPoint {
  double b = 0.0;
  double h = 0.0;
  double acceptance = 0.0;
  double esjd = 0.0;
  double std_error = 0.0;
};

struct EsjdOptions {
  /// Fixed step size; when empty h is tuned per b to `target_rate`.
  std::optional<double> h;
  double target_rate = 0.44;
  std::size_t n_pre = 10000;
  std::uint64_t tune_seed = 7;
};

/// Mean squared jump per step of a chain with power_field(b) for every b,
/// started at the origin. All b share the chain seed.
std::vector<EsjdPoint> esjd_scan(const TargetDensity& target, const std::vector<double>& b_values,
                                 std::size_t n_steps, std::uint64_t seed,
                                 const EsjdOptions& options = {});

/// Mean squared jump distance of a trajectory with batch-means SE.
Estimate esjd(const ChainTrajectory& traj);

/// 1D quadrature oracles for the Gaussian kernel N(x, h G^{-1}(x)).
double drift_ratio_quadrature(const TargetDensity& target, const CovarianceField& field, double h,
                              const LyapunovFunction& v, double x);
double rejection_probability_quadrature(const TargetDensity& target,
                                        const CovarianceField& field, double h, double x);

struct DiagnosticReport {
  std::string probe_name;
  std::string config_digest;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> std_errors;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  /// Throws ParameterError unless grid, values and std_errors have equal
  /// length.
  void validate() const;
  /// Header comment, then probe,x,estimate,se,n,seed.
  void write_csv(std::ostream& out) const;
};

/// Probe reports over a 1D grid of x, common seed across x.
DiagnosticReport drift_profile(const TargetDensity& target, const ProposalKernel& kernel,
                               const LyapunovFunction& v, const std::vector<double>& xs,
                               std::size_t n, std::uint64_t seed);
DiagnosticReport rejection_profile(const TargetDensity& target, const ProposalKernel& kernel,
                                   const std::vector<double>& xs, std::size_t n,
                                   std::uint64_t seed);
DiagnosticReport acceptance_mass_profile(const TargetDensity& target,
                                         const ProposalKernel& kernel, double epsilon,
                                         const std::vector<double>& xs, std::size_t n,
                                         std::uint64_t seed);

}  // namespace pdrwm

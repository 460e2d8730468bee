#include "pdrwm/mh_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdrwm/csv.hpp"
#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_in_support(double log_pi_x) {
  if (!std::isfinite(log_pi_x)) throw DomainError("chain state is outside the target support");
}

}  // namespace

double log_accept_from_parts(double log_pi_x, double log_pi_y, double log_q_forward,
                             double log_q_reverse) {
  if (log_pi_y == kNegInf || log_q_forward == kNegInf || log_q_reverse == kNegInf) return kNegInf;
  return std::min(0.0, log_pi_y + log_q_reverse - log_pi_x - log_q_forward);
}

double log_accept_ratio(const TargetDensity& target, const ProposalKernel& kernel, const Point& x,
                        const Point& y) {
  const double log_pi_x = target.log_density(x);
  require_in_support(log_pi_x);
  const double log_pi_y = target.log_density(y);
  if (log_pi_y == kNegInf) return kNegInf;
  return log_accept_from_parts(log_pi_x, log_pi_y, kernel.log_q(y, x), kernel.log_q(x, y));
}

double log_accept_ratio_closed_form(const TargetDensity& target, const CovarianceField& field,
                                    double h, const Point& x, const Point& y) {
  const double log_pi_x = target.log_density(x);
  require_in_support(log_pi_x);
  const double log_pi_y = target.log_density(y);
  if (log_pi_y == kNegInf) return kNegInf;
  const MetricAtPoint gx = factorize(field, x);
  const MetricAtPoint gy = factorize(field, y);
  const Eigen::VectorXd d = x - y;
  // log|G| = -log|G^{-1}|.
  const double jacobian = 0.5 * (gx.log_det_inv_metric() - gy.log_det_inv_metric());
  const double quad = (gy.quad_form_metric(d) - gx.quad_form_metric(d)) / (2.0 * h);
  return std::min(0.0, log_pi_y - log_pi_x + jacobian - quad);
}

StepResult mh_step(const TargetDensity& target, const ProposalKernel& kernel, const Point& x,
                   Rng& rng) {
  Point y = kernel.sample(x, rng);
  const double u = 1.0 - std::generate_canonical<double, 53>(rng);  // (0, 1]
  const double log_alpha = log_accept_ratio(target, kernel, x, y);
  StepResult out;
  out.alpha = std::exp(log_alpha);
  out.accepted = std::log(u) <= log_alpha;
  out.next = out.accepted ? std::move(y) : x;
  return out;
}

double ChainTrajectory::acceptance_rate() const {
  if (accept_flags.empty()) return 0.0;
  return static_cast<double>(std::count(accept_flags.begin(), accept_flags.end(), true)) /
         static_cast<double>(accept_flags.size());
}

std::string chain_digest(const TargetDensity& target, const ProposalKernel& kernel) {
  return digest(target.description() + "|" + kernel.description());
}

ChainTrajectory run_chain(const TargetDensity& target, const ProposalKernel& kernel,
                          const Point& x0, std::size_t n_steps, std::uint64_t seed) {
  if (n_steps < 1) throw ParameterError("run_chain: n_steps must be >= 1");
  if (!std::isfinite(target.log_density(x0)))
    throw DomainError("run_chain: x0 is outside the target support");
  ChainTrajectory traj;
  traj.seed = seed;
  traj.config_digest = chain_digest(target, kernel);
  traj.states.reserve(n_steps + 1);
  traj.accept_flags.reserve(n_steps);
  traj.accept_probs.reserve(n_steps);
  traj.states.push_back(x0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_steps; ++i) {
    StepResult step = mh_step(target, kernel, traj.states.back(), rng);
    traj.accept_flags.push_back(step.accepted);
    traj.accept_probs.push_back(step.alpha);
    traj.states.push_back(std::move(step.next));
  }
  return traj;
}

Estimate batch_means(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("batch_means: no values");
  const std::size_t m = values.size();
  Estimate out;
  double total = 0.0;
  for (double v : values) total += v;
  out.value = total / static_cast<double>(m);
  const auto batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m))));
  const std::size_t n_batches = batch == 0 ? 0 : m / batch;
  if (n_batches < 2) return out;
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < batch; ++i) s += values[b * batch + i];
    means[b] = s / static_cast<double>(batch);
  }
  double mean_of_means = 0.0;
  for (double v : means) mean_of_means += v;
  mean_of_means /= static_cast<double>(n_batches);
  double ss = 0.0;
  for (double v : means) ss += (v - mean_of_means) * (v - mean_of_means);
  const double var = ss / static_cast<double>(n_batches - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n_batches));
  return out;
}

Estimate estimate_expectation(const ChainTrajectory& traj,
                              const std::function<double(const Point&)>& f,
                              std::size_t burn_in) {
  if (burn_in >= traj.states.size())
    throw ParameterError("estimate_expectation: burn-in leaves no states");
  std::vector<double> values;
  values.reserve(traj.states.size() - burn_in);
  for (std::size_t i = burn_in; i < traj.states.size(); ++i) values.push_back(f(traj.states[i]));
  return batch_means(values);
}

void write_trajectory_csv(std::ostream& out, const ChainTrajectory& traj) {
  write_header_comment(out, traj.config_digest, traj.seed);
  const auto dim = traj.states.empty() ? 0 : traj.states.front().size();
  out << "step";
  for (Eigen::Index d = 0; d < dim; ++d) out << ",x" << (d + 1);
  out << ",accepted,alpha\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << i;
    for (Eigen::Index d = 0; d < dim; ++d) out << ',' << format_double(traj.states[i](d));
    if (i == 0) {
      out << ",,\n";
    } else {
      out << ',' << (traj.accept_flags[i - 1] ? 1 : 0) << ',' << format_double(traj.accept_probs[i - 1])
          << '\n';
    }
  }
}

}  // namespace pdrwm

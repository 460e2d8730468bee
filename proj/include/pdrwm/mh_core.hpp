#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <vector>

#include "pdrwm/proposals.hpp"
#include "pdrwm/target_densities.hpp"
#include "pdrwm/types.hpp"

namespace pdrwm {

/// min(0, log pi(y) + log q(x|y) - log pi(x) - log q(y|x)) from its four
/// ingredients; -infinity when y is unreachable or the move cannot be
/// reversed.
double log_accept_from_parts(double log_pi_x, double log_pi_y, double log_q_forward,
                             double log_q_reverse);

/// Generic Metropolis-Hastings log acceptance ratio.
///
/// Returns -infinity for y outside the target support and for moves whose
/// reverse proposal density vanishes; throws DomainError when x itself is
/// outside the support.
double log_accept_ratio(const TargetDensity& target, const ProposalKernel& kernel, const Point& x,
                        const Point& y);

/// Closed form for the Gaussian PDRWM kernel N(x, h G^{-1}(x)):
/// min(0, log pi(y) - log pi(x) + (log|G(y)| - log|G(x)|)/2
///        - (x-y)^T [G(y) - G(x)] (x-y) / (2h)).
double log_accept_ratio_closed_form(const TargetDensity& target, const CovarianceField& field,
                                    double h, const Point& x, const Point& y);

struct StepResult {
  Point next;
  bool accepted = false;
  double alpha = 0.0;
};

/// One Metropolis-Hastings transition from x.
StepResult mh_step(const TargetDensity& target, const ProposalKernel& kernel, const Point& x,
                   Rng& rng);

struct ChainTrajectory {
  std::vector<Point> states;
  std::vector<bool> accept_flags;
  std::vector<double> accept_probs;
  std::uint64_t seed = 0;
  std::string config_digest;

  std::size_t steps() const { return accept_flags.size(); }
  double acceptance_rate() const;
};

std::string chain_digest(const TargetDensity& target, const ProposalKernel& kernel);

/// n_steps transitions from x0 with a generator seeded by `seed`.
ChainTrajectory run_chain(const TargetDensity& target, const ProposalKernel& kernel,
                          const Point& x0, std::size_t n_steps, std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Batch-means standard error with floor(sqrt(m)) batches of size
/// floor(sqrt(m)); trailing samples that do not fill a batch are ignored for
/// the SE only.
Estimate batch_means(const std::vector<double>& values);

/// Post-burn-in average of f over the trajectory states with a batch-means
/// standard error.
Estimate estimate_expectation(const ChainTrajectory& traj,
                              const std::function<double(const Point&)>& f,
                              std::size_t burn_in);

/// CSV with columns step, x1..xd, accepted, alpha; step 0 is the initial
/// state and leaves the last two columns empty.
void write_trajectory_csv(std::ostream& out, const ChainTrajectory& traj);

}  // namespace pdrwm

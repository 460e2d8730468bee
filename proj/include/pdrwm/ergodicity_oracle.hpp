#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pdrwm/covariance_fields.hpp"
#include "pdrwm/target_densities.hpp"

namespace pdrwm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Finite-state surrogate of a 1D Metropolis-Hastings chain on an equally
/// spaced grid over [-L, L].
struct DiscretizedChain {
  std::vector<double> grid;
  RowMatrix P;
  /// Normalised discretised target and its logarithm (kept separately so
  /// that far-tail states keep their relative weights).
  std::vector<double> pi_hat;
  std::vector<double> log_pi_hat;
  double L = 0.0;
  double delta = 0.0;

  std::size_t size() const { return pi_hat.size(); }

  /// Chain from an explicit row-stochastic matrix and stationary vector.
  static DiscretizedChain from_matrix(const RowMatrix& P, const std::vector<double>& pi);
};

/// P_ij = q(x_j | x_i) delta alpha(x_i, x_j) off the diagonal; proposal mass
/// outside [-L, L] stays on the diagonal. Requires delta <= min proposal
/// sd / 5 and a non-negative diagonal, else DiscretizationError.
DiscretizedChain build_discretized(const TargetDensity& target, const CovarianceField& field,
                                   double h, double L, std::size_t n);

/// max_i |sum_j P_ij - 1|
double row_sum_residual(const DiscretizedChain& chain);
/// || pi_hat P - pi_hat ||_1
double stationarity_residual(const DiscretizedChain& chain);
/// max_ij |pi_i P_ij - pi_j P_ji|
double reversibility_residual(const DiscretizedChain& chain);

struct SpectralResult {
  double gap = 0.0;
  double lambda2 = 0.0;
  /// ||A z - lambda2 z|| of the returned Ritz/eigen pair (0 on the dense path).
  double residual = 0.0;
  bool dense = true;
  int iterations = 0;
};

struct SpectralOptions {
  std::size_t dense_limit = 1500;
  int max_iterations = 4000;
  double tolerance = 1e-11;
};

/// 1 - |lambda_2| from the symmetrised matrix D^{1/2} P D^{-1/2} deflated by
/// its unit eigenvector sqrt(pi). Dense solve up to `dense_limit` states,
/// Lanczos with full reorthogonalisation above. NumericError on
/// non-convergence.
SpectralResult spectral_analysis(const DiscretizedChain& chain, const SpectralOptions& options = {});
double spectral_gap(const DiscretizedChain& chain);

/// d_n = 1/2 || delta_i P^n - pi_hat ||_1 for n = 0..n_max (d_0 included).
std::vector<double> tv_decay_curve(const DiscretizedChain& chain, std::size_t start_index,
                                   std::size_t n_max);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log d_n against n over the last `tail_fraction` of
/// the points with d_n above `floor`; rate = exp(slope).
DecayFit fit_decay_rate(const std::vector<double>& tv, double tail_fraction = 0.5,
                        double floor = 1e-12);

struct GapScanPoint {
  double L = 0.0;
  std::size_t n = 0;
  double gap = 0.0;
  double lambda2 = 0.0;
  double construction_residual = 0.0;
};

/// Spectral gap per domain half-width at fixed spacing delta,
/// n = round(2L / delta) + 1.
std::vector<GapScanPoint> gap_growth_scan(const TargetDensity& target,
                                          const CovarianceField& field, double h,
                                          const std::vector<double>& L_values, double delta);

enum class Verdict { Geometric, NonGeometric, Inconclusive };

std::string to_string(Verdict verdict);

/// > upper: Geometric; < lower: NonGeometric; otherwise Inconclusive.
Verdict classify_gap_ratio(double ratio, double upper = 0.5, double lower = 0.2);

/// gap(last L) / gap(first L).
double gap_ratio(const std::vector<GapScanPoint>& scan);

/// Columns L, n, gap, lambda2, construction_residual.
void write_scan_csv(std::ostream& out, const std::vector<GapScanPoint>& scan,
                    const std::string& config_digest, std::uint64_t seed);

}  // namespace pdrwm

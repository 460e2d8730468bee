#include "pdrwm/ergodicity_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "pdrwm/csv.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/mh_core.hpp"
#include "pdrwm/simd/kernels.hpp"

namespace pdrwm {
namespace {

// Proposals further than this many standard deviations carry e^{-800} mass,
// below double precision.
constexpr double kCutoffSd = 40.0;

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void normalise_log(DiscretizedChain& chain, const std::vector<double>& log_weights) {
  const double lz = log_sum_exp(log_weights);
  chain.log_pi_hat.resize(log_weights.size());
  chain.pi_hat.resize(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    chain.log_pi_hat[i] = log_weights[i] - lz;
    chain.pi_hat[i] = std::exp(chain.log_pi_hat[i]);
  }
}

// Symmetric D^{1/2} P D^{-1/2}.
RowMatrix symmetrised(const DiscretizedChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  RowMatrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double pij = chain.P(i, j);
      s(i, j) = pij == 0.0 ? 0.0
                           : pij * std::exp(0.5 * (chain.log_pi_hat[i] - chain.log_pi_hat[j]));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  }
  return s;
}

std::vector<double> sqrt_pi(const DiscretizedChain& chain) {
  std::vector<double> u(chain.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(0.5 * chain.log_pi_hat[i]);
  const double norm = std::sqrt(simd::dot(u.data(), u.data(), u.size()));
  for (double& v : u) v /= norm;
  return u;
}

// Solves (T - shift I) x = b for symmetric tridiagonal T (diag a, off b_off)
// by Gaussian elimination with partial pivoting; b is overwritten.
void tridiagonal_solve(const std::vector<double>& a, const std::vector<double>& off, double shift,
                       std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> d(n), dl(off), du(off), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - shift;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      du2[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - fact * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  b[n - 1] /= d[n - 1];
  if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t k = n - 2; k-- > 0;)
    b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
}

// Unit eigenvector of T for the (converged) eigenvalue theta by inverse
// iteration.
std::vector<double> tridiagonal_eigenvector(const std::vector<double>& a,
                                            const std::vector<double>& off, double theta) {
  std::vector<double> s(a.size(), 1.0);
  for (int it = 0; it < 3; ++it) {
    tridiagonal_solve(a, off, theta, s);
    double norm = 0.0;
    for (double v : s) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : s) v /= norm;
  }
  return s;
}

class DeflatedOperator {
 public:
  DeflatedOperator(RowMatrix s, std::vector<double> u) : s_(std::move(s)), u_(std::move(u)) {}

  std::size_t size() const { return u_.size(); }
  const std::vector<double>& u() const { return u_; }

  void apply(const double* x, double* y) const {
    const std::size_t n = size();
    simd::gemv(s_.data(), n, n, x, y);
    simd::axpy(-simd::dot(u_.data(), x, n), u_.data(), y, n);
  }

 private:
  RowMatrix s_;
  std::vector<double> u_;
};

SpectralResult lanczos(const DeflatedOperator& op, const SpectralOptions& options) {
  const std::size_t n = op.size();
  const std::size_t m_max = std::min<std::size_t>(n - 1, options.max_iterations);
  std::vector<std::vector<double>> q;
  std::vector<double> alpha, beta;

  Rng rng(0x5eed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  const auto orthogonalise = [&](std::vector<double>& w) {
    for (int pass = 0; pass < 2; ++pass) {
      simd::axpy(-simd::dot(op.u().data(), w.data(), n), op.u().data(), w.data(), n);
      for (const auto& qj : q) simd::axpy(-simd::dot(qj.data(), w.data(), n), qj.data(), w.data(), n);
    }
  };
  orthogonalise(v);
  double norm = std::sqrt(simd::dot(v.data(), v.data(), n));
  for (double& x : v) x /= norm;
  q.push_back(v);

  std::vector<double> w(n);
  SpectralResult result;
  result.dense = false;
  double theta_hi = 0.0, theta_lo = 0.0;
  std::vector<double> s_hi, s_lo;
  bool converged = false;
  for (std::size_t k = 0; k < m_max; ++k) {
    op.apply(q[k].data(), w.data());
    const double a = simd::dot(q[k].data(), w.data(), n);
    alpha.push_back(a);
    simd::axpy(-a, q[k].data(), w.data(), n);
    if (k > 0) simd::axpy(-beta[k - 1], q[k - 1].data(), w.data(), n);
    orthogonalise(w);
    const double b = std::sqrt(simd::dot(w.data(), w.data(), n));
    const bool breakdown = b < 1e-13;
    const bool check = breakdown || (k + 1) % 10 == 0 || k + 1 == m_max;
    if (check) {
      const auto m = static_cast<Eigen::Index>(alpha.size());
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
      for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      theta_lo = tri.eigenvalues()(0);
      theta_hi = tri.eigenvalues()(m - 1);
      if (m == 1) {
        s_hi = s_lo = {1.0};
      } else {
        std::vector<double> off(beta.begin(), beta.begin() + (m - 1));
        s_hi = tridiagonal_eigenvector(alpha, off, theta_hi);
        s_lo = tridiagonal_eigenvector(alpha, off, theta_lo);
      }
      const double bound_hi = b * std::fabs(s_hi.back());
      const double bound_lo = b * std::fabs(s_lo.back());
      result.iterations = static_cast<int>(m);
      if (breakdown || (bound_hi < options.tolerance && bound_lo < options.tolerance)) {
        converged = true;
        break;
      }
    }
    beta.push_back(b);
    for (double& x : w) x /= b;
    q.push_back(w);
  }
  if (!converged) throw NumericError("spectral_gap: Lanczos iteration did not converge");

  const bool use_hi = std::fabs(theta_hi) >= std::fabs(theta_lo);
  const double theta = use_hi ? theta_hi : theta_lo;
  const std::vector<double>& s = use_hi ? s_hi : s_lo;
  std::vector<double> z(n, 0.0), az(n);
  for (std::size_t j = 0; j < s.size(); ++j) simd::axpy(s[j], q[j].data(), z.data(), n);
  op.apply(z.data(), az.data());
  simd::axpy(-theta, z.data(), az.data(), n);
  result.residual = std::sqrt(simd::dot(az.data(), az.data(), n));
  if (result.residual > 1e-6)
    throw NumericError("spectral_gap: Ritz residual " + format_double(result.residual) +
                       " exceeds 1e-6");
  result.lambda2 = theta;
  result.gap = std::clamp(1.0 - std::fabs(theta), 0.0, 1.0);
  return result;
}

}  // namespace

DiscretizedChain DiscretizedChain::from_matrix(const RowMatrix& P, const std::vector<double>& pi) {
  if (P.rows() != P.cols() || static_cast<std::size_t>(P.rows()) != pi.size() || pi.size() < 2)
    throw ParameterError("DiscretizedChain: P must be square and match pi");
  DiscretizedChain chain;
  chain.P = P;
  std::vector<double> log_w(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (!(pi[i] > 0)) throw ParameterError("DiscretizedChain: pi must be positive");
    log_w[i] = std::log(pi[i]);
  }
  normalise_log(chain, log_w);
  chain.grid.resize(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) chain.grid[i] = static_cast<double>(i);
  return chain;
}

DiscretizedChain build_discretized(const TargetDensity& target, const CovarianceField& field,
                                   double h, double L, std::size_t n) {
  if (target.dim() != 1 || field.dim() != 1)
    throw ParameterError("build_discretized: target and field must be one dimensional");
  if (n < 50) throw ParameterError("build_discretized: n must be >= 50");
  if (!(L > 0) || !(h > 0)) throw ParameterError("build_discretized: L and h must be positive");

  DiscretizedChain chain;
  chain.L = L;
  chain.delta = 2.0 * L / static_cast<double>(n - 1);
  chain.grid.resize(n);
  std::vector<double> lp(n), var(n), log_norm(n);
  double min_sd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -L + chain.delta * static_cast<double>(i);
    chain.grid[i] = x;
    lp[i] = target.log_density(x);
    if (!std::isfinite(lp[i]))
      throw ParameterError("build_discretized: grid point " + format_double(x) +
                           " lies outside the target support");
    var[i] = h * field.inv_metric(point1(x))(0, 0);
    if (!(var[i] > 0)) throw NumericError("build_discretized: non-positive proposal variance");
    log_norm[i] = -0.5 * std::log(2.0 * std::numbers::pi * var[i]);
    min_sd = std::min(min_sd, std::sqrt(var[i]));
  }
  if (chain.delta > min_sd / 5.0 * (1.0 + 1e-12))
    throw DiscretizationError("build_discretized: spacing " + format_double(chain.delta) +
                              " exceeds 1/5 of the smallest proposal sd " +
                              format_double(min_sd) + "; use a finer grid");
  normalise_log(chain, lp);

  const auto ni = static_cast<Eigen::Index>(n);
  chain.P = RowMatrix::Zero(ni, ni);
  for (std::size_t i = 0; i < n; ++i) {
    const double reach = kCutoffSd * std::sqrt(var[i]);
    const auto span = static_cast<std::size_t>(std::min(reach / chain.delta, static_cast<double>(n)));
    const std::size_t j_lo = i > span ? i - span : 0;
    const std::size_t j_hi = std::min(n - 1, i + span);
    double off = 0.0;
    double* row = chain.P.data() + i * n;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      if (j == i) continue;
      const double d = chain.grid[j] - chain.grid[i];
      const double lq_forward = log_norm[i] - 0.5 * d * d / var[i];
      const double lq_reverse = log_norm[j] - 0.5 * d * d / var[j];
      const double la = log_accept_from_parts(lp[i], lp[j], lq_forward, lq_reverse);
      const double pij = std::exp(lq_forward + la) * chain.delta;
      row[j] = pij;
      off += pij;
    }
    const double diag = 1.0 - off;
    if (diag < 0.0)
      throw DiscretizationError("build_discretized: negative holding probability at x = " +
                                format_double(chain.grid[i]) + "; use a finer grid");
    row[i] = diag;
  }
  return chain;
}

double row_sum_residual(const DiscretizedChain& chain) {
  const std::size_t n = chain.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::fabs(simd::sum(chain.P.data() + i * n, n) - 1.0));
  return worst;
}

double stationarity_residual(const DiscretizedChain& chain) {
  const std::size_t n = chain.size();
  std::vector<double> out(n);
  simd::vecmat(chain.pi_hat.data(), chain.P.data(), n, n, out.data());
  return simd::l1_distance(out.data(), chain.pi_hat.data(), n);
}

double reversibility_residual(const DiscretizedChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double flow_ij = chain.pi_hat[i] * chain.P(i, j);
      const double flow_ji = chain.pi_hat[j] * chain.P(j, i);
      worst = std::max(worst, std::fabs(flow_ij - flow_ji));
    }
  }
  return worst;
}

SpectralResult spectral_analysis(const DiscretizedChain& chain, const SpectralOptions& options) {
  const std::size_t n = chain.size();
  std::vector<double> u = sqrt_pi(chain);
  RowMatrix s = symmetrised(chain);
  if (n > options.dense_limit) return lanczos(DeflatedOperator(std::move(s), std::move(u)), options);

  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd a = s - uv * uv.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("spectral_gap: eigen-solver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  SpectralResult result;
  result.lambda2 = std::fabs(hi) >= std::fabs(lo) ? hi : lo;
  result.gap = std::clamp(1.0 - std::fabs(result.lambda2), 0.0, 1.0);
  return result;
}

double spectral_gap(const DiscretizedChain& chain) { return spectral_analysis(chain).gap; }

std::vector<double> tv_decay_curve(const DiscretizedChain& chain, std::size_t start_index,
                                   std::size_t n_max) {
  const std::size_t n = chain.size();
  if (start_index >= n) throw ParameterError("tv_decay_curve: start index out of range");
  std::vector<double> v(n, 0.0), next(n);
  v[start_index] = 1.0;
  std::vector<double> tv;
  tv.reserve(n_max + 1);
  tv.push_back(0.5 * simd::l1_distance(v.data(), chain.pi_hat.data(), n));
  for (std::size_t step = 0; step < n_max; ++step) {
    simd::vecmat(v.data(), chain.P.data(), n, n, next.data());
    v.swap(next);
    tv.push_back(0.5 * simd::l1_distance(v.data(), chain.pi_hat.data(), n));
  }
  return tv;
}

DecayFit fit_decay_rate(const std::vector<double>& tv, double tail_fraction, double floor) {
  std::size_t usable = 0;
  while (usable < tv.size() && tv[usable] > floor) ++usable;
  const auto first = static_cast<std::size_t>(
      std::floor(static_cast<double>(usable) * (1.0 - tail_fraction)));
  DecayFit fit;
  fit.points = usable - first;
  if (fit.points < 3) throw NumericError("fit_decay_rate: too few points above the floor");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = first; i < usable; ++i) {
    const double x = static_cast<double>(i);
    const double y = std::log(tv[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const auto m = static_cast<double>(fit.points);
  const double cxx = sxx - sx * sx / m;
  const double cxy = sxy - sx * sy / m;
  const double cyy = syy - sy * sy / m;
  const double slope = cxy / cxx;
  fit.rate = std::exp(slope);
  fit.r_squared = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
  return fit;
}

std::vector<GapScanPoint> gap_growth_scan(const TargetDensity& target,
                                          const CovarianceField& field, double h,
                                          const std::vector<double>& L_values, double delta) {
  if (!(delta > 0)) throw ParameterError("gap_growth_scan: delta must be positive");
  if (!std::is_sorted(L_values.begin(), L_values.end()) ||
      std::adjacent_find(L_values.begin(), L_values.end()) != L_values.end())
    throw ParameterError("gap_growth_scan: L values must be strictly increasing");
  std::vector<GapScanPoint> out;
  for (double L : L_values) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * L / delta)) + 1;
    const DiscretizedChain chain = build_discretized(target, field, h, L, n);
    const SpectralResult spec = spectral_analysis(chain);
    out.push_back({L, n, spec.gap, spec.lambda2, stationarity_residual(chain)});
  }
  return out;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Geometric:
      return "geometric";
    case Verdict::NonGeometric:
      return "non-geometric";
    case Verdict::Inconclusive:
      break;
  }
  return "INCONCLUSIVE";
}

Verdict classify_gap_ratio(double ratio, double upper, double lower) {
  if (ratio > upper) return Verdict::Geometric;
  if (ratio < lower) return Verdict::NonGeometric;
  return Verdict::Inconclusive;
}

double gap_ratio(const std::vector<GapScanPoint>& scan) {
  if (scan.size() < 2) throw ParameterError("gap_ratio: need at least two scan points");
  return scan.back().gap / scan.front().gap;
}

void write_scan_csv(std::ostream& out, const std::vector<GapScanPoint>& scan,
                    const std::string& config_digest, std::uint64_t seed) {
  write_header_comment(out, config_digest, seed);
  out << "L,n,gap,lambda2,construction_residual\n";
  for (const auto& p : scan) {
    out << format_double(p.L) << ',' << p.n << ',' << format_double(p.gap) << ','
        << format_double(p.lambda2) << ',' << format_double(p.construction_residual) << '\n';
  }
}

}  // namespace pdrwm

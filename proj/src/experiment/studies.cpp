#include "pdrwm/experiment/studies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdrwm/errors.hpp"

namespace pdrwm::experiment {
namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

DriftStudy drift_study(std::string label, const TargetDensity& target,
                       const CovarianceField& field, const LyapunovFunction& v,
                       const std::vector<double>& xs, double h, std::size_t n,
                       std::uint64_t seed) {
  DriftStudy study;
  study.label = std::move(label);
  study.h = h;
  study.xs = xs;
  study.n = n;
  study.seed = seed;
  const GaussianProposal kernel(field, h);
  for (double x : xs) {
    study.estimates.push_back(drift_ratio(target, kernel, v, point1(x), n, seed));
    study.quadrature.push_back(drift_ratio_quadrature(target, field, h, v, x));
  }
  return study;
}

}  // namespace

DriftStudy exponential_drift_study(const std::vector<double>& xs, double h, std::size_t n,
                                   std::uint64_t seed) {
  return drift_study("exponential_tail_power1.5", make_exponential_tail(1.0), power_field(1.5),
                     LyapunovFunction(lyapunov::ExpAbs{0.5}), xs, h, n, seed);
}

DriftStudy polynomial_drift_study(const std::vector<double>& xs, double h, std::size_t n,
                                  std::uint64_t seed) {
  return drift_study("polynomial_tail_quadratic", make_polynomial_tail(2.0), quadratic_field(1.0),
                     LyapunovFunction(lyapunov::AbsPow{0.25}), xs, h, n, seed);
}

Check drift_contracts(const DriftStudy& study, double quadrature_tolerance) {
  Check check{true, ""};
  std::ostringstream detail;
  for (std::size_t i = 0; i < study.xs.size(); ++i) {
    const DriftEstimate& e = study.estimates[i];
    const double upper = e.value + 3.0 * e.std_error;
    const double rel = std::fabs(e.value - study.quadrature[i]) / study.quadrature[i];
    if (!(upper < 1.0) || !(rel <= quadrature_tolerance)) check.passed = false;
    detail << "x=" << fmt(study.xs[i]) << ": " << fmt(e.value, 7) << "+3se=" << fmt(upper, 7)
           << " quad=" << fmt(study.quadrature[i], 7) << "; ";
  }
  check.detail = detail.str();
  return check;
}

Check drift_fails_somewhere(const DriftStudy& study) {
  Check check{false, ""};
  std::ostringstream detail;
  for (std::size_t i = 0; i < study.xs.size(); ++i) {
    const DriftEstimate& e = study.estimates[i];
    if (e.value >= 1.0) check.passed = true;
    detail << "x=" << fmt(study.xs[i]) << ": " << fmt(e.value, 7) << " (se " << fmt(e.std_error, 2)
           << ", quad " << fmt(study.quadrature[i], 7) << "); ";
  }
  check.detail = detail.str();
  return check;
}

MassStudy acceptance_mass_study(const std::vector<double>& xs, double epsilon, std::size_t n,
                                std::uint64_t seed) {
  MassStudy study;
  study.xs = xs;
  study.epsilon = epsilon;
  study.n = n;
  study.seed = seed;
  const TargetDensity target = make_exponential_tail(1.0);
  const GaussianProposal kernel(power_field(4.0), 1.0);
  for (double x : xs) {
    study.masses.push_back(acceptance_set_mass(target, kernel, point1(x), epsilon, n, seed));
    study.rejections.push_back(rejection_probability(target, kernel, point1(x), n, seed));
  }
  return study;
}

Check mass_decreasing(const MassStudy& study, double last_max) {
  Check check{true, ""};
  std::ostringstream detail;
  for (std::size_t i = 0; i < study.xs.size(); ++i) {
    if (i > 0 && !(study.masses[i].value < study.masses[i - 1].value)) check.passed = false;
    detail << "x=" << fmt(study.xs[i]) << ": " << fmt(study.masses[i].value, 5) << "; ";
  }
  if (study.masses.empty() || !(study.masses.back().value < last_max)) check.passed = false;
  check.detail = detail.str();
  return check;
}

std::vector<RectangleRejectionRow> rectangle_rejection_study(int p_lo, int p_hi, std::size_t n,
                                                             std::uint64_t seed) {
  const TargetDensity target = make_rectangle();
  const CircleProposal kernel;
  std::vector<RectangleRejectionRow> rows;
  for (int p = p_lo; p <= p_hi; ++p) {
    RectangleRejectionRow row;
    row.p = p;
    const Point x = point2(0.0, p);
    row.exact = exact_rejection_QR(x);
    row.bound = exact_rejection_lower_bound_QR(p);
    row.corrected_bound = corrected_rejection_lower_bound_QR(p);
    const Estimate mc = rejection_probability(target, kernel, x, n, seed);
    row.monte_carlo = mc.value;
    row.monte_carlo_se = mc.std_error;
    rows.push_back(row);
  }
  return rows;
}

Check rectangle_bound_holds(const std::vector<RectangleRejectionRow>& rows) {
  Check check{true, ""};
  std::ostringstream detail;
  bool saw_six = false;
  for (const auto& r : rows) {
    if (!(r.exact >= r.bound)) check.passed = false;
    if (r.p == 6) {
      saw_six = true;
      if (!(r.exact > 0.99)) check.passed = false;
    }
    detail << "p=" << r.p << ": r=" << fmt(r.exact, 6) << " bound=" << fmt(r.bound, 6) << "; ";
  }
  if (!saw_six) check.passed = false;
  check.detail = detail.str();
  return check;
}

ReturnChainStudy ellipse_return_study(std::size_t n_steps, std::uint64_t seed) {
  ReturnChainStudy study;
  study.sweep = hemisphere_sweep(2, 12);
  const TargetDensity target = make_rectangle();
  const EllipseProposal kernel;
  study.chain = run_chain(target, kernel, point2(0.0, 10.5), n_steps, seed);
  study.reached_level_one =
      std::any_of(study.chain.states.begin(), study.chain.states.end(),
                  [](const Point& s) { return rectangle_level(s) == 1; });
  const LyapunovFunction v(lyapunov::RectangleV{});
  study.mean_v = estimate_expectation(
      study.chain, [&](const Point& s) { return v.evaluate(s); }, study.chain.states.size() / 2);
  return study;
}

Check ellipse_return_holds(const ReturnChainStudy& study) {
  const auto failing = std::count_if(study.sweep.begin(), study.sweep.end(),
                                     [](const SweepRow& r) { return !r.check.passes; });
  Check check;
  check.passed = study.sweep.size() >= 50 && failing == 0 && study.reached_level_one &&
                 study.mean_v.value < 4.0;
  check.detail = std::to_string(study.sweep.size()) + " sweep points, " +
                 std::to_string(failing) + " failing; chain reached level 1: " +
                 (study.reached_level_one ? "yes" : "no") + "; mean V over second half " +
                 fmt(study.mean_v.value, 5) + " (se " + fmt(study.mean_v.std_error, 2) + ")";
  return check;
}

EsjdStudy esjd_study(const std::vector<double>& b_values, std::size_t n_steps,
                     std::uint64_t seed) {
  EsjdStudy study;
  study.n_steps = n_steps;
  study.seed = seed;
  EsjdOptions options;
  options.tune_seed = seed + 0x9e3779b97f4a7c15ULL;
  study.points = esjd_scan(make_standard_normal(), b_values, n_steps, seed, options);
  return study;
}

Check esjd_optimum(const EsjdStudy& study) {
  Check check{true, ""};
  if (study.points.empty()) return {false, "no scan points"};
  std::ostringstream detail;
  const EsjdPoint* best = &study.points.front();
  for (const auto& p : study.points) {
    if (std::fabs(p.acceptance - 0.44) > 0.05) check.passed = false;
    if (p.esjd > best->esjd) best = &p;
    detail << "b=" << fmt(p.b, 2) << ": " << fmt(p.esjd, 4) << " (acc " << fmt(p.acceptance, 3)
           << "); ";
  }
  if (!(best->b >= 1.2 - 1e-9 && best->b <= 2.0 + 1e-9)) check.passed = false;
  detail << "argmax b=" << fmt(best->b, 2);
  check.detail = detail.str();
  return check;
}

std::string to_string(TailKind tail) {
  switch (tail) {
    case TailKind::Polynomial:
      return "polynomial";
    case TailKind::Subexponential:
      return "subexponential";
    case TailKind::LogConcave:
      break;
  }
  return "log_concave";
}

std::string to_string(GrowthKind growth) {
  switch (growth) {
    case GrowthKind::SubQuadratic:
      return "sub_quadratic";
    case GrowthKind::Quadratic:
      return "quadratic";
    case GrowthKind::SuperQuadratic:
      break;
  }
  return "super_quadratic";
}

Verdict expected_verdict(const GridCellSpec& spec) {
  switch (spec.growth) {
    case GrowthKind::SubQuadratic:
      return spec.tail == TailKind::Polynomial ? Verdict::NonGeometric : Verdict::Geometric;
    case GrowthKind::Quadratic:
      return Verdict::Geometric;
    case GrowthKind::SuperQuadratic:
      break;
  }
  return Verdict::NonGeometric;
}

GridCell classify_cell(const GridCellSpec& spec) {
  GridCell cell;
  cell.spec = spec;
  cell.expected = expected_verdict(spec);

  TargetDensity target = make_exponential_tail(1.0);
  LyapunovFunction v(lyapunov::ExpAbs{0.5});
  double sub_b = 1.0;
  switch (spec.tail) {
    case TailKind::Polynomial:
      target = make_polynomial_tail(2.0);
      v = LyapunovFunction(lyapunov::AbsPow{0.25});
      break;
    case TailKind::Subexponential:
      target = make_subexponential_tail(1.0, 0.5);
      v = LyapunovFunction(lyapunov::ExpAbsPow{0.25, 0.5});
      sub_b = 1.5;
      break;
    case TailKind::LogConcave:
      break;
  }
  CovarianceField field = constant_field(Matrix::Identity(1, 1));
  switch (spec.growth) {
    case GrowthKind::SubQuadratic:
      if (!spec.bounded) field = power_field(sub_b);
      break;
    case GrowthKind::Quadratic:
      field = quadratic_field(1.0);
      cell.h = 0.01;
      cell.delta = 0.02;
      break;
    case GrowthKind::SuperQuadratic:
      field = power_field(4.0);
      break;
  }
  cell.target_description = target.description();
  cell.field_description = field.description();
  cell.scan = gap_growth_scan(target, field, cell.h, {20.0, 40.0, 80.0}, cell.delta);
  cell.ratio = gap_ratio(cell.scan);
  cell.verdict = classify_gap_ratio(cell.ratio);
  cell.drift_at_40 = drift_ratio_quadrature(target, field, cell.h, v, 40.0);
  return cell;
}

std::vector<GridCellSpec> full_grid() {
  std::vector<GridCellSpec> cells;
  for (GrowthKind g : {GrowthKind::SubQuadratic, GrowthKind::Quadratic, GrowthKind::SuperQuadratic}) {
    for (TailKind t : {TailKind::Polynomial, TailKind::Subexponential, TailKind::LogConcave}) {
      const bool bounded = g == GrowthKind::SubQuadratic && t == TailKind::Polynomial;
      cells.push_back({t, g, bounded});
    }
  }
  return cells;
}

}  // namespace pdrwm::experiment

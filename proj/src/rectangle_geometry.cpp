#include "pdrwm/rectangle_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdrwm/csv.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/target_densities.hpp"

namespace pdrwm {
namespace {

constexpr double kAbsTol = 1e-8;

struct Geometry {
  double c1, c2, a;
};

Geometry geometry(const Shape& shape) {
  if (const auto* d = std::get_if<Disc>(&shape)) return {d->centre(0), d->centre(1), 1.0};
  const auto& e = std::get<Ellipse>(shape);
  if (!(e.semi_width > 0)) throw ParameterError("ellipse semi-width must be positive");
  return {e.centre(0), e.centre(1), e.semi_width};
}

// Area of {(y1, y2): |y1 - c1| <= a cos(theta), y2 = c2 + sin(theta),
// |y1| <= w, y2 in [lo, hi]} with the substitution y2 = c2 + sin(theta).
double strip_area(const Geometry& g, double w, double lo, double hi) {
  lo = std::max(lo, g.c2 - 1.0);
  hi = std::min(hi, g.c2 + 1.0);
  if (!(lo < hi)) return 0.0;
  const double t_lo = std::asin(std::clamp(lo - g.c2, -1.0, 1.0));
  const double t_hi = std::asin(std::clamp(hi - g.c2, -1.0, 1.0));
  auto f = [&](double t) {
    const double c = std::cos(t);
    const double half = g.a * c;
    const double len = std::min(g.c1 + half, w) - std::max(g.c1 - half, -w);
    return len > 0.0 ? len * c : 0.0;
  };
  // Kinks where a chord end crosses +-w.
  std::vector<double> breaks{t_lo, t_hi};
  for (double edge : {w - g.c1, w + g.c1, -w - g.c1, -w + g.c1}) {
    const double ratio = std::fabs(edge) / g.a;
    if (ratio > 0.0 && ratio < 1.0) {
      const double t = std::acos(ratio);
      for (double s : {t, -t}) {
        if (s > t_lo && s < t_hi) breaks.push_back(s);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, breaks[i], breaks[i + 1], 15, 1e-14, &err);
    error += err;
  }
  if (error > kAbsTol)
    throw NumericError("overlap_area: quadrature error " + format_double(error) +
                       " above tolerance");
  return total;
}

std::pair<int, int> reachable_levels(const Geometry& g) {
  const int lo = std::max(1, static_cast<int>(std::floor(g.c2 - 1.0)));
  const int hi = static_cast<int>(std::floor(g.c2 + 1.0));
  return {lo, hi};
}

void require_in_support(const Point& x) {
  if (x.size() != 2 || !make_rectangle().in_support(x))
    throw DomainError("point (" + format_double(x(0)) + ", " + format_double(x(1)) +
                      ") is outside the rectangle density support");
}

}  // namespace

LevelRectangle LevelRectangle::level(int k) {
  if (k < 1) throw ParameterError("LevelRectangle: k must be >= 1");
  LevelRectangle r;
  r.k = k;
  r.y2_lo = k;
  r.y2_hi = k + 1.0;
  r.half_width = std::pow(3.0, 1 - k);
  r.density_weight = std::pow(3.0, -k);
  return r;
}

double overlap_area(const Shape& shape, int k, double band_lo, double band_hi) {
  const LevelRectangle rect = LevelRectangle::level(k);
  const Geometry g = geometry(shape);
  if (!std::isfinite(g.c1) || !std::isfinite(g.c2)) throw ParameterError("shape centre not finite");
  return strip_area(g, rect.half_width, std::max(rect.y2_lo, band_lo),
                    std::min(rect.y2_hi, band_hi));
}

double support_overlap_area(const Shape& shape, double band_lo, double band_hi) {
  const auto [lo, hi] = reachable_levels(geometry(shape));
  double total = 0.0;
  for (int k = lo; k <= hi; ++k) total += overlap_area(shape, k, band_lo, band_hi);
  return total;
}

double exact_rejection_lower_bound_QR(int p) {
  if (p < 3) throw ParameterError("exact_rejection_lower_bound_QR: p must be >= 3");
  const double pi = std::numbers::pi;
  return 1.0 - (1.0 / (std::pow(3.0, p - 2) * pi) + 1.0 / (std::pow(3.0, p - 1) * pi));
}

double corrected_rejection_lower_bound_QR(int p) {
  return 1.0 - 2.0 * (1.0 - exact_rejection_lower_bound_QR(p));
}

double exact_rejection_QR(const Point& x) {
  require_in_support(x);
  const int k = rectangle_level(x);
  const Shape disc = Disc{x};
  const auto [lo, hi] = reachable_levels(geometry(disc));
  double accepted = 0.0;
  for (int kk = lo; kk <= hi; ++kk)
    accepted += overlap_area(disc, kk) * std::min(1.0, std::pow(3.0, k - kk));
  return std::clamp(1.0 - accepted / std::numbers::pi, 0.0, 1.0);
}

double exact_rejection_QP(const Point& x) {
  require_in_support(x);
  const int k = rectangle_level(x);
  const double w = std::pow(3.0, 1 - k);
  const auto [lo, hi] = reachable_levels({x(0), x(1), w});
  double accepted = 0.0;
  for (int kk = lo; kk <= hi; ++kk) {
    // E_x ∩ {y : x in E_y} is the concentric ellipse of the narrower width.
    const double w_accept = std::min(w, std::pow(3.0, 1 - kk));
    accepted += overlap_area(Ellipse{x, w_accept}, kk);
  }
  return std::clamp(1.0 - accepted / (std::numbers::pi * w), 0.0, 1.0);
}

HemisphereCheck hemisphere_overlap_check(int k, const Point& x) {
  if (k < 2) throw ParameterError("hemisphere_overlap_check: level must be >= 2");
  require_in_support(x);
  if (rectangle_level(x) != k) throw DomainError("hemisphere_overlap_check: x is not in level k");
  const Shape e = Ellipse{x, std::pow(3.0, 1 - k)};
  HemisphereCheck out;
  out.lower_overlap = support_overlap_area(e, -std::numeric_limits<double>::infinity(), x(1));
  out.upper_overlap = support_overlap_area(e, x(1), std::numeric_limits<double>::infinity());
  out.passes = out.lower_overlap > out.upper_overlap;
  return out;
}

bool ellipse_crosses_level_boundary(const Point& x) {
  return std::floor(x(1) - 1.0) + 1.0 < x(1) + 1.0;
}

std::vector<SweepRow> hemisphere_sweep(int k_lo, int k_hi) {
  std::vector<SweepRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double w = std::pow(3.0, 1 - k);
    for (double dy : {0.25, 0.5, 0.75}) {
      for (double fx : {0.0, 0.5, -0.9}) {
        const Point x = point2(fx * w, k + dy);
        if (!ellipse_crosses_level_boundary(x)) continue;
        rows.push_back({k, x(0), x(1), hemisphere_overlap_check(k, x)});
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_digest, std::uint64_t seed) {
  write_header_comment(out, config_digest, seed);
  out << "k,x1,x2,lower_overlap,upper_overlap,passes\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.x1) << ',' << format_double(r.x2) << ','
        << format_double(r.check.lower_overlap) << ',' << format_double(r.check.upper_overlap)
        << ',' << (r.check.passes ? "true" : "false") << '\n';
  }
}

}  // namespace pdrwm

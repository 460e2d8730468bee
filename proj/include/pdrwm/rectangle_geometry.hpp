#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "pdrwm/types.hpp"

namespace pdrwm {

/// Level k >= 1 of the rectangle density: y2 in [k, k+1), |y1| <= 3^{1-k},
/// density 3^{-k}.
struct LevelRectangle {
  int k = 1;
  double y2_lo = 1.0;
  double y2_hi = 2.0;
  double half_width = 1.0;
  double density_weight = 1.0 / 3.0;

  static LevelRectangle level(int k);
};

/// Unit disc about `centre`.
struct Disc {
  Point centre;
};

/// Ellipse about `centre` with horizontal semi-axis `semi_width` and
/// vertical semi-axis 1.
struct Ellipse {
  Point centre;
  double semi_width;
};

using Shape = std::variant<Disc, Ellipse>;

/// |shape ∩ LevelRectangle(k) ∩ {band_lo <= y2 <= band_hi}| by adaptive
/// Gauss-Kronrod quadrature over the vertical extent (absolute tolerance
/// 1e-8, NumericError otherwise).
double overlap_area(const Shape& shape, int k,
                    double band_lo = -std::numeric_limits<double>::infinity(),
                    double band_hi = std::numeric_limits<double>::infinity());

/// Sum of overlap_area over every level the shape reaches.
double support_overlap_area(const Shape& shape,
                            double band_lo = -std::numeric_limits<double>::infinity(),
                            double band_hi = std::numeric_limits<double>::infinity());

/// 1 - (1/(3^{p-2} pi) + 1/(3^{p-1} pi)), p >= 3.
double exact_rejection_lower_bound_QR(int p);

/// Same with the full areas of the two rectangles the disc straddles:
/// 1 - 2 (1/(3^{p-2} pi) + 1/(3^{p-1} pi)).
double corrected_rejection_lower_bound_QR(int p);

/// r(x) for the unit-disc proposal: 1 - (1/pi) sum_k' |D_x ∩ R_k'| min(1, 3^{k-k'}).
/// DomainError for x outside the support.
double exact_rejection_QR(const Point& x);

/// r(x) for the ellipse proposal. The density and proposal-area ratios
/// cancel, so a move is accepted iff x lies in E_y.
double exact_rejection_QP(const Point& x);

struct HemisphereCheck {
  double lower_overlap = 0.0;
  double upper_overlap = 0.0;
  bool passes = false;
};

/// |E_x ∩ R ∩ {y2 < x2}| against |E_x ∩ R ∩ {y2 > x2}|; x must lie in
/// level k >= 2.
HemisphereCheck hemisphere_overlap_check(int k, const Point& x);

/// True when the vertical extent of E_x contains a level boundary in its
/// interior.
bool ellipse_crosses_level_boundary(const Point& x);

struct SweepRow {
  int k = 0;
  double x1 = 0.0;
  double x2 = 0.0;
  HemisphereCheck check;
};

/// Probe grid over levels k_lo..k_hi: x2 = k + {0.25, 0.5, 0.75} and
/// x1 = {0, 0.5, -0.9} * 3^{1-k}, boundary-crossing points only.
std::vector<SweepRow> hemisphere_sweep(int k_lo = 2, int k_hi = 12);

/// Columns k, x1, x2, lower_overlap, upper_overlap, passes.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_digest, std::uint64_t seed);

}  // namespace pdrwm

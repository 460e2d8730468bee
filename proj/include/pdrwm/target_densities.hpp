#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "pdrwm/types.hpp"

namespace pdrwm {

namespace tail {
struct LogConcave {
  double a;
};
struct Subexponential {
  double a;
  double beta;
};
struct Polynomial {
  double p;
};
struct Compact {};
struct Other {};
}  // namespace tail

using TailClass = std::variant<tail::LogConcave, tail::Subexponential, tail::Polynomial,
                               tail::Compact, tail::Other>;

std::string describe(const TailClass& tail_class);

/// Unnormalised log-density with its declared dimension and tail class.
///
/// log_density returns -infinity exactly where support_test is false.
/// Instances are immutable and may be shared between threads.
class TargetDensity {
 public:
  using LogDensityFn = std::function<double(const Point&)>;
  using SupportFn = std::function<bool(const Point&)>;

  TargetDensity(int dim, LogDensityFn log_density, SupportFn support_test, TailClass tail_class,
                std::string description);

  int dim() const { return dim_; }
  const TailClass& tail_class() const { return tail_class_; }
  const std::string& description() const { return description_; }

  double log_density(const Point& x) const;
  bool in_support(const Point& x) const { return support_(x); }

  /// Scalar convenience for the one dimensional families.
  double log_density(double x) const { return log_density(point1(x)); }

 private:
  int dim_;
  LogDensityFn log_density_;
  SupportFn support_;
  TailClass tail_class_;
  std::string description_;
};

/// log pi(x) = -a|x|.
TargetDensity make_exponential_tail(double a);

/// log pi(x) = -a|x|^beta, 0 < beta < 1.
TargetDensity make_subexponential_tail(double a, double beta);

/// log pi(x) = -p log(1 + |x|); exact |x|^{-p} decay in the tails.
TargetDensity make_polynomial_tail(double p);

/// Standard normal in one dimension (log pi = -x^2/2); used by the
/// step-size and ESJD experiments.
TargetDensity make_standard_normal();

/// log pi(x, y) = -x^2 - y^2 - x^2 y^2.
TargetDensity make_ridge_2d();

/// Level k = floor(y2) >= 1 of the rectangle density.
int rectangle_level(const Point& y);

/// Piecewise-constant staircase: density 3^{-k} on
/// {y2 >= 1, |y1| <= 3^{1-k}}, k = floor(y2).
TargetDensity make_rectangle();

/// Total unnormalised mass of the rectangle density, sum_k 6 * 9^{-k} = 3/4.
double rectangle_total_mass();

}  // namespace pdrwm

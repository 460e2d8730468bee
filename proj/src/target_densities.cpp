#include "pdrwm/target_densities.hpp"

#include <cmath>
#include <limits>

#include "pdrwm/errors.hpp"

namespace pdrwm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool always(const Point&) { return true; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string describe(const TailClass& tail_class) {
  return std::visit(
      Overloaded{
          [](const tail::LogConcave& t) { return "LogConcave(" + format_double(t.a) + ")"; },
          [](const tail::Subexponential& t) {
            return "Subexponential(" + format_double(t.a) + "," + format_double(t.beta) + ")";
          },
          [](const tail::Polynomial& t) { return "Polynomial(" + format_double(t.p) + ")"; },
          [](const tail::Compact&) { return std::string("Compact"); },
          [](const tail::Other&) { return std::string("Other"); },
      },
      tail_class);
}

TargetDensity::TargetDensity(int dim, LogDensityFn log_density, SupportFn support_test,
                             TailClass tail_class, std::string description)
    : dim_(dim),
      log_density_(std::move(log_density)),
      support_(std::move(support_test)),
      tail_class_(tail_class),
      description_(std::move(description)) {
  if (dim_ < 1) throw ParameterError("target dimension must be positive");
}

double TargetDensity::log_density(const Point& x) const {
  if (x.size() != dim_) throw ParameterError("point dimension does not match target");
  if (!support_(x)) return kNegInf;
  return log_density_(x);
}

TargetDensity make_exponential_tail(double a) {
  if (!(a > 0)) throw ParameterError("exponential tail: a must be positive");
  return TargetDensity(
      1, [a](const Point& x) { return -a * std::abs(x(0)); }, always, tail::LogConcave{a},
      "exponential(a=" + format_double(a) + ")");
}

TargetDensity make_subexponential_tail(double a, double beta) {
  if (!(a > 0)) throw ParameterError("subexponential tail: a must be positive");
  if (!(beta > 0 && beta < 1)) throw ParameterError("subexponential tail: beta must lie in (0,1)");
  return TargetDensity(
      1, [a, beta](const Point& x) { return -a * std::pow(std::abs(x(0)), beta); }, always,
      tail::Subexponential{a, beta},
      "subexponential(a=" + format_double(a) + ",beta=" + format_double(beta) + ")");
}

TargetDensity make_polynomial_tail(double p) {
  if (!(p >= 1)) throw ParameterError("polynomial tail: p must be >= 1");
  return TargetDensity(
      1, [p](const Point& x) { return -p * std::log1p(std::abs(x(0))); }, always,
      tail::Polynomial{p}, "polynomial(p=" + format_double(p) + ")");
}

TargetDensity make_standard_normal() {
  return TargetDensity(
      1, [](const Point& x) { return -0.5 * x(0) * x(0); }, always, tail::Other{},
      "standard_normal");
}

TargetDensity make_ridge_2d() {
  return TargetDensity(
      2,
      [](const Point& x) {
        const double a = x(0) * x(0);
        const double b = x(1) * x(1);
        return -a - b - a * b;
      },
      always, tail::Other{}, "ridge2d");
}

int rectangle_level(const Point& y) { return static_cast<int>(std::floor(y(1))); }

TargetDensity make_rectangle() {
  auto support = [](const Point& y) {
    if (!(y(1) >= 1.0)) return false;
    const int k = rectangle_level(y);
    return std::abs(y(0)) <= std::pow(3.0, 1 - k);
  };
  static const double log3 = std::log(3.0);
  return TargetDensity(
      2, [](const Point& y) { return -rectangle_level(y) * log3; }, support, tail::Other{},
      "rectangle");
}

// Level k contributes 3^{-k} * (2 * 3^{1-k}) * 1 = 6 * 9^{-k}.
double rectangle_total_mass() { return 6.0 * (1.0 / 9.0) / (1.0 - 1.0 / 9.0); }

}  // namespace pdrwm

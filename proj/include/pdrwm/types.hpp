#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pdrwm {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Every stochastic operation takes its generator explicitly.
using Rng = std::mt19937_64;

inline Point point1(double x) {
  Point p(1);
  p(0) = x;
  return p;
}

inline Point point2(double x1, double x2) {
  Point p(2);
  p << x1, x2;
  return p;
}

/// FNV-1a hash rendered as 16 hex digits; identifies a configuration
/// description in trajectories, reports and CSV headers.
std::string digest(std::string_view description);

/// Shortest round-trip text form of a double (for descriptions and CSV).
std::string format_double(double value);

}  // namespace pdrwm

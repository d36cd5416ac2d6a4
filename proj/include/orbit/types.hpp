#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace orbit {

using Scalar = double;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when an operation is evaluated at the singular point x = 0.
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown on malformed configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr Scalar kPi = 3.14159265358979323846;

/// 17-significant-digit round-trip formatting used by every text output.
inline std::string fmt17(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace orbit

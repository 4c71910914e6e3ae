#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ibcsym {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double pi = std::numbers::pi;

// Raised when an iterative or limiting procedure does not deliver the
// requested accuracy (quadrature, extrapolation, step-size control).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reduce a phase to (-pi, pi].
inline double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

}  // namespace ibcsym

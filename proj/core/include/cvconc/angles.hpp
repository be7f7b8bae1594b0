#ifndef CVCONC_ANGLES_HPP
#define CVCONC_ANGLES_HPP

#include <cmath>
#include <numbers>

namespace cvconc {

inline constexpr double kPi = std::numbers::pi;

/// Maps an angle to (-pi, pi].
inline double reduce_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

}  // namespace cvconc

#endif  // CVCONC_ANGLES_HPP

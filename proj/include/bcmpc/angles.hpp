#pragma once

#include <cmath>
#include <numbers>

namespace bcmpc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kKnotToMps = 0.5144;

/// Wraps an angle to (-pi, pi].
inline double wrap_to_pi(double angle) {
    double wrapped = std::remainder(angle, 2.0 * kPi);
    if (wrapped <= -kPi) wrapped += 2.0 * kPi;
    return wrapped;
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace bcmpc

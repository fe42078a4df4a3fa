#pragma once

#include <cmath>
#include <numbers>

namespace wezopt {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double a) {
    double w = std::remainder(a, kTwoPi);
    if (w >= kPi) w -= kTwoPi;
    return w;
}

/// -1, 0 or +1 depending on the sign of x.
inline double sign_of(double x) {
    return (x > 0.0) ? 1.0 : ((x < 0.0) ? -1.0 : 0.0);
}

}  // namespace wezopt

#pragma once

#include <stdexcept>

#include "wezopt/angles.hpp"

namespace wezopt {

/// Parameters of a range-limited pursuit weapon engagement zone.
///
/// The onboard weapon moves with simple motion at `weapon_speed_ratio` times
/// the opposing vehicle's speed, has maximum range `weapon_range` and
/// captures within `capture_radius`. The ratio must exceed 1 so the zone
/// boundary is defined at every aspect angle.
struct WezParams {
    double weapon_speed_ratio;  // nu > 1
    double weapon_range;        // R > 0
    double capture_radius;      // r_c > 0

    WezParams(double speed_ratio, double range, double capture)
        : weapon_speed_ratio(speed_ratio), weapon_range(range), capture_radius(capture) {
        if (!(speed_ratio > 1.0))
            throw std::invalid_argument("WezParams: weapon_speed_ratio must be > 1");
        if (!(range > 0.0))
            throw std::invalid_argument("WezParams: weapon_range must be > 0");
        if (!(capture > 0.0))
            throw std::invalid_argument("WezParams: capture_radius must be > 0");
    }
    WezParams() : WezParams(1.2, 1.0, 0.2) {}

    bool operator==(const WezParams&) const = default;
};

/// Constant-speed, turn-rate-limited planar vehicle carrying a weapon.
struct VehicleParams {
    double speed;          // v > 0
    double max_turn_rate;  // u_bar > 0
    WezParams wez;

    VehicleParams(double v, double turn_rate, const WezParams& w)
        : speed(v), max_turn_rate(turn_rate), wez(w) {
        if (!(v > 0.0)) throw std::invalid_argument("VehicleParams: speed must be > 0");
        if (!(turn_rate > 0.0))
            throw std::invalid_argument("VehicleParams: max_turn_rate must be > 0");
    }
    VehicleParams() : VehicleParams(1.0, 1.0, WezParams{}) {}

    bool operator==(const VehicleParams&) const = default;
};

/// Planar pose (x, y, heading).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, [-pi, pi)

    bool operator==(const Pose&) const = default;
};

/// Relative engagement state: range and the two aspect angles.
///
/// xi_a is the aspect of the target as seen by the agent (0 when the target
/// flies straight at the agent), xi_t the aspect of the agent as seen by the
/// target. Both normalized to [-pi, pi).
struct ReducedState {
    double r = 0.0;
    double xi_a = 0.0;
    double xi_t = 0.0;

    bool operator==(const ReducedState&) const = default;
};

/// Deterministic part of the reduced-state increment.
struct Drift {
    double b_r = 0.0;
    double b_xi_a = 0.0;
    double b_xi_t = 0.0;
};

/// Thrown when the relative geometry collapses (coincident vehicles).
struct DegenerateGeometryError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown on invalid run configuration or mismatched inputs.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wezopt

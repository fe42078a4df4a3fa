#include "wezopt/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace wezopt {

ReducedState reduce_state(const Pose& agent, const Pose& target) {
    const double dx = target.x - agent.x;
    const double dy = target.y - agent.y;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) throw DegenerateGeometryError("reduce_state: coincident positions");
    const double lambda = std::atan2(dy, dx);  // bearing of the target from the agent
    return {r, wrap_angle(lambda - target.theta + kPi), wrap_angle(lambda - agent.theta)};
}

Drift drift(const ReducedState& state, double u_a, double u_t, const VehicleParams& agent,
            const VehicleParams& target) {
    if (!(state.r > 0.0)) throw DegenerateGeometryError("drift: requires r > 0");
    const double los_rate =
        (target.speed * std::sin(state.xi_a) + agent.speed * std::sin(state.xi_t)) / state.r;
    return {-(target.speed * std::cos(state.xi_a) + agent.speed * std::cos(state.xi_t)),
            los_rate - u_t, los_rate - u_a};
}

std::pair<Pose, Pose> step_full(const Pose& agent, const Pose& target, double u_a, double u_t,
                                const VehicleParams& agent_params,
                                const VehicleParams& target_params, double dt, double sigma,
                                double dw) {
    Pose a{agent.x + agent_params.speed * std::cos(agent.theta) * dt,
           agent.y + agent_params.speed * std::sin(agent.theta) * dt,
           wrap_angle(agent.theta + u_a * dt)};
    Pose t{target.x + target_params.speed * std::cos(target.theta) * dt,
           target.y + target_params.speed * std::sin(target.theta) * dt,
           wrap_angle(target.theta + u_t * dt + sigma * dw)};
    return {a, t};
}

double reduction_residual(const Pose& agent, const Pose& target, double u_a, double u_t,
                          const VehicleParams& agent_params, const VehicleParams& target_params,
                          double dt, double horizon) {
    Pose a = agent;
    Pose t = target;
    ReducedState red = reduce_state(a, t);
    const long long steps = std::llround(horizon / dt);
    double worst = 0.0;
    for (long long s = 0; s < steps; ++s) {
        const Drift d = drift(red, u_a, u_t, agent_params, target_params);
        red.r += d.b_r * dt;
        red.xi_a = wrap_angle(red.xi_a + d.b_xi_a * dt);
        red.xi_t = wrap_angle(red.xi_t + d.b_xi_t * dt);
        if (!(red.r > 1e-9))
            throw DegenerateGeometryError("reduction_residual: trajectory collapses to r ~ 0");
        std::tie(a, t) = step_full(a, t, u_a, u_t, agent_params, target_params, dt, 0.0, 0.0);
        const ReducedState ref = reduce_state(a, t);
        worst = std::max({worst, std::abs(ref.r - red.r), std::abs(wrap_angle(ref.xi_a - red.xi_a)),
                          std::abs(wrap_angle(ref.xi_t - red.xi_t))});
    }
    return worst;
}

}  // namespace wezopt

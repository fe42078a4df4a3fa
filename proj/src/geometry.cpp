#include "wezopt/geometry.hpp"

#include <cmath>

namespace wezopt {

double bez_radius(const WezParams& params, double aspect) {
    // Normalize first so periodicity holds exactly in floating point.
    const double c = std::cos(wrap_angle(aspect));
    const double reach = (params.weapon_range + params.capture_radius) / params.weapon_range;
    // The radicand stays positive for every aspect because reach > 1.
    const double root = std::sqrt(c * c - 1.0 + reach * reach);
    return params.weapon_range / params.weapon_speed_ratio * (c + root);
}

bool in_agent_wez(const ReducedState& state, const WezParams& agent_wez) {
    return state.r <= bez_radius(agent_wez, state.xi_a);
}

bool in_target_wez(const ReducedState& state, const WezParams& target_wez) {
    return state.r <= bez_radius(target_wez, state.xi_t);
}

TerminalClass classify_terminal(const ReducedState& state, const WezParams& agent_wez,
                                const WezParams& target_wez) {
    if (in_target_wez(state, target_wez)) return TerminalClass::InTargetWez;
    if (in_agent_wez(state, agent_wez)) return TerminalClass::InAgentWez;
    return TerminalClass::Neither;
}

}  // namespace wezopt

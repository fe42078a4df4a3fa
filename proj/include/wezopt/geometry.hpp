#pragma once

#include "wezopt/types.hpp"

namespace wezopt {

/// Terminal classification of a relative state against both engagement zones.
/// When a state lies in both zones the target's zone wins: losing dominates.
enum class TerminalClass { InAgentWez, InTargetWez, Neither };

/// Distance from a vehicle to the boundary of its engagement zone as a
/// function of the opponent's aspect angle. Strictly positive, even and
/// 2*pi-periodic in the aspect; largest for a head-on opponent (aspect 0),
/// smallest for a fleeing one (aspect pi).
double bez_radius(const WezParams& params, double aspect);

/// True iff the target lies inside the agent's engagement zone,
/// r <= bez_radius(agent, xi_a). The boundary is inclusive.
bool in_agent_wez(const ReducedState& state, const WezParams& agent_wez);

/// True iff the agent lies inside the target's engagement zone,
/// r <= bez_radius(target, xi_t). The boundary is inclusive.
bool in_target_wez(const ReducedState& state, const WezParams& target_wez);

/// Total, deterministic terminal test. The target-zone branch is evaluated
/// first, so overlap resolves to InTargetWez.
TerminalClass classify_terminal(const ReducedState& state, const WezParams& agent_wez,
                                const WezParams& target_wez);

}  // namespace wezopt

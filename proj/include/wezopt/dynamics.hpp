#pragma once

#include <utility>

#include "wezopt/types.hpp"

namespace wezopt {

/// Collapse the two planar poses into the relative state (r, xi_a, xi_t).
/// Throws DegenerateGeometryError for coincident positions.
ReducedState reduce_state(const Pose& agent, const Pose& target);

/// Drift of the reduced state under turn commands u_a and u_t.
///
///   b_r    = -(v_t cos xi_a + v_a cos xi_t)
///   b_xi_a = -u_t + (v_t sin xi_a + v_a sin xi_t) / r
///   b_xi_t = -u_a + (v_t sin xi_a + v_a sin xi_t) / r
///
/// The shared 1/r term is the line-of-sight rotation rate. Requires r > 0.
Drift drift(const ReducedState& state, double u_a, double u_t, const VehicleParams& agent,
            const VehicleParams& target);

/// One Euler-Maruyama step of the full 6-state kinematics. The target's
/// heading receives the noise increment sigma * dw; pass dw = 0 (or sigma = 0)
/// for a deterministic step. Headings are re-wrapped to [-pi, pi).
std::pair<Pose, Pose> step_full(const Pose& agent, const Pose& target, double u_a, double u_t,
                                const VehicleParams& agent_params,
                                const VehicleParams& target_params, double dt, double sigma,
                                double dw);

/// Consistency check between the full and reduced representations.
///
/// Integrates the full state with step_full and the reduced state with drift
/// (both forward Euler, noise-free, constant controls) over the horizon and
/// returns the largest discrepancy between reduce_state(full) and the
/// directly integrated reduced state. First-order in dt. Throws if the
/// trajectory passes through r ~ 0.
double reduction_residual(const Pose& agent, const Pose& target, double u_a, double u_t,
                          const VehicleParams& agent_params, const VehicleParams& target_params,
                          double dt, double horizon);

}  // namespace wezopt

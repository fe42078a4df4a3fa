#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wezopt/policy_store.hpp"
#include "wezopt/solver.hpp"

namespace wezopt {

struct SimConfig {
    double dt = 0.01;
    double t_max = 60.0;     // stalemate timeout
    double sigma_sim = 0.0;  // target heading noise; 0 for deterministic runs
    std::uint64_t seed = 0;
};

enum class VehicleRole { Agent, Target };

/// Per-vehicle controller. Stored policies are sampled with interpolation;
/// the target side queries its field through the axis exchange so one field
/// format serves both roles.
struct ControllerSpec {
    enum class Kind { ConstantTurn, StoredPolicy, PurePursuit };

    Kind kind = Kind::ConstantTurn;
    double turn_rate = 0.0;
    const ValueField* field = nullptr;

    static ControllerSpec constant_turn(double u) { return {Kind::ConstantTurn, u, nullptr}; }
    static ControllerSpec stored_policy(const ValueField& f) {
        return {Kind::StoredPolicy, 0.0, &f};
    }
    static ControllerSpec pure_pursuit() { return {Kind::PurePursuit, 0.0, nullptr}; }
};

/// Six-way engagement result. Initial* classes are decided before any
/// integration step; the target-zone branch dominates on overlap.
enum class Outcome : int {
    Stalemate = 0,
    InitialBoth = 1,
    InitialTargetWezOnly = 2,
    InitialAgentWezOnly = 3,
    TerminatesInTargetWez = 4,
    TerminatesInAgentWez = 5,
};

std::string to_string(Outcome o);

struct TrajectoryPoint {
    double t;
    Pose agent;
    Pose target;
    double u_a;
    double u_t;
    ReducedState reduced;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;  // empty for Initial* outcomes
    Outcome termination = Outcome::Stalemate;
    double t_f = 0.0;
};

/// Closed-loop integration of the full kinematics under the two controllers.
/// The initial state is classified first (Initial* outcomes short-circuit
/// with an empty trajectory); afterwards the run stops at the first step
/// whose reduced state enters either engagement zone, or at t_max.
Trajectory simulate(const Pose& init_agent, const Pose& init_target,
                    const ControllerSpec& ctrl_agent, const ControllerSpec& ctrl_target,
                    const EngagementParams& vehicles, const SimConfig& config);

Outcome classify_outcome(const Trajectory& trajectory);

/// Smallest lateral separation (cross-track to the target's heading) over the
/// part of the trajectory where the agent is within `window` of abeam.
/// Returns +inf if the agent never draws level.
double min_abeam_offset(const Trajectory& trajectory, double window = 1.0);

/// Initial-condition lattice for outcome sweeps: the agent starts fixed and
/// the target is placed on a uniform (x, y) grid for each listed heading.
struct SweepSpec {
    double x_min = -5.0, x_max = 5.0;
    double y_min = -5.0, y_max = 5.0;
    int nx = 41, ny = 41;
    std::vector<double> headings{0.0, kPi / 2, kPi, 3 * kPi / 2};
    Pose agent_init{0.0, 0.0, kPi / 2};

    double x(int ix) const { return nx > 1 ? x_min + (x_max - x_min) * ix / (nx - 1) : x_min; }
    double y(int iy) const { return ny > 1 ? y_min + (y_max - y_min) * iy / (ny - 1) : y_min; }
};

struct CellResult {
    Outcome outcome = Outcome::Stalemate;
    double t_f = 0.0;
    bool error = false;  // per-cell failure (e.g. coincident start), recorded not thrown
};

struct OutcomeGrid {
    SweepSpec spec;
    // cells[h][iy * nx + ix] for heading index h
    std::vector<std::vector<CellResult>> cells;
};

/// Integer codes used in CSV exports (and the JSON legend): the Outcome enum
/// values, with -1 for per-cell errors.
int outcome_code(const CellResult& cell);

OutcomeGrid sweep(const ControllerSpec& ctrl_agent, const ControllerSpec& ctrl_target,
                  const EngagementParams& vehicles, const SweepSpec& spec, const SimConfig& config,
                  int threads = 0);

/// Capture-time difference t_f(first) - t_f(second) between two agent
/// controllers against a shared target controller, over the lattice cells
/// where both runs end in the agent's zone. Other cells are excluded and
/// counted.
struct CaptureDelta {
    double heading;
    double x;
    double y;
    double tf_first;
    double tf_second;
    double delta() const { return tf_first - tf_second; }
};

struct CaptureComparison {
    std::vector<CaptureDelta> cells;
    int excluded = 0;
};

CaptureComparison compare_capture_times(const ControllerSpec& agent_first,
                                        const ControllerSpec& agent_second,
                                        const ControllerSpec& ctrl_target,
                                        const EngagementParams& vehicles, const SweepSpec& spec,
                                        const SimConfig& config, int threads = 0);

}  // namespace wezopt

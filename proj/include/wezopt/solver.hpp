#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wezopt/dynamics.hpp"
#include "wezopt/grid.hpp"
#include "wezopt/types.hpp"

namespace wezopt {

// ---------------------------------------------------------------------------
// The engagement value problem is solved on a locally consistent Markov-chain
// discretization of the governing HJB equation: upwind one-sided differences
// in all three state dimensions plus a central second difference for the
// heading noise turn each grid cell into a small controlled Markov chain, and
// Jacobi value iteration drives the field to the fixed point. The controlled
// player picks its turn rate from {-u_bar, 0, +u_bar}; the opponent either
// holds a nominal zero command (its uncertainty carried entirely by the noise
// term) or replays a previously solved policy.
// ---------------------------------------------------------------------------

/// Which of the two physical vehicles the solve optimizes for.
enum class ProblemRole { AgentControls, TargetControls };

/// Flavor of a solved field, also the tag persisted in field files.
enum class SolveVariant { BaselineAgent, BaselineTarget, Avoid, Adversarial };

std::string to_string(SolveVariant v);
SolveVariant variant_from_string(const std::string& s);

/// Which angle axis carries the heading-noise diffusion term.
enum class DiffusionAxis { XiA, XiT };

/// The two physical vehicles of the engagement.
struct EngagementParams {
    VehicleParams agent;
    VehicleParams target;
};

/// One solve in its own coordinates: `controlled` is the minimizing player,
/// `opponent` the one whose heading carries the noise. A role-swapped solve
/// is simply the same problem with the vehicles exchanged.
struct Problem {
    VehicleParams controlled;
    VehicleParams opponent;
    double sigma = 1.0;    // heading-noise intensity on the xi_a axis
    double penalty = 100.0;  // terminal cost of losing

    /// Per-node opponent turn rate (adversarial solves); null means 0.
    const std::vector<double>* opponent_controls = nullptr;
    /// Extra penalty-terminal nodes (avoid solves); null means none.
    const std::vector<std::uint8_t>* avoid_mask = nullptr;

    double opponent_control_at(std::size_t idx) const {
        return opponent_controls ? (*opponent_controls)[idx] : 0.0;
    }
};

/// Solver knobs. Defaults match the stock computational setup.
struct SolverConfig {
    double sigma = 1.0;
    double penalty = 100.0;
    double adversarial_sigma = 0.1;
    int max_iterations = 20000;
    double tolerance = 1e-6;  // mean |dV| per cell
    std::vector<int> upsample_schedule{25, 50, 100};
    int threads = 0;  // 0: hardware concurrency
};

/// Candidate turn rates in tie-break preference order: straight first, then
/// the negative turn, then the positive one.
std::array<double, 3> control_levels(const VehicleParams& controlled);

/// Node classification, in the order the update applies it: the two r-rows
/// are value-copy boundaries, then the losing terminal (opponent zone or
/// avoid mask), then the winning terminal, and interior otherwise.
enum class NodeKind : std::uint8_t {
    Interior,
    TerminalZero,     // controlled player's zone: value 0
    TerminalPenalty,  // opponent zone or avoid mask: value M
    InnerBoundary,    // r = 0: copies the r = dr neighbor
    OuterBoundary,    // r = r_max: copies the r = r_max - dr neighbor
};

NodeKind classify_node(const GridSpec& grid, const Problem& problem, int i, int j, int k);

/// Upwind split of a drift component: (max(0, b), max(0, -b)).
std::pair<double, double> split_drift(double b);

/// Thrown by the transition ops when every rate is zero and no time step
/// exists for the cell.
struct StationaryCellError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Interpolation time step that normalizes the upwind rates into transition
/// probabilities: 1 / (|b_r|/dr + |b_xi_a|/dxi_a + |b_xi_t|/dxi_t +
/// sigma^2/dxi^2), with the diffusion term on the chosen axis.
double implicit_time_step(const Drift& drift, const GridSpec& grid, double sigma,
                          DiffusionAxis axis = DiffusionAxis::XiA);

/// Transition probabilities of one cell of the Markov chain. Nonnegative by
/// construction and summing to 1 up to rounding.
struct CellTransition {
    double dt;
    double p_r_up, p_r_dn;
    double p_xi_a_up, p_xi_a_dn;
    double p_xi_t_up, p_xi_t_dn;

    double sum() const { return p_r_up + p_r_dn + p_xi_a_up + p_xi_a_dn + p_xi_t_up + p_xi_t_dn; }
};

CellTransition cell_transition(const Drift& drift, const GridSpec& grid, double sigma,
                               DiffusionAxis axis = DiffusionAxis::XiA);

/// Everything a solve produces besides the trace.
struct FieldMeta {
    SolveVariant variant = SolveVariant::BaselineAgent;
    VehicleParams controlled;
    VehicleParams opponent;
    double sigma = 1.0;
    double penalty = 100.0;
    bool converged = false;
    int iterations = 0;  // sweeps spent on this grid

    bool operator==(const FieldMeta&) const = default;
};

/// Value surface and optimal-control lookup table over a grid. Controls are
/// stored as signed turn rates. Layout: index = (i*n_xi_a + j)*n_xi_t + k.
struct ValueField {
    GridSpec grid;
    FieldMeta meta;
    std::vector<double> values;
    std::vector<double> controls;

    ValueField() = default;
    explicit ValueField(const GridSpec& g)
        : grid(g), values(g.size(), 0.0), controls(g.size(), 0.0) {}
};

/// One minimizing update of a single interior node against a snapshot field.
/// Returns the minimized right-hand side and its argmin control; ties prefer
/// the earlier candidate of control_levels.
struct NodeUpdate {
    double value;
    double control;
};

NodeUpdate bellman_update(const ValueField& snapshot, const Problem& problem, int i, int j, int k);

/// Per-iteration convergence record. `stage_points` identifies the grid of a
/// multi-stage (upsampled) solve.
struct ConvergenceTrace {
    struct Row {
        int stage_points;
        int iteration;
        double mean_dv;
        double wall_s;
    };
    std::vector<Row> rows;

    int iterations_at(int stage_points) const;
};

struct IterationResult {
    ValueField field;
    int iterations = 0;
    bool converged = false;
};

/// Jacobi value iteration to the fixed point: every sweep reads an immutable
/// snapshot of the previous field, so results are bit-identical for any
/// worker count. Stops when the mean |dV| per cell drops below the tolerance
/// or the iteration budget runs out (the field is then flagged, not thrown).
IterationResult value_iteration(const Problem& problem, const GridSpec& grid,
                                const std::vector<double>& initial_values,
                                const SolverConfig& config, ConvergenceTrace* trace = nullptr);

/// Trilinear interpolation of node data at an arbitrary point, periodic in
/// both angles and clamped in r.
double trilinear_at(const GridSpec& grid, const std::vector<double>& data, double r, double xi_a,
                    double xi_t);

/// Interpolate a coarse value surface onto a strictly finer grid with the
/// same r_max. Controls are not interpolated; they are re-derived by the
/// iteration that follows.
std::vector<double> upsample(const GridSpec& coarse, const std::vector<double>& values,
                             const GridSpec& fine);

struct SolveResult {
    ValueField field;
    ConvergenceTrace trace;
};

/// Baseline solve for either role: the opponent's command is modeled as pure
/// heading noise. A TargetControls solve runs with the vehicles exchanged and
/// produces a field in its own (swapped) coordinates; read it in agent
/// coordinates via the axis exchange (r, xi_a, xi_t) -> (r, xi_t, xi_a).
/// Runs the configured upsample schedule before the final grid.
SolveResult solve_baseline(ProblemRole role, const EngagementParams& vehicles,
                           const GridSpec& grid, const SolverConfig& config);

/// Nodes where the target's time-to-go beats the agent's, i.e. where the
/// swap-mapped target baseline value is strictly below the agent's. Both
/// fields must live on the same grid with equal angular resolutions.
std::vector<std::uint8_t> avoid_set(const ValueField& baseline_agent,
                                    const ValueField& baseline_target);

/// Baseline solve that additionally treats the avoid-set nodes as losses.
SolveResult solve_avoid(const EngagementParams& vehicles, const GridSpec& grid,
                        const SolverConfig& config, const std::vector<std::uint8_t>& mask);

/// Solve assuming the target replays its own baseline policy, looked up
/// node-exactly through the axis exchange. Uses config.adversarial_sigma.
SolveResult solve_adversarial(const EngagementParams& vehicles, const GridSpec& grid,
                              const SolverConfig& config, const ValueField& baseline_target);

}  // namespace wezopt

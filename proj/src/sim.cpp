#include "wezopt/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "wezopt/dynamics.hpp"
#include "wezopt/geometry.hpp"

namespace wezopt {

namespace {

constexpr double kTurnRateSlack = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate_controller(const ControllerSpec& c, VehicleRole role,
                         const EngagementParams& vehicles) {
    const VehicleParams& own =
        role == VehicleRole::Agent ? vehicles.agent : vehicles.target;
    switch (c.kind) {
        case ControllerSpec::Kind::ConstantTurn:
            if (std::abs(c.turn_rate) > own.max_turn_rate + kTurnRateSlack)
                throw ConfigError("controller: constant turn rate exceeds the vehicle limit");
            return;
        case ControllerSpec::Kind::PurePursuit:
            return;
        case ControllerSpec::Kind::StoredPolicy: {
            if (!c.field) throw ConfigError("controller: stored policy without a field");
            const FieldMeta& m = c.field->meta;
            if (role == VehicleRole::Agent) {
                if (m.variant == SolveVariant::BaselineTarget)
                    throw ConfigError("controller: a Baseline-T field cannot drive the agent");
                if (!(m.controlled == vehicles.agent) || !(m.opponent == vehicles.target))
                    throw ConfigError(
                        "controller: agent policy was solved for different vehicle parameters");
            } else {
                if (m.variant != SolveVariant::BaselineTarget)
                    throw ConfigError("controller: the target needs a Baseline-T field");
                if (!(m.controlled == vehicles.target) || !(m.opponent == vehicles.agent))
                    throw ConfigError(
                        "controller: target policy was solved for different vehicle parameters");
            }
            return;
        }
    }
}

double eval_controller(const ControllerSpec& c, VehicleRole role, const ReducedState& red,
                       const VehicleParams& own) {
    switch (c.kind) {
        case ControllerSpec::Kind::ConstantTurn:
            return c.turn_rate;
        case ControllerSpec::Kind::PurePursuit: {
            const double bearing_err = role == VehicleRole::Agent ? red.xi_t : red.xi_a;
            return -own.max_turn_rate * sign_of(bearing_err);
        }
        case ControllerSpec::Kind::StoredPolicy: {
            // The target reads its field through the axis exchange.
            const ReducedState query = role == VehicleRole::Agent
                                           ? red
                                           : ReducedState{red.r, red.xi_t, red.xi_a};
            return sample_control(*c.field, query);
        }
    }
    return 0.0;
}

}  // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Stalemate: return "Stalemate";
        case Outcome::InitialBoth: return "InitialBoth";
        case Outcome::InitialTargetWezOnly: return "InitialTargetWezOnly";
        case Outcome::InitialAgentWezOnly: return "InitialAgentWezOnly";
        case Outcome::TerminatesInTargetWez: return "TerminatesInTargetWez";
        case Outcome::TerminatesInAgentWez: return "TerminatesInAgentWez";
    }
    return "Stalemate";
}

Trajectory simulate(const Pose& init_agent, const Pose& init_target,
                    const ControllerSpec& ctrl_agent, const ControllerSpec& ctrl_target,
                    const EngagementParams& vehicles, const SimConfig& config) {
    if (!(config.dt > 0.0)) throw ConfigError("simulate: dt must be > 0");
    if (!(config.t_max > config.dt)) throw ConfigError("simulate: t_max must exceed dt");
    validate_controller(ctrl_agent, VehicleRole::Agent, vehicles);
    validate_controller(ctrl_target, VehicleRole::Target, vehicles);

    Pose a{init_agent.x, init_agent.y, wrap_angle(init_agent.theta)};
    Pose t{init_target.x, init_target.y, wrap_angle(init_target.theta)};
    ReducedState red = reduce_state(a, t);

    Trajectory traj;

    const bool in_t0 = in_target_wez(red, vehicles.target.wez);
    const bool in_a0 = in_agent_wez(red, vehicles.agent.wez);
    if (in_t0 || in_a0) {
        traj.termination = in_t0 && in_a0  ? Outcome::InitialBoth
                           : in_t0         ? Outcome::InitialTargetWezOnly
                                           : Outcome::InitialAgentWezOnly;
        traj.t_f = 0.0;
        return traj;
    }

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sqrt_dt = std::sqrt(config.dt);
    const long long max_steps =
        std::llround(std::ceil(config.t_max / config.dt - 1e-12));

    double u_a = eval_controller(ctrl_agent, VehicleRole::Agent, red, vehicles.agent);
    double u_t = eval_controller(ctrl_target, VehicleRole::Target, red, vehicles.target);
    traj.points.push_back({0.0, a, t, u_a, u_t, red});

    Outcome reason = Outcome::Stalemate;
    double time = 0.0;
    for (long long s = 1; s <= max_steps; ++s) {
        const double dw = config.sigma_sim > 0.0 ? sqrt_dt * normal(rng) : 0.0;
        std::tie(a, t) = step_full(a, t, u_a, u_t, vehicles.agent, vehicles.target, config.dt,
                                   config.sigma_sim, dw);
        time = static_cast<double>(s) * config.dt;
        red = reduce_state(a, t);
        if (in_target_wez(red, vehicles.target.wez)) {
            reason = Outcome::TerminatesInTargetWez;
        } else if (in_agent_wez(red, vehicles.agent.wez)) {
            reason = Outcome::TerminatesInAgentWez;
        }
        u_a = eval_controller(ctrl_agent, VehicleRole::Agent, red, vehicles.agent);
        u_t = eval_controller(ctrl_target, VehicleRole::Target, red, vehicles.target);
        traj.points.push_back({time, a, t, u_a, u_t, red});
        if (reason != Outcome::Stalemate) break;
    }

    traj.termination = reason;
    traj.t_f = time;
    return traj;
}

Outcome classify_outcome(const Trajectory& trajectory) { return trajectory.termination; }

double min_abeam_offset(const Trajectory& trajectory, double window) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : trajectory.points) {
        const double dx = p.agent.x - p.target.x;
        const double dy = p.agent.y - p.target.y;
        const double hx = std::cos(p.target.theta);
        const double hy = std::sin(p.target.theta);
        const double along = dx * hx + dy * hy;
        if (std::abs(along) <= window) {
            const double lateral = std::abs(-dx * hy + dy * hx);
            best = std::min(best, lateral);
        }
    }
    return best;
}

int outcome_code(const CellResult& cell) {
    return cell.error ? -1 : static_cast<int>(cell.outcome);
}

OutcomeGrid sweep(const ControllerSpec& ctrl_agent, const ControllerSpec& ctrl_target,
                  const EngagementParams& vehicles, const SweepSpec& spec, const SimConfig& config,
                  int threads) {
    if (spec.nx < 1 || spec.ny < 1 || spec.headings.empty())
        throw ConfigError("sweep: empty lattice");
    validate_controller(ctrl_agent, VehicleRole::Agent, vehicles);
    validate_controller(ctrl_target, VehicleRole::Target, vehicles);

    OutcomeGrid grid;
    grid.spec = spec;
    const int cells_per_heading = spec.nx * spec.ny;
    const int total = cells_per_heading * static_cast<int>(spec.headings.size());
    grid.cells.assign(spec.headings.size(), std::vector<CellResult>(cells_per_heading));

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, total);

    std::atomic<int> next{0};
    auto run_cells = [&] {
        for (;;) {
            const int cell = next.fetch_add(1, std::memory_order_relaxed);
            if (cell >= total) return;
            const int h = cell / cells_per_heading;
            const int rem = cell % cells_per_heading;
            const int iy = rem / spec.nx;
            const int ix = rem % spec.nx;
            const Pose target_init{spec.x(ix), spec.y(iy), wrap_angle(spec.headings[h])};
            SimConfig cell_cfg = config;
            cell_cfg.seed = splitmix64(config.seed ^ (0x9e3779b97f4a7c15ULL * (cell + 1)));
            CellResult& out = grid.cells[h][rem];
            try {
                const Trajectory traj = simulate(spec.agent_init, target_init, ctrl_agent,
                                                 ctrl_target, vehicles, cell_cfg);
                out.outcome = traj.termination;
                out.t_f = traj.t_f;
            } catch (const std::exception&) {
                out.error = true;
            }
        }
    };

    if (workers <= 1) {
        run_cells();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_cells);
        for (auto& th : pool) th.join();
    }
    return grid;
}

CaptureComparison compare_capture_times(const ControllerSpec& agent_first,
                                        const ControllerSpec& agent_second,
                                        const ControllerSpec& ctrl_target,
                                        const EngagementParams& vehicles, const SweepSpec& spec,
                                        const SimConfig& config, int threads) {
    const OutcomeGrid first = sweep(agent_first, ctrl_target, vehicles, spec, config, threads);
    const OutcomeGrid second = sweep(agent_second, ctrl_target, vehicles, spec, config, threads);

    CaptureComparison cmp;
    for (std::size_t h = 0; h < spec.headings.size(); ++h) {
        for (int iy = 0; iy < spec.ny; ++iy)
            for (int ix = 0; ix < spec.nx; ++ix) {
                const int cell = iy * spec.nx + ix;
                const CellResult& a = first.cells[h][cell];
                const CellResult& b = second.cells[h][cell];
                const bool a_won = !a.error && a.outcome == Outcome::TerminatesInAgentWez;
                const bool b_won = !b.error && b.outcome == Outcome::TerminatesInAgentWez;
                if (a_won && b_won)
                    cmp.cells.push_back({spec.headings[h], spec.x(ix), spec.y(iy), a.t_f, b.t_f});
                else
                    ++cmp.excluded;
            }
    }
    return cmp;
}

}  // namespace wezopt

#include "wezopt/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "wezopt/geometry.hpp"

namespace wezopt {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return std::min(requested, 512);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, n) across workers. Work is handed out per index so
/// the writes stay disjoint; determinism comes from each index owning its
/// own outputs, not from the assignment order.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

/// Grid-dependent constants of the upwind update.
struct KernelConstants {
    double v_ctrl, v_opp, u_bar;
    double inv_dr, inv_da, inv_dt;
    double half_diff;  // sigma^2 / (2 dxi_a^2), per-side diffusion rate
    std::size_t stride_r;
};

/// One minimizing node update. The drift's radial and xi_a parts are shared
/// by all candidate controls; only the xi_t advection changes with u, so the
/// denominator of the implicit time step is assembled incrementally. A
/// candidate with zero total rate has no defined step and is skipped; if all
/// three are stationary (possible only with sigma = 0 and matched speeds)
/// the node keeps its previous value and control for the sweep.
inline NodeUpdate bellman_node(const double* prev, const double* prev_ctrl, std::size_t idx,
                               double inv_r, double sin_a, double cos_a, double sin_t,
                               double cos_t, double u_opp, std::size_t idx_a_up,
                               std::size_t idx_a_dn, std::size_t idx_t_up, std::size_t idx_t_dn,
                               const KernelConstants& kc) {
    const double v_r_up = prev[idx + kc.stride_r];
    const double v_r_dn = prev[idx - kc.stride_r];
    const double v_a_up = prev[idx_a_up];
    const double v_a_dn = prev[idx_a_dn];
    const double v_t_up = prev[idx_t_up];
    const double v_t_dn = prev[idx_t_dn];

    const double los_rate = inv_r * (kc.v_opp * sin_a + kc.v_ctrl * sin_t);
    const double b_r = -(kc.v_opp * cos_a + kc.v_ctrl * cos_t);
    const double b_a = los_rate - u_opp;

    const double rate_r_up = std::max(b_r, 0.0) * kc.inv_dr;
    const double rate_r_dn = std::max(-b_r, 0.0) * kc.inv_dr;
    const double rate_a_up = std::max(b_a, 0.0) * kc.inv_da + kc.half_diff;
    const double rate_a_dn = std::max(-b_a, 0.0) * kc.inv_da + kc.half_diff;
    const double base_den = rate_r_up + rate_r_dn + rate_a_up + rate_a_dn;
    const double base_num =
        rate_r_up * v_r_up + rate_r_dn * v_r_dn + rate_a_up * v_a_up + rate_a_dn * v_a_dn;

    const double candidates[3] = {0.0, -kc.u_bar, kc.u_bar};
    double best = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    bool found = false;
    for (const double u : candidates) {
        const double b_t = los_rate - u;
        const double rate_t_up = std::max(b_t, 0.0) * kc.inv_dt;
        const double rate_t_dn = std::max(-b_t, 0.0) * kc.inv_dt;
        const double den = base_den + rate_t_up + rate_t_dn;
        if (den == 0.0) continue;
        const double rhs = (1.0 + base_num + rate_t_up * v_t_up + rate_t_dn * v_t_dn) / den;
        if (!found || rhs < best) {
            best = rhs;
            best_u = u;
            found = true;
        }
    }
    if (!found) return {prev[idx], prev_ctrl[idx]};
    return {best, best_u};
}

KernelConstants make_kernel_constants(const GridSpec& grid, const Problem& problem) {
    KernelConstants kc;
    kc.v_ctrl = problem.controlled.speed;
    kc.v_opp = problem.opponent.speed;
    kc.u_bar = problem.controlled.max_turn_rate;
    kc.inv_dr = 1.0 / grid.dr();
    kc.inv_da = 1.0 / grid.dxi_a();
    kc.inv_dt = 1.0 / grid.dxi_t();
    kc.half_diff = problem.sigma * problem.sigma / (2.0 * grid.dxi_a() * grid.dxi_a());
    kc.stride_r = static_cast<std::size_t>(grid.n_xi_a) * grid.n_xi_t;
    return kc;
}

/// Precomputed per-axis tables for a solve.
struct SolveTables {
    std::vector<double> sin_a, cos_a, sin_t, cos_t;
    std::vector<double> inv_r;
    std::vector<int> j_up, j_dn, k_up, k_dn;
    std::vector<std::uint8_t> kind;  // NodeKind per node
};

SolveTables make_tables(const GridSpec& grid, const Problem& problem) {
    SolveTables t;
    t.sin_a.resize(grid.n_xi_a);
    t.cos_a.resize(grid.n_xi_a);
    t.j_up.resize(grid.n_xi_a);
    t.j_dn.resize(grid.n_xi_a);
    for (int j = 0; j < grid.n_xi_a; ++j) {
        t.sin_a[j] = std::sin(grid.xi_a(j));
        t.cos_a[j] = std::cos(grid.xi_a(j));
        t.j_up[j] = (j + 1) % grid.n_xi_a;
        t.j_dn[j] = (j + grid.n_xi_a - 1) % grid.n_xi_a;
    }
    t.sin_t.resize(grid.n_xi_t);
    t.cos_t.resize(grid.n_xi_t);
    t.k_up.resize(grid.n_xi_t);
    t.k_dn.resize(grid.n_xi_t);
    for (int k = 0; k < grid.n_xi_t; ++k) {
        t.sin_t[k] = std::sin(grid.xi_t(k));
        t.cos_t[k] = std::cos(grid.xi_t(k));
        t.k_up[k] = (k + 1) % grid.n_xi_t;
        t.k_dn[k] = (k + grid.n_xi_t - 1) % grid.n_xi_t;
    }
    t.inv_r.resize(grid.n_r, 0.0);
    for (int i = 1; i < grid.n_r; ++i) t.inv_r[i] = 1.0 / grid.r(i);

    t.kind.resize(grid.size());
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.n_xi_a; ++j)
            for (int k = 0; k < grid.n_xi_t; ++k)
                t.kind[grid.index(i, j, k)] =
                    static_cast<std::uint8_t>(classify_node(grid, problem, i, j, k));
    return t;
}

Problem make_problem(ProblemRole role, const EngagementParams& vehicles,
                     const SolverConfig& config) {
    Problem p;
    if (role == ProblemRole::AgentControls) {
        p.controlled = vehicles.agent;
        p.opponent = vehicles.target;
    } else {
        p.controlled = vehicles.target;
        p.opponent = vehicles.agent;
    }
    p.sigma = config.sigma;
    p.penalty = config.penalty;
    return p;
}

void require_square_xi(const GridSpec& grid, const char* what) {
    if (grid.n_xi_a != grid.n_xi_t)
        throw ConfigError(std::string(what) +
                          ": the axis exchange needs equal xi resolutions (n_xi_a == n_xi_t)");
}

std::vector<int> resolve_schedule(const GridSpec& grid, const SolverConfig& config) {
    if (config.upsample_schedule.empty()) return {};
    if (grid.n_r != grid.n_xi_a || grid.n_r != grid.n_xi_t)
        throw ConfigError("upsample schedule requires a cubic grid");
    const auto& s = config.upsample_schedule;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] >= s[i + 1]) throw ConfigError("upsample schedule must be strictly increasing");
    if (s.front() < 3) throw ConfigError("upsample schedule entries must be >= 3");
    if (s.back() != grid.n_r)
        throw ConfigError("upsample schedule must end at the grid resolution");
    return {s.begin(), s.end() - 1};  // stages before the final grid
}

FieldMeta make_meta(SolveVariant variant, const Problem& p, const IterationResult& res) {
    FieldMeta m;
    m.variant = variant;
    m.controlled = p.controlled;
    m.opponent = p.opponent;
    m.sigma = p.sigma;
    m.penalty = p.penalty;
    m.converged = res.converged;
    m.iterations = res.iterations;
    return m;
}

SolveResult run_staged(SolveVariant variant, const Problem& problem, const GridSpec& grid,
                       const SolverConfig& config) {
    SolveResult out;
    std::vector<double> init(grid.size(), 0.0);
    const std::vector<int> stages = resolve_schedule(grid, config);
    if (!stages.empty()) {
        GridSpec prev_grid(stages[0], stages[0], stages[0], grid.r_max);
        std::vector<double> stage_init(prev_grid.size(), 0.0);
        for (std::size_t s = 0; s < stages.size(); ++s) {
            const GridSpec stage_grid(stages[s], stages[s], stages[s], grid.r_max);
            if (s > 0) stage_init = upsample(prev_grid, stage_init, stage_grid);
            const IterationResult res =
                value_iteration(problem, stage_grid, stage_init, config, &out.trace);
            stage_init = res.field.values;
            prev_grid = stage_grid;
        }
        init = upsample(prev_grid, stage_init, grid);
    }
    IterationResult res = value_iteration(problem, grid, init, config, &out.trace);
    res.field.meta = make_meta(variant, problem, res);
    out.field = std::move(res.field);
    return out;
}

}  // namespace

std::string to_string(SolveVariant v) {
    switch (v) {
        case SolveVariant::BaselineAgent: return "Baseline-A";
        case SolveVariant::BaselineTarget: return "Baseline-T";
        case SolveVariant::Avoid: return "Avoid";
        case SolveVariant::Adversarial: return "Adversarial";
    }
    return "Baseline-A";
}

SolveVariant variant_from_string(const std::string& s) {
    if (s == "Baseline-A") return SolveVariant::BaselineAgent;
    if (s == "Baseline-T") return SolveVariant::BaselineTarget;
    if (s == "Avoid") return SolveVariant::Avoid;
    if (s == "Adversarial") return SolveVariant::Adversarial;
    throw ConfigError("unknown solve variant: " + s);
}

std::array<double, 3> control_levels(const VehicleParams& controlled) {
    return {0.0, -controlled.max_turn_rate, controlled.max_turn_rate};
}

NodeKind classify_node(const GridSpec& grid, const Problem& problem, int i, int j, int k) {
    if (i == 0) return NodeKind::InnerBoundary;
    if (i == grid.n_r - 1) return NodeKind::OuterBoundary;
    const ReducedState s{grid.r(i), grid.xi_a(j), grid.xi_t(k)};
    if (problem.avoid_mask && (*problem.avoid_mask)[grid.index(i, j, k)])
        return NodeKind::TerminalPenalty;
    if (in_target_wez(s, problem.opponent.wez)) return NodeKind::TerminalPenalty;
    if (in_agent_wez(s, problem.controlled.wez)) return NodeKind::TerminalZero;
    return NodeKind::Interior;
}

std::pair<double, double> split_drift(double b) {
    return {std::max(0.0, b), std::max(0.0, -b)};
}

double implicit_time_step(const Drift& d, const GridSpec& grid, double sigma, DiffusionAxis axis) {
    const double dxi_diff = axis == DiffusionAxis::XiA ? grid.dxi_a() : grid.dxi_t();
    const double den = std::abs(d.b_r) / grid.dr() + std::abs(d.b_xi_a) / grid.dxi_a() +
                       std::abs(d.b_xi_t) / grid.dxi_t() + sigma * sigma / (dxi_diff * dxi_diff);
    if (den == 0.0)
        throw StationaryCellError("implicit_time_step: zero drift and zero noise at the cell");
    return 1.0 / den;
}

CellTransition cell_transition(const Drift& d, const GridSpec& grid, double sigma,
                               DiffusionAxis axis) {
    const auto [br_up, br_dn] = split_drift(d.b_r);
    const auto [ba_up, ba_dn] = split_drift(d.b_xi_a);
    const auto [bt_up, bt_dn] = split_drift(d.b_xi_t);
    double rate_r_up = br_up / grid.dr();
    double rate_r_dn = br_dn / grid.dr();
    double rate_a_up = ba_up / grid.dxi_a();
    double rate_a_dn = ba_dn / grid.dxi_a();
    double rate_t_up = bt_up / grid.dxi_t();
    double rate_t_dn = bt_dn / grid.dxi_t();
    if (axis == DiffusionAxis::XiA) {
        const double half = sigma * sigma / (2.0 * grid.dxi_a() * grid.dxi_a());
        rate_a_up += half;
        rate_a_dn += half;
    } else {
        const double half = sigma * sigma / (2.0 * grid.dxi_t() * grid.dxi_t());
        rate_t_up += half;
        rate_t_dn += half;
    }
    const double den = rate_r_up + rate_r_dn + rate_a_up + rate_a_dn + rate_t_up + rate_t_dn;
    if (den == 0.0)
        throw StationaryCellError("cell_transition: zero drift and zero noise at the cell");
    const double dt = 1.0 / den;
    return {dt,      dt * rate_r_up, dt * rate_r_dn, dt * rate_a_up,
            dt * rate_a_dn, dt * rate_t_up, dt * rate_t_dn};
}

NodeUpdate bellman_update(const ValueField& snapshot, const Problem& problem, int i, int j,
                          int k) {
    const GridSpec& g = snapshot.grid;
    if (i <= 0 || i >= g.n_r - 1)
        throw std::invalid_argument("bellman_update: node must be interior in r");
    const KernelConstants kc = make_kernel_constants(g, problem);
    const std::size_t idx = g.index(i, j, k);
    return bellman_node(snapshot.values.data(), snapshot.controls.data(), idx, 1.0 / g.r(i),
                        std::sin(g.xi_a(j)), std::cos(g.xi_a(j)), std::sin(g.xi_t(k)),
                        std::cos(g.xi_t(k)), problem.opponent_control_at(idx),
                        g.index(i, (j + 1) % g.n_xi_a, k), g.index(i, (j + g.n_xi_a - 1) % g.n_xi_a, k),
                        g.index(i, j, (k + 1) % g.n_xi_t), g.index(i, j, (k + g.n_xi_t - 1) % g.n_xi_t),
                        kc);
}

int ConvergenceTrace::iterations_at(int stage_points) const {
    int n = 0;
    for (const auto& row : rows)
        if (row.stage_points == stage_points) ++n;
    return n;
}

IterationResult value_iteration(const Problem& problem, const GridSpec& grid,
                                const std::vector<double>& initial_values,
                                const SolverConfig& config, ConvergenceTrace* trace) {
    if (initial_values.size() != grid.size())
        throw ConfigError("value_iteration: initial field does not match the grid");
    if (problem.avoid_mask && problem.avoid_mask->size() != grid.size())
        throw ConfigError("value_iteration: avoid mask does not match the grid");
    if (problem.opponent_controls && problem.opponent_controls->size() != grid.size())
        throw ConfigError("value_iteration: opponent policy does not match the grid");

    const SolveTables tables = make_tables(grid, problem);
    const KernelConstants kc = make_kernel_constants(grid, problem);
    const int threads = resolve_threads(config.threads);
    const int n_r = grid.n_r, n_a = grid.n_xi_a, n_t = grid.n_xi_t;
    const std::size_t stride_r = kc.stride_r;

    std::vector<double> v_prev = initial_values;
    std::vector<double> v_next(grid.size());
    std::vector<double> c_prev(grid.size(), 0.0);
    std::vector<double> c_next(grid.size(), 0.0);
    // Per-r-slab |dV| partials, combined serially in slab order so the mean
    // is identical for every worker count.
    std::vector<double> slab_delta(n_r);

    const auto t0 = std::chrono::steady_clock::now();
    IterationResult out;
    const double penalty = problem.penalty;

    auto sweep_slab = [&](int i) {
        const double* prev = v_prev.data();
        const double* prev_c = c_prev.data();
        double* next = v_next.data();
        double* next_c = c_next.data();
        double acc = 0.0;
        if (i == 0 || i == n_r - 1) {
            const std::size_t row = static_cast<std::size_t>(i) * stride_r;
            const std::size_t src = i == 0 ? row + stride_r : row - stride_r;
            for (std::size_t n = 0; n < stride_r; ++n) {
                const double nv = prev[src + n];
                acc += std::abs(nv - prev[row + n]);
                next[row + n] = nv;
                next_c[row + n] = 0.0;
            }
        } else {
            const double inv_r = tables.inv_r[i];
            for (int j = 0; j < n_a; ++j) {
                const std::size_t base = (static_cast<std::size_t>(i) * n_a + j) * n_t;
                const std::size_t base_a_up = (static_cast<std::size_t>(i) * n_a + tables.j_up[j]) * n_t;
                const std::size_t base_a_dn = (static_cast<std::size_t>(i) * n_a + tables.j_dn[j]) * n_t;
                const double sin_a = tables.sin_a[j];
                const double cos_a = tables.cos_a[j];
                for (int k = 0; k < n_t; ++k) {
                    const std::size_t idx = base + k;
                    double nv;
                    switch (static_cast<NodeKind>(tables.kind[idx])) {
                        case NodeKind::TerminalPenalty:
                            nv = penalty;
                            next_c[idx] = 0.0;
                            break;
                        case NodeKind::TerminalZero:
                            nv = 0.0;
                            next_c[idx] = 0.0;
                            break;
                        default: {
                            const NodeUpdate res = bellman_node(
                                prev, prev_c, idx, inv_r, sin_a, cos_a, tables.sin_t[k],
                                tables.cos_t[k], problem.opponent_control_at(idx),
                                base_a_up + k, base_a_dn + k, base + tables.k_up[k],
                                base + tables.k_dn[k], kc);
                            nv = res.value;
                            next_c[idx] = res.control;
                            break;
                        }
                    }
                    acc += std::abs(nv - prev[idx]);
                    next[idx] = nv;
                }
            }
        }
        slab_delta[i] = acc;
    };

    out.converged = false;
    int z = 0;
    while (z < config.max_iterations) {
        ++z;
        parallel_for(n_r, threads, sweep_slab);
        double total = 0.0;
        for (int i = 0; i < n_r; ++i) total += slab_delta[i];
        const double mean_dv = total / static_cast<double>(grid.size());
        v_prev.swap(v_next);
        c_prev.swap(c_next);
        if (trace) {
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            trace->rows.push_back({grid.n_r, z, mean_dv, wall});
        }
        if (mean_dv < config.tolerance) {
            out.converged = true;
            break;
        }
    }

    out.iterations = z;
    out.field.grid = grid;
    out.field.values = std::move(v_prev);
    out.field.controls = std::move(c_prev);
    out.field.meta.converged = out.converged;
    out.field.meta.iterations = z;
    return out;
}

double trilinear_at(const GridSpec& grid, const std::vector<double>& data, double r, double xi_a,
                    double xi_t) {
    // r axis: clamped
    double pos_r = r / grid.r_max * (grid.n_r - 1);
    pos_r = std::clamp(pos_r, 0.0, static_cast<double>(grid.n_r - 1));
    int i0 = std::min(static_cast<int>(pos_r), grid.n_r - 2);
    const double fr = std::clamp(pos_r - i0, 0.0, 1.0);

    // angle axes: periodic
    const double pos_a = (wrap_angle(xi_a) + kPi) / grid.dxi_a();
    int j0 = static_cast<int>(std::floor(pos_a));
    const double fa = pos_a - j0;
    j0 = ((j0 % grid.n_xi_a) + grid.n_xi_a) % grid.n_xi_a;
    const int j1 = (j0 + 1) % grid.n_xi_a;

    const double pos_t = (wrap_angle(xi_t) + kPi) / grid.dxi_t();
    int k0 = static_cast<int>(std::floor(pos_t));
    const double ft = pos_t - k0;
    k0 = ((k0 % grid.n_xi_t) + grid.n_xi_t) % grid.n_xi_t;
    const int k1 = (k0 + 1) % grid.n_xi_t;

    auto at = [&](int i, int j, int k) { return data[grid.index(i, j, k)]; };
    const double c00 = at(i0, j0, k0) * (1 - fr) + at(i0 + 1, j0, k0) * fr;
    const double c01 = at(i0, j0, k1) * (1 - fr) + at(i0 + 1, j0, k1) * fr;
    const double c10 = at(i0, j1, k0) * (1 - fr) + at(i0 + 1, j1, k0) * fr;
    const double c11 = at(i0, j1, k1) * (1 - fr) + at(i0 + 1, j1, k1) * fr;
    const double c0 = c00 * (1 - fa) + c10 * fa;
    const double c1 = c01 * (1 - fa) + c11 * fa;
    return c0 * (1 - ft) + c1 * ft;
}

std::vector<double> upsample(const GridSpec& coarse, const std::vector<double>& values,
                             const GridSpec& fine) {
    if (coarse.r_max != fine.r_max) throw ConfigError("upsample: r_max mismatch");
    if (fine.n_r <= coarse.n_r || fine.n_xi_a <= coarse.n_xi_a || fine.n_xi_t <= coarse.n_xi_t)
        throw ConfigError("upsample: target grid must be strictly finer");
    if (values.size() != coarse.size()) throw ConfigError("upsample: field/grid mismatch");

    std::vector<double> out(fine.size());
    for (int i = 0; i < fine.n_r; ++i)
        for (int j = 0; j < fine.n_xi_a; ++j)
            for (int k = 0; k < fine.n_xi_t; ++k)
                out[fine.index(i, j, k)] =
                    trilinear_at(coarse, values, fine.r(i), fine.xi_a(j), fine.xi_t(k));
    return out;
}

SolveResult solve_baseline(ProblemRole role, const EngagementParams& vehicles,
                           const GridSpec& grid, const SolverConfig& config) {
    const Problem p = make_problem(role, vehicles, config);
    const SolveVariant variant = role == ProblemRole::AgentControls ? SolveVariant::BaselineAgent
                                                                    : SolveVariant::BaselineTarget;
    return run_staged(variant, p, grid, config);
}

std::vector<std::uint8_t> avoid_set(const ValueField& baseline_agent,
                                    const ValueField& baseline_target) {
    const GridSpec& g = baseline_agent.grid;
    if (!(g == baseline_target.grid)) throw ConfigError("avoid_set: grid mismatch");
    require_square_xi(g, "avoid_set");
    if (!(baseline_agent.meta.controlled == baseline_target.meta.opponent) ||
        !(baseline_agent.meta.opponent == baseline_target.meta.controlled))
        throw ConfigError("avoid_set: fields do not describe the same pair of vehicles");

    std::vector<std::uint8_t> mask(g.size(), 0);
    for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.n_xi_a; ++j)
            for (int k = 0; k < g.n_xi_t; ++k)
                // Axis exchange maps the target solve into agent coordinates.
                mask[g.index(i, j, k)] =
                    baseline_target.values[g.index(i, k, j)] < baseline_agent.values[g.index(i, j, k)]
                        ? 1
                        : 0;
    return mask;
}

SolveResult solve_avoid(const EngagementParams& vehicles, const GridSpec& grid,
                        const SolverConfig& config, const std::vector<std::uint8_t>& mask) {
    if (mask.size() != grid.size()) throw ConfigError("solve_avoid: mask/grid mismatch");
    Problem p = make_problem(ProblemRole::AgentControls, vehicles, config);
    p.avoid_mask = &mask;
    // Mask nodes are defined on the final grid only, so this solve runs cold.
    SolverConfig cold = config;
    cold.upsample_schedule.clear();
    return run_staged(SolveVariant::Avoid, p, grid, cold);
}

SolveResult solve_adversarial(const EngagementParams& vehicles, const GridSpec& grid,
                              const SolverConfig& config, const ValueField& baseline_target) {
    if (!(baseline_target.grid == grid))
        throw ConfigError("solve_adversarial: target policy grid mismatch");
    require_square_xi(grid, "solve_adversarial");
    if (baseline_target.meta.variant != SolveVariant::BaselineTarget)
        throw ConfigError("solve_adversarial: the opponent policy must be a Baseline-T solve");
    if (!(baseline_target.meta.controlled == vehicles.target) ||
        !(baseline_target.meta.opponent == vehicles.agent))
        throw ConfigError("solve_adversarial: target policy was solved for different vehicles");

    std::vector<double> u_opp(grid.size());
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.n_xi_a; ++j)
            for (int k = 0; k < grid.n_xi_t; ++k)
                u_opp[grid.index(i, j, k)] = baseline_target.controls[grid.index(i, k, j)];

    Problem p = make_problem(ProblemRole::AgentControls, vehicles, config);
    p.sigma = config.adversarial_sigma;
    p.opponent_controls = &u_opp;
    // The node-exact policy lookup exists on the final grid only: run cold.
    SolverConfig cold = config;
    cold.upsample_schedule.clear();
    return run_staged(SolveVariant::Adversarial, p, grid, cold);
}

}  // namespace wezopt

#include <doctest.h>

#include <cmath>
#include <random>

#include "wezopt/geometry.hpp"
#include "wezopt/solver.hpp"

using namespace wezopt;

namespace {

const VehicleParams kAgent{1.0, 1.0, WezParams{1.2, 1.0, 0.2}};
const VehicleParams kTarget{0.8, 1.0, WezParams{1.1, 0.9, 0.15}};

Problem baseline_problem(double sigma = 1.0, double penalty = 100.0) {
    Problem p;
    p.controlled = kAgent;
    p.opponent = kTarget;
    p.sigma = sigma;
    p.penalty = penalty;
    return p;
}

SolverConfig cold_config(double tolerance, int max_iterations, int threads = 1) {
    SolverConfig cfg;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iterations;
    cfg.threads = threads;
    cfg.upsample_schedule.clear();
    return cfg;
}

/// Reassemble the minimizing update from the public transition ops; same
/// preference order as the solver kernel but a fully independent path.
NodeUpdate manual_update(const ValueField& f, const Problem& p, int i, int j, int k) {
    const GridSpec& g = f.grid;
    const ReducedState s{g.r(i), g.xi_a(j), g.xi_t(k)};
    const double u_opp = p.opponent_control_at(g.index(i, j, k));
    double best = 0.0, best_u = 0.0;
    bool first = true;
    for (const double u : control_levels(p.controlled)) {
        const Drift d = drift(s, u, u_opp, p.controlled, p.opponent);
        const CellTransition ct = cell_transition(d, g, p.sigma);
        const double rhs = ct.dt + ct.p_r_up * f.values[g.index(i + 1, j, k)] +
                           ct.p_r_dn * f.values[g.index(i - 1, j, k)] +
                           ct.p_xi_a_up * f.values[g.index(i, (j + 1) % g.n_xi_a, k)] +
                           ct.p_xi_a_dn * f.values[g.index(i, (j + g.n_xi_a - 1) % g.n_xi_a, k)] +
                           ct.p_xi_t_up * f.values[g.index(i, j, (k + 1) % g.n_xi_t)] +
                           ct.p_xi_t_dn * f.values[g.index(i, j, (k + g.n_xi_t - 1) % g.n_xi_t)];
        if (first || rhs < best) {
            best = rhs;
            best_u = u;
            first = false;
        }
    }
    return {best, best_u};
}

}  // namespace

TEST_CASE("split_drift") {
    CHECK(split_drift(-0.2) == std::pair{0.0, 0.2});
    CHECK(split_drift(0.0) == std::pair{0.0, 0.0});
    CHECK(split_drift(1.8) == std::pair{1.8, 0.0});
}

TEST_CASE("implicit time step") {
    const GridSpec g100{100, 100, 100, 10.0};
    SUBCASE("pure diffusion") {
        const double dt = implicit_time_step({0, 0, 0}, g100, 1.0);
        CHECK(dt == doctest::Approx(g100.dxi_a() * g100.dxi_a()).epsilon(1e-14));
        CHECK(dt == doctest::Approx(3.9478e-3).epsilon(1e-4));
    }
    SUBCASE("pure radial advection") {
        const GridSpec g{101, 100, 100, 10.0};  // dr = 0.1
        CHECK(implicit_time_step({-1.8, 0, 0}, g, 0.0) == doctest::Approx(0.1 / 1.8).epsilon(1e-12));
    }
    SUBCASE("halving the resolution doubles the step when sigma = 0") {
        const GridSpec fine{101, 100, 100, 10.0};
        const GridSpec coarse{51, 50, 50, 10.0};
        const Drift d{-0.7, 0.4, -1.1};
        CHECK(implicit_time_step(d, coarse, 0.0) ==
              doctest::Approx(2.0 * implicit_time_step(d, fine, 0.0)).epsilon(1e-12));
    }
    SUBCASE("stationary cell throws") {
        CHECK_THROWS_AS(implicit_time_step({0, 0, 0}, g100, 0.0), StationaryCellError);
        CHECK_THROWS_AS(cell_transition({0, 0, 0}, g100, 0.0), StationaryCellError);
    }
}

TEST_CASE("cell transitions") {
    const GridSpec g{100, 100, 100, 10.0};
    SUBCASE("pure diffusion splits evenly over the xi_a neighbors") {
        const CellTransition ct = cell_transition({0, 0, 0}, g, 1.0);
        CHECK(ct.p_xi_a_up == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(ct.p_xi_a_dn == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(ct.p_r_up == 0.0);
        CHECK(ct.p_r_dn == 0.0);
        CHECK(ct.p_xi_t_up == 0.0);
        CHECK(ct.p_xi_t_dn == 0.0);
        // With all neighbor values at zero the update reduces to the bare
        // time step: the running cost alone.
        const double rhs = ct.dt + ct.sum() * 0.0;
        CHECK(rhs == doctest::Approx(3.9478e-3).epsilon(1e-4));
    }
    SUBCASE("pure inward advection") {
        const CellTransition ct = cell_transition({-1.8, 0, 0}, g, 0.0);
        CHECK(ct.p_r_dn == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ct.sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("probabilities always form a simplex") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> b(-3.0, 3.0);
        std::uniform_real_distribution<double> s(0.0, 2.0);
        for (int n = 0; n < 2000; ++n) {
            const Drift d{b(rng), b(rng), b(rng)};
            const double sigma = s(rng);
            if (std::abs(d.b_r) + std::abs(d.b_xi_a) + std::abs(d.b_xi_t) + sigma == 0.0) continue;
            const auto axis = n % 2 == 0 ? DiffusionAxis::XiA : DiffusionAxis::XiT;
            const CellTransition ct = cell_transition(d, g, sigma, axis);
            CHECK(std::abs(ct.sum() - 1.0) <= 1e-12);
            CHECK(ct.p_r_up >= 0.0);
            CHECK(ct.p_r_dn >= 0.0);
            CHECK(ct.p_xi_a_up >= 0.0);
            CHECK(ct.p_xi_a_dn >= 0.0);
            CHECK(ct.p_xi_t_up >= 0.0);
            CHECK(ct.p_xi_t_dn >= 0.0);
        }
    }
}

TEST_CASE("node classification follows the update order") {
    const GridSpec g{41, 40, 40, 10.0};
    const Problem p = baseline_problem();
    // r = 0 is a boundary even though it would be inside both zones.
    CHECK(classify_node(g, p, 0, 3, 5) == NodeKind::InnerBoundary);
    CHECK(classify_node(g, p, g.n_r - 1, 3, 5) == NodeKind::OuterBoundary);
    // r = 0.25, xi_t = 0: deep inside the target's zone.
    CHECK(classify_node(g, p, 1, 7, 20) == NodeKind::TerminalPenalty);
    // r = 1.0, xi_a = 0, xi_t = -pi: agent zone only.
    CHECK(classify_node(g, p, 4, 20, 0) == NodeKind::TerminalZero);
    // Far field is interior.
    CHECK(classify_node(g, p, 30, 20, 0) == NodeKind::Interior);

    SUBCASE("avoid mask turns interior nodes terminal") {
        std::vector<std::uint8_t> mask(g.size(), 0);
        mask[g.index(30, 20, 0)] = 1;
        Problem pm = p;
        pm.avoid_mask = &mask;
        CHECK(classify_node(g, pm, 30, 20, 0) == NodeKind::TerminalPenalty);
    }
}

TEST_CASE("bellman_update agrees with assembly from the public transition ops") {
    const GridSpec g{12, 12, 12, 10.0};
    ValueField snap{g};
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> val(0.0, 100.0);
    for (auto& v : snap.values) v = val(rng);
    const Problem p = baseline_problem();
    for (int n = 0; n < 200; ++n) {
        const int i = 1 + static_cast<int>(rng() % (g.n_r - 2));
        const int j = static_cast<int>(rng() % g.n_xi_a);
        const int k = static_cast<int>(rng() % g.n_xi_t);
        const NodeUpdate got = bellman_update(snap, p, i, j, k);
        const NodeUpdate want = manual_update(snap, p, i, j, k);
        CHECK(got.value == doctest::Approx(want.value).epsilon(1e-12));
        CHECK(got.control == want.control);
    }
}

TEST_CASE("bellman_update tie-breaks toward the negative turn") {
    // xi_a = xi_t = 0 is a grid node (even counts), the line-of-sight rate
    // vanishes exactly there, and a constant snapshot makes the two turn
    // candidates bit-identical. The straight candidate loses strictly (its
    // larger time step costs more), so the tie resolves to -u_bar.
    const GridSpec g{8, 8, 8, 10.0};
    ValueField snap{g};
    for (auto& v : snap.values) v = 7.0;
    const Problem p = baseline_problem();
    const int i = 6, j = 4, k = 4;  // far enough out that the node is not terminal
    REQUIRE(classify_node(g, p, i, j, k) == NodeKind::Interior);
    const NodeUpdate res = bellman_update(snap, p, i, j, k);
    CHECK(res.control == -kAgent.max_turn_rate);
}

TEST_CASE("value iteration on an all-winning interior converges in one sweep") {
    // Huge agent zone, negligible target zone: every interior node is a win.
    const VehicleParams big_agent{1.0, 1.0, WezParams{1.1, 10.0, 2.0}};
    const VehicleParams tiny_target{0.8, 1.0, WezParams{1.2, 0.05, 0.01}};
    Problem p;
    p.controlled = big_agent;
    p.opponent = tiny_target;
    const GridSpec g{5, 6, 6, 1.0};
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_xi_a; ++j)
            for (int k = 0; k < g.n_xi_t; ++k)
                REQUIRE(classify_node(g, p, i, j, k) == NodeKind::TerminalZero);

    const IterationResult res =
        value_iteration(p, g, std::vector<double>(g.size(), 0.0), cold_config(1e-6, 50));
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    for (const double v : res.field.values) CHECK(v == 0.0);
}

TEST_CASE("value iteration is deterministic across worker counts and repeats") {
    const GridSpec g{14, 14, 14, 10.0};
    const Problem p = baseline_problem();
    const std::vector<double> init(g.size(), 0.0);
    const IterationResult a = value_iteration(p, g, init, cold_config(1e-5, 4000, 1));
    const IterationResult b = value_iteration(p, g, init, cold_config(1e-5, 4000, 2));
    const IterationResult c = value_iteration(p, g, init, cold_config(1e-5, 4000, 5));
    const IterationResult d = value_iteration(p, g, init, cold_config(1e-5, 4000, 2));
    CHECK(a.iterations == b.iterations);
    CHECK(a.field.values == b.field.values);
    CHECK(a.field.values == c.field.values);
    CHECK(a.field.values == d.field.values);
    CHECK(a.field.controls == b.field.controls);
    CHECK(a.field.controls == c.field.controls);
    CHECK(a.field.controls == d.field.controls);
}

TEST_CASE("values stay within [0, penalty] at every iteration") {
    const GridSpec g{12, 12, 12, 10.0};
    const Problem p = baseline_problem();
    const std::vector<double> init(g.size(), 0.0);
    for (const int iters : {1, 2, 5, 20, 200}) {
        const IterationResult res = value_iteration(p, g, init, cold_config(1e-9, iters));
        for (const double v : res.field.values) {
            CHECK(v >= 0.0);
            CHECK(v <= p.penalty);
        }
    }
}

TEST_CASE("terminal nodes clamp exactly after convergence") {
    const GridSpec g{12, 12, 12, 10.0};
    const Problem p = baseline_problem();
    const IterationResult res =
        value_iteration(p, g, std::vector<double>(g.size(), 0.0), cold_config(1e-5, 4000));
    REQUIRE(res.converged);
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_xi_a; ++j)
            for (int k = 0; k < g.n_xi_t; ++k) {
                const NodeKind kind = classify_node(g, p, i, j, k);
                if (kind == NodeKind::TerminalZero) CHECK(res.field.values[g.index(i, j, k)] == 0.0);
                if (kind == NodeKind::TerminalPenalty)
                    CHECK(res.field.values[g.index(i, j, k)] == p.penalty);
            }
}

TEST_CASE("non-convergence is flagged, not thrown") {
    const GridSpec g{12, 12, 12, 10.0};
    const Problem p = baseline_problem();
    const IterationResult res =
        value_iteration(p, g, std::vector<double>(g.size(), 0.0), cold_config(1e-12, 3));
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 3);
    CHECK_FALSE(res.field.meta.converged);
}

TEST_CASE("converged field is a fixed point of the update") {
    const GridSpec g{16, 16, 16, 10.0};
    const Problem p = baseline_problem();
    const SolverConfig cfg = cold_config(1e-6, 20000, 2);
    const IterationResult res = value_iteration(p, g, std::vector<double>(g.size(), 0.0), cfg);
    REQUIRE(res.converged);
    double worst = 0.0;
    for (int i = 1; i < g.n_r - 1; ++i)
        for (int j = 0; j < g.n_xi_a; ++j)
            for (int k = 0; k < g.n_xi_t; ++k) {
                if (classify_node(g, p, i, j, k) != NodeKind::Interior) continue;
                const NodeUpdate u = bellman_update(res.field, p, i, j, k);
                worst = std::max(worst, std::abs(u.value - res.field.values[g.index(i, j, k)]));
            }
    CHECK(worst < 10.0 * cfg.tolerance);
}

TEST_CASE("trace records per-stage iterations") {
    const GridSpec g{12, 12, 12, 10.0};
    const Problem p = baseline_problem();
    ConvergenceTrace trace;
    const IterationResult res =
        value_iteration(p, g, std::vector<double>(g.size(), 0.0), cold_config(1e-4, 500), &trace);
    CHECK(trace.rows.size() == static_cast<std::size_t>(res.iterations));
    CHECK(trace.iterations_at(12) == res.iterations);
    CHECK(trace.rows.front().iteration == 1);
    CHECK(trace.rows.front().mean_dv > trace.rows.back().mean_dv);
}

TEST_CASE("upsample") {
    const GridSpec coarse{10, 10, 10, 10.0};
    const GridSpec fine{19, 20, 20, 10.0};
    SUBCASE("constants are reproduced exactly") {
        const std::vector<double> c(coarse.size(), 4.25);
        const auto f = upsample(coarse, c, fine);
        for (const double v : f) CHECK(v == doctest::Approx(4.25).epsilon(1e-14));
    }
    SUBCASE("linear-in-r surfaces are reproduced at all fine nodes") {
        std::vector<double> c(coarse.size());
        for (int i = 0; i < coarse.n_r; ++i)
            for (int j = 0; j < coarse.n_xi_a; ++j)
                for (int k = 0; k < coarse.n_xi_t; ++k)
                    c[coarse.index(i, j, k)] = 3.0 + 0.7 * coarse.r(i);
        const auto f = upsample(coarse, c, fine);
        for (int i = 0; i < fine.n_r; ++i)
            for (int j = 0; j < fine.n_xi_a; ++j)
                for (int k = 0; k < fine.n_xi_t; ++k)
                    CHECK(f[fine.index(i, j, k)] ==
                          doctest::Approx(3.0 + 0.7 * fine.r(i)).epsilon(1e-12));
    }
    SUBCASE("coincident nodes take the coarse value") {
        const GridSpec fine2{19, 20, 20, 10.0};
        std::vector<double> c(coarse.size());
        std::mt19937_64 rng(53);
        std::uniform_real_distribution<double> val(0.0, 10.0);
        for (auto& v : c) v = val(rng);
        const auto f = upsample(coarse, c, fine2);
        // The angle axes double exactly; r coincides at both ends.
        for (int j = 0; j < coarse.n_xi_a; ++j)
            for (int k = 0; k < coarse.n_xi_t; ++k) {
                CHECK(f[fine2.index(0, 2 * j, 2 * k)] ==
                      doctest::Approx(c[coarse.index(0, j, k)]).epsilon(1e-12));
                CHECK(f[fine2.index(fine2.n_r - 1, 2 * j, 2 * k)] ==
                      doctest::Approx(c[coarse.index(coarse.n_r - 1, j, k)]).epsilon(1e-12));
            }
    }
    SUBCASE("mismatched domains are rejected") {
        const std::vector<double> c(coarse.size(), 0.0);
        CHECK_THROWS_AS(upsample(coarse, c, GridSpec(19, 20, 20, 9.0)), ConfigError);
        CHECK_THROWS_AS(upsample(coarse, c, GridSpec(10, 10, 10, 10.0)), ConfigError);
    }
}

TEST_CASE("avoid set") {
    const GridSpec g{6, 6, 6, 10.0};
    ValueField va{g}, vt{g};
    va.meta.variant = SolveVariant::BaselineAgent;
    va.meta.controlled = kAgent;
    va.meta.opponent = kTarget;
    vt.meta.variant = SolveVariant::BaselineTarget;
    vt.meta.controlled = kTarget;
    vt.meta.opponent = kAgent;

    SUBCASE("identical fields give an empty mask") {
        for (std::size_t n = 0; n < g.size(); ++n) va.values[n] = vt.values[n] = 1.0 + double(n % 7);
        // The comparison is strict, and a symmetric surface swaps onto itself.
        ValueField vt_sym = vt;
        for (int i = 0; i < g.n_r; ++i)
            for (int j = 0; j < g.n_xi_a; ++j)
                for (int k = 0; k < g.n_xi_t; ++k)
                    vt_sym.values[g.index(i, j, k)] = va.values[g.index(i, k, j)];
        const auto mask = avoid_set(va, vt_sym);
        for (const auto m : mask) CHECK(m == 0);
    }
    SUBCASE("uniformly better target covers everything") {
        std::fill(va.values.begin(), va.values.end(), 100.0);
        std::fill(vt.values.begin(), vt.values.end(), 0.0);
        const auto mask = avoid_set(va, vt);
        for (const auto m : mask) CHECK(m == 1);
    }
    SUBCASE("winning nodes are never masked") {
        std::fill(vt.values.begin(), vt.values.end(), 55.0);
        std::fill(va.values.begin(), va.values.end(), 70.0);
        va.values[g.index(2, 3, 4)] = 0.0;  // a winning terminal
        const auto mask = avoid_set(va, vt);
        CHECK(mask[g.index(2, 3, 4)] == 0);
    }
    SUBCASE("grid mismatch is rejected") {
        ValueField other{GridSpec(6, 6, 7, 10.0)};
        CHECK_THROWS_AS(avoid_set(va, other), ConfigError);
    }
}

TEST_CASE("solve_avoid with an empty mask equals the baseline solve") {
    const GridSpec g{10, 10, 10, 10.0};
    const EngagementParams veh{kAgent, kTarget};
    const SolverConfig cfg = cold_config(1e-5, 3000, 2);
    const SolveResult base = solve_baseline(ProblemRole::AgentControls, veh, g, cfg);
    const SolveResult avoided = solve_avoid(veh, g, cfg, std::vector<std::uint8_t>(g.size(), 0));
    CHECK(base.field.values == avoided.field.values);
    CHECK(base.field.controls == avoided.field.controls);
    CHECK(avoided.field.meta.variant == SolveVariant::Avoid);
}

TEST_CASE("adversarial solve with a silent opponent equals the baseline") {
    const GridSpec g{10, 10, 10, 10.0};
    const EngagementParams veh{kAgent, kTarget};
    SolverConfig cfg = cold_config(1e-5, 3000, 2);
    cfg.adversarial_sigma = cfg.sigma;  // same noise, zero opponent policy

    ValueField silent{g};
    silent.meta.variant = SolveVariant::BaselineTarget;
    silent.meta.controlled = kTarget;
    silent.meta.opponent = kAgent;

    const SolveResult base = solve_baseline(ProblemRole::AgentControls, veh, g, cfg);
    const SolveResult adv = solve_adversarial(veh, g, cfg, silent);
    CHECK(base.field.values == adv.field.values);
    CHECK(base.field.controls == adv.field.controls);
    CHECK(adv.field.meta.variant == SolveVariant::Adversarial);
}

TEST_CASE("role-swapped solve exchanges the vehicles") {
    const GridSpec g{8, 8, 8, 10.0};
    const EngagementParams veh{kAgent, kTarget};
    const SolverConfig cfg = cold_config(1e-4, 1500, 2);
    const SolveResult swapped = solve_baseline(ProblemRole::TargetControls, veh, g, cfg);
    CHECK(swapped.field.meta.variant == SolveVariant::BaselineTarget);
    CHECK(swapped.field.meta.controlled == kTarget);
    CHECK(swapped.field.meta.opponent == kAgent);
}

TEST_CASE("upsample schedule validation") {
    const EngagementParams veh{kAgent, kTarget};
    SolverConfig cfg = cold_config(1e-4, 100);
    cfg.upsample_schedule = {8, 12};
    CHECK_THROWS_AS(solve_baseline(ProblemRole::AgentControls, veh, GridSpec(10, 10, 10, 10.0), cfg),
                    ConfigError);
    cfg.upsample_schedule = {12, 8};
    CHECK_THROWS_AS(solve_baseline(ProblemRole::AgentControls, veh, GridSpec(8, 8, 8, 10.0), cfg),
                    ConfigError);
    cfg.upsample_schedule = {8, 12};
    CHECK_THROWS_AS(solve_baseline(ProblemRole::AgentControls, veh, GridSpec(12, 12, 14, 10.0), cfg),
                    ConfigError);
}

TEST_CASE("control levels come in tie-break order") {
    const auto levels = control_levels(kAgent);
    CHECK(levels[0] == 0.0);
    CHECK(levels[1] == -1.0);
    CHECK(levels[2] == 1.0);
}

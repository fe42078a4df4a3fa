#include "wezopt/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "wezopt/dynamics.hpp"
#include "wezopt/geometry.hpp"
#include "wezopt/policy_store.hpp"
#include "wezopt/solver.hpp"

namespace wezopt {

namespace {

// Spot checks against the stock vehicles; each expected number is an
// independent algebraic reduction of the boundary formula.
SuiteResult bez_spot_values() {
    const WezParams agent{1.2, 1.0, 0.2};
    const WezParams target{1.1, 0.9, 0.15};
    struct Case {
        const WezParams& p;
        double aspect;
        double expected;
    };
    const Case cases[] = {
        {agent, 0.0, 11.0 / 6.0},                 // (1/1.2)(1 + 1.2)
        {agent, kPi, 1.0 / 6.0},                  // (1/1.2)(1.2 - 1)
        {agent, kPi / 2, std::sqrt(11.0) / 6.0},  // sqrt(0.44)/1.2
        {target, 0.0, 39.0 / 22.0},               // (0.9/1.1)(1 + 7/6)
    };
    double worst = 0.0;
    for (const auto& c : cases)
        worst = std::max(worst, std::abs(bez_radius(c.p, c.aspect) - c.expected));
    std::ostringstream detail;
    detail << "max abs error " << worst;
    return {"bez_spot_values", worst <= 1e-9, detail.str()};
}

SuiteResult probability_simplex(const RunConfig& cfg, int samples) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> pick_i(1, cfg.grid.n_r - 2);
    std::uniform_int_distribution<int> pick_j(0, cfg.grid.n_xi_a - 1);
    std::uniform_int_distribution<int> pick_k(0, cfg.grid.n_xi_t - 1);
    std::uniform_int_distribution<int> pick3(0, 2);
    std::uniform_int_distribution<int> pick_variant(0, 3);

    double worst_sum = 0.0;
    double worst_neg = 0.0;
    for (int s = 0; s < samples; ++s) {
        const bool swapped = pick_variant(rng) == 1;
        const VehicleParams& ctrl = swapped ? cfg.target : cfg.agent;
        const VehicleParams& opp = swapped ? cfg.agent : cfg.target;
        const double sigma =
            pick_variant(rng) == 3 ? cfg.solver.adversarial_sigma : cfg.solver.sigma;
        const ReducedState state{cfg.grid.r(pick_i(rng)), cfg.grid.xi_a(pick_j(rng)),
                                 cfg.grid.xi_t(pick_k(rng))};
        const double u = control_levels(ctrl)[pick3(rng)];
        const double u_opp = control_levels(opp)[pick3(rng)];
        const Drift d = drift(state, u, u_opp, ctrl, opp);
        const CellTransition ct = cell_transition(d, cfg.grid, sigma);
        worst_sum = std::max(worst_sum, std::abs(ct.sum() - 1.0));
        worst_neg = std::min({worst_neg, ct.p_r_up, ct.p_r_dn, ct.p_xi_a_up, ct.p_xi_a_dn,
                              ct.p_xi_t_up, ct.p_xi_t_dn});
    }
    std::ostringstream detail;
    detail << samples << " samples, max |sum-1| = " << worst_sum
           << ", min probability = " << worst_neg;
    return {"probability_simplex", worst_sum <= 1e-12 && worst_neg >= 0.0, detail.str()};
}

SuiteResult reduction_consistency(const RunConfig& cfg, int trials) {
    std::mt19937_64 rng(6789);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> radius(2.0, 8.0);
    std::uniform_real_distribution<double> turn(-1.0, 1.0);

    double worst = 0.0;
    double ratio_lo = 1e30, ratio_hi = 0.0;
    bool ok = true;
    for (int n = 0; n < trials; ++n) {
        const Pose agent{0.0, 0.0, angle(rng)};
        const double bearing = angle(rng);
        const double r0 = radius(rng);
        const Pose target{r0 * std::cos(bearing), r0 * std::sin(bearing), angle(rng)};
        const double u_a = turn(rng) * cfg.agent.max_turn_rate;
        const double u_t = turn(rng) * cfg.target.max_turn_rate;
        const double res = reduction_residual(agent, target, u_a, u_t, cfg.agent, cfg.target,
                                              1e-3, 1.0);
        const double res_half = reduction_residual(agent, target, u_a, u_t, cfg.agent, cfg.target,
                                                   5e-4, 1.0);
        worst = std::max(worst, res);
        const double ratio = res / res_half;
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
        if (res > 1e-2 || ratio < 1.7 || ratio > 2.3) ok = false;
    }
    std::ostringstream detail;
    detail << trials << " poses, max residual " << worst << ", halving ratio in [" << ratio_lo
           << ", " << ratio_hi << "]";
    return {"reduction_consistency", ok, detail.str()};
}

ValueField random_field(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(3, 8);
    std::uniform_real_distribution<double> val(-100.0, 100.0);
    ValueField f{GridSpec(dim(rng), dim(rng), dim(rng), 10.0)};
    for (auto& v : f.values) v = val(rng);
    for (auto& c : f.controls) c = val(rng) > 0 ? 1.0 : -1.0;
    f.meta.converged = true;
    f.meta.iterations = 123;
    return f;
}

SuiteResult persistence_roundtrip(int trials) {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(424242);
    const fs::path path = fs::temp_directory_path() / "wezopt_verify_field.bin";
    bool ok = true;
    std::string note = "round-trips bit-exact";
    for (int n = 0; n < trials && ok; ++n) {
        const ValueField f = random_field(rng);
        save_field(f, path);
        const ValueField g = load_field(path);
        ok = g.grid == f.grid && g.values == f.values && g.controls == f.controls &&
             g.meta == f.meta;
        if (!ok) note = "round-trip mismatch";
    }
    if (ok) {
        // One corrupted byte must surface as a checksum failure.
        const ValueField f = random_field(rng);
        save_field(f, path);
        auto size = fs::file_size(path);
        std::fstream fio(path, std::ios::in | std::ios::out | std::ios::binary);
        fio.seekg(-9, std::ios::end);
        char byte = 0;
        fio.read(&byte, 1);
        byte = static_cast<char>(byte ^ 0x5a);
        fio.seekp(-9, std::ios::end);
        fio.write(&byte, 1);
        fio.close();
        bool caught = false;
        try {
            (void)load_field(path);
        } catch (const ChecksumError&) {
            caught = true;
        }
        if (!caught) {
            ok = false;
            note = "corruption not detected";
        }
        // Truncation must surface distinctly.
        if (ok) {
            save_field(f, path);
            fs::resize_file(path, size - 16);
            caught = false;
            try {
                (void)load_field(path);
            } catch (const TruncatedPayloadError&) {
                caught = true;
            }
            if (!caught) {
                ok = false;
                note = "truncation not detected";
            }
        }
    }
    std::error_code ec;
    fs::remove(path, ec);
    std::ostringstream detail;
    detail << trials << " randomized round-trips; " << note;
    return {"persistence_roundtrip", ok, detail.str()};
}

}  // namespace

std::vector<SuiteResult> run_verification(const RunConfig& config) {
    std::vector<SuiteResult> results;
    results.push_back(bez_spot_values());
    results.push_back(probability_simplex(config, 20000));
    results.push_back(reduction_consistency(config, 100));
    results.push_back(persistence_roundtrip(50));
    return results;
}

std::string verification_report_json(const std::vector<SuiteResult>& results) {
    nlohmann::ordered_json j;
    j["suites"] = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        j["suites"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    j["all_passed"] = all;
    return j.dump(2) + "\n";
}

}  // namespace wezopt

#include "wezopt/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace wezopt {

namespace {

using ordered_json = nlohmann::ordered_json;

VehicleParams parse_vehicle(const nlohmann::json& j, const VehicleParams& defaults) {
    try {
        return VehicleParams(
            j.value("speed", defaults.speed), j.value("max_turn_rate", defaults.max_turn_rate),
            WezParams(j.value("weapon_speed_ratio", defaults.wez.weapon_speed_ratio),
                      j.value("weapon_range", defaults.wez.weapon_range),
                      j.value("capture_radius", defaults.wez.capture_radius)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ordered_json vehicle_json(const VehicleParams& v) {
    ordered_json j;
    j["speed"] = v.speed;
    j["max_turn_rate"] = v.max_turn_rate;
    j["weapon_speed_ratio"] = v.wez.weapon_speed_ratio;
    j["weapon_range"] = v.wez.weapon_range;
    j["capture_radius"] = v.wez.capture_radius;
    return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (j.contains("agent")) cfg.agent = parse_vehicle(j["agent"], cfg.agent);
        if (j.contains("target")) cfg.target = parse_vehicle(j["target"], cfg.target);
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            try {
                cfg.grid = GridSpec(g.value("n_r", cfg.grid.n_r), g.value("n_xi_a", cfg.grid.n_xi_a),
                                    g.value("n_xi_t", cfg.grid.n_xi_t),
                                    g.value("r_max", cfg.grid.r_max));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            cfg.solver.sigma = s.value("sigma", cfg.solver.sigma);
            cfg.solver.penalty = s.value("penalty", cfg.solver.penalty);
            cfg.solver.adversarial_sigma =
                s.value("adversarial_sigma", cfg.solver.adversarial_sigma);
            cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
            cfg.solver.tolerance = s.value("tolerance", cfg.solver.tolerance);
            if (s.contains("upsample_schedule"))
                cfg.solver.upsample_schedule = s["upsample_schedule"].get<std::vector<int>>();
            cfg.solver.threads = s.value("threads", cfg.solver.threads);
        }
        if (j.contains("sim")) {
            const auto& s = j["sim"];
            cfg.sim.dt = s.value("dt", cfg.sim.dt);
            cfg.sim.t_max = s.value("t_max", cfg.sim.t_max);
            cfg.sim.sigma_sim = s.value("sigma_sim", cfg.sim.sigma_sim);
            cfg.sim.seed = s.value("seed", cfg.sim.seed);
        }
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    ordered_json j;
    j["agent"] = vehicle_json(cfg.agent);
    j["target"] = vehicle_json(cfg.target);
    j["grid"] = {{"n_r", cfg.grid.n_r},
                 {"n_xi_a", cfg.grid.n_xi_a},
                 {"n_xi_t", cfg.grid.n_xi_t},
                 {"r_max", cfg.grid.r_max}};
    j["solver"] = {{"sigma", cfg.solver.sigma},
                   {"penalty", cfg.solver.penalty},
                   {"adversarial_sigma", cfg.solver.adversarial_sigma},
                   {"max_iterations", cfg.solver.max_iterations},
                   {"tolerance", cfg.solver.tolerance},
                   {"upsample_schedule", cfg.solver.upsample_schedule},
                   {"threads", cfg.solver.threads}};
    j["sim"] = {{"dt", cfg.sim.dt},
                {"t_max", cfg.sim.t_max},
                {"sigma_sim", cfg.sim.sigma_sim},
                {"seed", cfg.sim.seed}};
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

void validate_config(const RunConfig& cfg) {
    if (cfg.grid.n_xi_a != cfg.grid.n_xi_t)
        throw ConfigError(
            "grid: n_xi_a and n_xi_t must be equal (the role swap maps nodes to nodes)");
    if (!(cfg.solver.sigma >= 0.0)) throw ConfigError("solver: sigma must be >= 0");
    if (!(cfg.solver.adversarial_sigma >= 0.0))
        throw ConfigError("solver: adversarial_sigma must be >= 0");
    if (!(cfg.solver.penalty > 0.0)) throw ConfigError("solver: penalty must be > 0");
    if (cfg.solver.max_iterations < 1) throw ConfigError("solver: max_iterations must be >= 1");
    if (!(cfg.solver.tolerance > 0.0)) throw ConfigError("solver: tolerance must be > 0");
    if (cfg.solver.threads < 0) throw ConfigError("solver: threads must be >= 0");
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("sim: dt must be > 0");
    if (!(cfg.sim.t_max > cfg.sim.dt)) throw ConfigError("sim: t_max must exceed dt");
    if (!(cfg.sim.sigma_sim >= 0.0)) throw ConfigError("sim: sigma_sim must be >= 0");
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.agent == b.agent && a.target == b.target && a.grid == b.grid &&
           a.solver.sigma == b.solver.sigma && a.solver.penalty == b.solver.penalty &&
           a.solver.adversarial_sigma == b.solver.adversarial_sigma &&
           a.solver.max_iterations == b.solver.max_iterations &&
           a.solver.tolerance == b.solver.tolerance &&
           a.solver.upsample_schedule == b.solver.upsample_schedule &&
           a.solver.threads == b.solver.threads && a.sim.dt == b.sim.dt &&
           a.sim.t_max == b.sim.t_max && a.sim.sigma_sim == b.sim.sigma_sim &&
           a.sim.seed == b.sim.seed && a.output_dir == b.output_dir;
}

}  // namespace wezopt

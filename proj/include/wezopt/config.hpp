#pragma once

#include <filesystem>
#include <string>

#include "wezopt/grid.hpp"
#include "wezopt/sim.hpp"
#include "wezopt/solver.hpp"

namespace wezopt {

/// Full run configuration. The defaults are the stock vehicle and solver
/// settings: agent v=1, nu=1.2, R=1, r_c=0.2; target v=0.8, nu=1.1, R=0.9,
/// r_c=0.15; both turn rates 1; 100 points per dimension over r_max=10;
/// sigma=1, penalty 100, tolerance 1e-6, 2e4 iteration budget.
struct RunConfig {
    VehicleParams agent{1.0, 1.0, WezParams{1.2, 1.0, 0.2}};
    VehicleParams target{0.8, 1.0, WezParams{1.1, 0.9, 0.15}};
    GridSpec grid{100, 100, 100, 10.0};
    SolverConfig solver{};
    SimConfig sim{};
    std::string output_dir = "out";

    EngagementParams vehicles() const { return {agent, target}; }
};

/// Parse a JSON config document; missing keys keep their defaults.
/// Throws ConfigError on malformed input or invariant violations (including
/// unequal angular resolutions, which would break the role swap).
RunConfig parse_config(const std::string& json_text);

/// Read and parse a config file.
RunConfig load_config(const std::filesystem::path& path);

/// Serialize with a fixed layout; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Invariant checks shared by parse and the CLI flag overrides.
void validate_config(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace wezopt

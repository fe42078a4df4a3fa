#include <doctest.h>

#include <cmath>
#include <random>

#include "wezopt/geometry.hpp"

using namespace wezopt;

namespace {
const WezParams kAgentWez{1.2, 1.0, 0.2};
const WezParams kTargetWez{1.1, 0.9, 0.15};
}  // namespace

TEST_CASE("bez_radius matches independently derived spot values") {
    // Closed forms: (R/nu) * (cos xi + sqrt(cos^2 xi - 1 + ((R+rc)/R)^2)).
    CHECK(bez_radius(kAgentWez, 0.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-12));
    CHECK(bez_radius(kAgentWez, kPi) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(bez_radius(kAgentWez, kPi / 2) == doctest::Approx(std::sqrt(11.0) / 6.0).epsilon(1e-12));
    CHECK(bez_radius(kTargetWez, 0.0) == doctest::Approx(39.0 / 22.0).epsilon(1e-12));
    CHECK(bez_radius(kTargetWez, kPi) == doctest::Approx(3.0 / 22.0).epsilon(1e-12));
}

TEST_CASE("bez_radius is positive, even and periodic") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> nu(1.01, 3.0);
    std::uniform_real_distribution<double> len(0.05, 4.0);
    std::uniform_real_distribution<double> ang(-10.0, 10.0);
    for (int n = 0; n < 200; ++n) {
        const WezParams p{nu(rng), len(rng), len(rng)};
        const double xi = ang(rng);
        const double rho = bez_radius(p, xi);
        CHECK(rho > 0.0);
        CHECK(rho == doctest::Approx(bez_radius(p, -xi)).epsilon(1e-12));
        CHECK(rho == doctest::Approx(bez_radius(p, xi + kTwoPi)).epsilon(1e-12));
    }
}

TEST_CASE("bez_radius decreases from head-on to tail aspect") {
    double prev = bez_radius(kAgentWez, 0.0);
    for (int n = 1; n <= 500; ++n) {
        const double rho = bez_radius(kAgentWez, kPi * n / 500.0);
        CHECK(rho <= prev + 1e-15);
        prev = rho;
    }
    CHECK(bez_radius(kAgentWez, 0.0) > bez_radius(kAgentWez, kPi));
}

TEST_CASE("zone membership uses the inclusive boundary") {
    CHECK(in_agent_wez({0.1, 0.0, 2.0}, kAgentWez));
    CHECK_FALSE(in_agent_wez({2.0, 0.0, 2.0}, kAgentWez));
    const double rho = bez_radius(kAgentWez, 0.7);
    CHECK(in_agent_wez({rho, 0.7, 0.0}, kAgentWez));
    CHECK_FALSE(in_agent_wez({std::nextafter(rho, 10.0), 0.7, 0.0}, kAgentWez));

    CHECK(in_target_wez({0.1, 0.0, 0.0}, kTargetWez));
    CHECK_FALSE(in_target_wez({0.2, 0.0, kPi}, kTargetWez));  // rho_T(pi) ~ 0.136
    CHECK_FALSE(in_target_wez({5.0, 0.0, 0.3}, kTargetWez));
}

TEST_CASE("classify_terminal resolves overlap to the target's zone") {
    // Inside both zones: close range, both boundaries exceed r.
    CHECK(classify_terminal({0.05, kPi, kPi}, kAgentWez, kTargetWez) == TerminalClass::InTargetWez);
    CHECK(classify_terminal({10.0, 0.0, 0.0}, kAgentWez, kTargetWez) == TerminalClass::Neither);
    // Agent zone only: between rho_T(pi) and rho_A(pi).
    CHECK(classify_terminal({0.15, kPi, kPi}, kAgentWez, kTargetWez) == TerminalClass::InAgentWez);
    // Head-on sliver where the agent out-ranges the target.
    CHECK(classify_terminal({1.8, 0.0, 0.0}, kAgentWez, kTargetWez) == TerminalClass::InAgentWez);
}

TEST_CASE("invalid zone parameters are rejected at construction") {
    CHECK_THROWS_AS(WezParams(1.0, 1.0, 0.2), std::invalid_argument);   // ratio not > 1
    CHECK_THROWS_AS(WezParams(0.9, 1.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(WezParams(1.2, 0.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(WezParams(1.2, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(WezParams(1.2, -1.0, 0.1), std::invalid_argument);
}

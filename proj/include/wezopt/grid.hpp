#pragma once

#include <cstddef>
#include <stdexcept>

#include "wezopt/angles.hpp"

namespace wezopt {

/// Node-registered grid over the computational domain
/// [0, r_max] x [-pi, pi) x [-pi, pi).
///
/// The r axis includes both endpoints (spacing r_max / (n_r - 1)); the two
/// angle axes are periodic and exclude the duplicate +pi node (spacing
/// 2*pi / n).
struct GridSpec {
    int n_r;
    int n_xi_a;
    int n_xi_t;
    double r_max;

    GridSpec(int nr, int na, int nt, double rmax) : n_r(nr), n_xi_a(na), n_xi_t(nt), r_max(rmax) {
        if (nr < 3 || na < 3 || nt < 3)
            throw std::invalid_argument("GridSpec: need at least 3 points per dimension");
        if (!(rmax > 0.0)) throw std::invalid_argument("GridSpec: r_max must be > 0");
    }
    GridSpec() : GridSpec(100, 100, 100, 10.0) {}

    double dr() const { return r_max / (n_r - 1); }
    double dxi_a() const { return kTwoPi / n_xi_a; }
    double dxi_t() const { return kTwoPi / n_xi_t; }

    double r(int i) const { return r_max * i / (n_r - 1); }
    double xi_a(int j) const { return -kPi + j * dxi_a(); }
    double xi_t(int k) const { return -kPi + k * dxi_t(); }

    std::size_t size() const {
        return static_cast<std::size_t>(n_r) * n_xi_a * n_xi_t;
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_xi_a + j) * n_xi_t + k;
    }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace wezopt

#pragma once

#include <filesystem>
#include <vector>

#include "wezopt/solver.hpp"

namespace wezopt {

// Field files are a self-describing, language-neutral container:
//   - a UTF-8 text header of key=value lines terminated by one blank line
//     (doubles printed with 17 significant digits so they round-trip),
//   - two raw payload arrays, values then controls, little-endian IEEE-754
//     binary64, laid out as index = (i_r * n_xi_a + i_xi_a) * n_xi_t + i_xi_t,
//   - a CRC-32 of the payload bytes recorded in the header.

struct FieldIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HeaderParseError : FieldIoError {
    using FieldIoError::FieldIoError;
};
struct VersionMismatchError : FieldIoError {
    using FieldIoError::FieldIoError;
};
struct ChecksumError : FieldIoError {
    using FieldIoError::FieldIoError;
};
struct TruncatedPayloadError : FieldIoError {
    using FieldIoError::FieldIoError;
};

inline constexpr int kFieldFormatVersion = 1;

void save_field(const ValueField& field, const std::filesystem::path& path);
ValueField load_field(const std::filesystem::path& path);

/// Turn command at an arbitrary state: trilinear interpolation of the stored
/// controls (periodic in both angles). States beyond r_max fall back to pure
/// pursuit, -u_bar * sign(xi_t), which steers back into the domain.
double sample_control(const ValueField& field, const ReducedState& state);

/// Interpolated value surface; r is clamped into [0, r_max].
double sample_value(const ValueField& field, const ReducedState& state);

/// One (r, xi_t) plane of a field at the nearest xi_a node, as plot-ready
/// rows in r-major order.
struct SliceRow {
    double r;
    double xi_t;
    double value;
    double control;
};

std::vector<SliceRow> extract_slice(const ValueField& field, double xi_a);

}  // namespace wezopt

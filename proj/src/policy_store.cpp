#include "wezopt/policy_store.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace wezopt {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw HeaderParseError("bad numeric header value: " + s);
    return v;
}

long parse_long(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw HeaderParseError("bad integer header value: " + s);
    return v;
}

void append_doubles_le(std::string& out, const std::vector<double>& data) {
    if constexpr (std::endian::native == std::endian::little) {
        const std::size_t n = out.size();
        out.resize(n + data.size() * 8);
        std::memcpy(out.data() + n, data.data(), data.size() * 8);
    } else {
        for (const double v : data) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
        }
    }
}

std::vector<double> read_doubles_le(const char* bytes, std::size_t count) {
    std::vector<double> out(count);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out.data(), bytes, count * 8);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t bits = 0;
            for (int b = 7; b >= 0; --b)
                bits = (bits << 8) | static_cast<unsigned char>(bytes[i * 8 + b]);
            out[i] = std::bit_cast<double>(bits);
        }
    }
    return out;
}

std::uint32_t payload_crc(const std::string& payload) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size())));
}

void put_vehicle(std::ostream& os, const char* prefix, const VehicleParams& v) {
    os << prefix << "_speed=" << fmt_double(v.speed) << '\n'
       << prefix << "_max_turn_rate=" << fmt_double(v.max_turn_rate) << '\n'
       << prefix << "_weapon_speed_ratio=" << fmt_double(v.wez.weapon_speed_ratio) << '\n'
       << prefix << "_weapon_range=" << fmt_double(v.wez.weapon_range) << '\n'
       << prefix << "_capture_radius=" << fmt_double(v.wez.capture_radius) << '\n';
}

class HeaderMap {
  public:
    explicit HeaderMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    const std::string& get(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw HeaderParseError("missing header key: " + key);
        return it->second;
    }
    double get_double(const std::string& key) const { return parse_double(get(key)); }
    long get_long(const std::string& key) const { return parse_long(get(key)); }

  private:
    std::map<std::string, std::string> kv_;
};

VehicleParams get_vehicle(const HeaderMap& h, const std::string& prefix) {
    try {
        return VehicleParams(h.get_double(prefix + "_speed"), h.get_double(prefix + "_max_turn_rate"),
                             WezParams(h.get_double(prefix + "_weapon_speed_ratio"),
                                       h.get_double(prefix + "_weapon_range"),
                                       h.get_double(prefix + "_capture_radius")));
    } catch (const std::invalid_argument& e) {
        throw HeaderParseError(std::string("invalid vehicle parameters in header: ") + e.what());
    }
}

}  // namespace

void save_field(const ValueField& field, const std::filesystem::path& path) {
    if (field.values.size() != field.grid.size() || field.controls.size() != field.grid.size())
        throw FieldIoError("save_field: field arrays do not match the grid");

    std::string payload;
    payload.reserve(field.grid.size() * 16);
    append_doubles_le(payload, field.values);
    append_doubles_le(payload, field.controls);

    std::ostringstream header;
    header << "format_version=" << kFieldFormatVersion << '\n'
           << "variant=" << to_string(field.meta.variant) << '\n'
           << "n_r=" << field.grid.n_r << '\n'
           << "n_xi_a=" << field.grid.n_xi_a << '\n'
           << "n_xi_t=" << field.grid.n_xi_t << '\n'
           << "r_max=" << fmt_double(field.grid.r_max) << '\n'
           << "sigma=" << fmt_double(field.meta.sigma) << '\n'
           << "penalty=" << fmt_double(field.meta.penalty) << '\n'
           << "converged=" << (field.meta.converged ? 1 : 0) << '\n'
           << "iterations=" << field.meta.iterations << '\n';
    put_vehicle(header, "controlled", field.meta.controlled);
    put_vehicle(header, "opponent", field.meta.opponent);
    header << "payload_crc32=" << payload_crc(payload) << '\n' << '\n';

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FieldIoError("save_field: cannot open " + path.string());
    const std::string head = header.str();
    os.write(head.data(), static_cast<std::streamsize>(head.size()));
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!os) throw FieldIoError("save_field: write failed for " + path.string());
}

ValueField load_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldIoError("load_field: cannot open " + path.string());

    std::map<std::string, std::string> kv;
    std::string line;
    bool saw_blank = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            saw_blank = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw HeaderParseError("malformed header line: " + line);
        kv.emplace(line.substr(0, eq), line.substr(eq + 1));
    }
    if (!saw_blank) throw HeaderParseError("header not terminated by a blank line");
    const HeaderMap h{std::move(kv)};

    if (h.get_long("format_version") != kFieldFormatVersion)
        throw VersionMismatchError("unsupported field format version " + h.get("format_version"));

    ValueField field;
    try {
        field.grid = GridSpec(static_cast<int>(h.get_long("n_r")), static_cast<int>(h.get_long("n_xi_a")),
                              static_cast<int>(h.get_long("n_xi_t")), h.get_double("r_max"));
    } catch (const std::invalid_argument& e) {
        throw HeaderParseError(std::string("invalid grid in header: ") + e.what());
    }
    field.meta.variant = variant_from_string(h.get("variant"));
    field.meta.sigma = h.get_double("sigma");
    field.meta.penalty = h.get_double("penalty");
    field.meta.converged = h.get_long("converged") != 0;
    field.meta.iterations = static_cast<int>(h.get_long("iterations"));
    field.meta.controlled = get_vehicle(h, "controlled");
    field.meta.opponent = get_vehicle(h, "opponent");

    const std::size_t n = field.grid.size();
    const std::size_t expected = n * 16;
    std::string payload(expected, '\0');
    is.read(payload.data(), static_cast<std::streamsize>(expected));
    if (static_cast<std::size_t>(is.gcount()) != expected)
        throw TruncatedPayloadError("payload shorter than the header dimensions require");
    if (is.peek() != std::char_traits<char>::eof())
        throw TruncatedPayloadError("trailing bytes after the payload");

    const auto stored = static_cast<std::uint32_t>(h.get_long("payload_crc32"));
    if (payload_crc(payload) != stored) throw ChecksumError("payload checksum mismatch");

    field.values = read_doubles_le(payload.data(), n);
    field.controls = read_doubles_le(payload.data() + n * 8, n);
    return field;
}

double sample_control(const ValueField& field, const ReducedState& state) {
    if (state.r > field.grid.r_max) {
        // Out of the computational domain: pure pursuit steers back in.
        return -field.meta.controlled.max_turn_rate * sign_of(wrap_angle(state.xi_t));
    }
    return trilinear_at(field.grid, field.controls, state.r, state.xi_a, state.xi_t);
}

double sample_value(const ValueField& field, const ReducedState& state) {
    return trilinear_at(field.grid, field.values, state.r, state.xi_a, state.xi_t);
}

std::vector<SliceRow> extract_slice(const ValueField& field, double xi_a) {
    const GridSpec& g = field.grid;
    int j = static_cast<int>(std::lround((wrap_angle(xi_a) + kPi) / g.dxi_a())) % g.n_xi_a;
    std::vector<SliceRow> rows;
    rows.reserve(static_cast<std::size_t>(g.n_r) * g.n_xi_t);
    for (int i = 0; i < g.n_r; ++i)
        for (int k = 0; k < g.n_xi_t; ++k) {
            const std::size_t idx = g.index(i, j, k);
            rows.push_back({g.r(i), g.xi_t(k), field.values[idx], field.controls[idx]});
        }
    return rows;
}

}  // namespace wezopt

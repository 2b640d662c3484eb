#include "beaconloc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "beaconloc/report.hpp"

namespace beaconloc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("key '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    }
    return value;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("key '" + std::string(key) + "' expects an integer, got '" + std::string(text) +
                                    "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("key '" + std::string(key) + "' expects true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_numbers(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string token;
    std::istringstream in{std::string(text)};
    while (in >> token) {
        token.erase(std::remove(token.begin(), token.end(), ','), token.end());
        if (!token.empty()) out.push_back(parse_double(key, token));
    }
    return out;
}

}  // namespace

std::string_view to_string(MobilityModel m) {
    return m == MobilityModel::waypoint ? "waypoint" : "direction";
}

std::string_view to_string(Preset p) {
    return p == Preset::desk ? "desk" : "paper";
}

std::optional<Preset> parse_preset(std::string_view name) {
    if (name == "desk") return Preset::desk;
    if (name == "paper") return Preset::paper;
    return std::nullopt;
}

std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source) {
    std::vector<KeyValue> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source, line_no, "missing key before '='");
        if (value.empty()) throw ConfigError(source, line_no, "missing value for key '" + std::string(key) + "'");
        for (const auto& kv : out) {
            if (kv.key == key) {
                throw ConfigError(source, line_no,
                                  "duplicate key '" + std::string(key) + "' (first set on line " +
                                      std::to_string(kv.line) + ")");
            }
        }
        out.push_back({std::string(key), std::string(value), line_no});
    }
    return out;
}

void apply_scenario_key(ScenarioConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "field") {
        const auto v = parse_numbers(key, value);
        if (v.size() == 3) {
            c.field = {{0.0, 0.0, 0.0}, {v[0], v[1], v[2]}};
        } else if (v.size() == 6) {
            c.field = {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
        } else {
            throw std::invalid_argument("key 'field' expects 3 extents or 6 bounds (min xyz, max xyz)");
        }
    } else if (key == "n_static") {
        c.n_static = parse_integer<std::int64_t>(key, value);
    } else if (key == "anchor_pct") {
        c.anchor_pct = parse_double(key, value);
    } else if (key == "comm_range") {
        c.comm_range = parse_double(key, value);
    } else if (key == "beacon_interval") {
        c.beacon_interval = parse_double(key, value);
    } else if (key == "lifetime_factor") {
        c.lifetime_factor = parse_double(key, value);
    } else if (key == "mobility") {
        if (value == "waypoint") {
            c.mobility = MobilityModel::waypoint;
        } else if (value == "direction") {
            c.mobility = MobilityModel::direction;
        } else {
            throw std::invalid_argument("key 'mobility' expects waypoint or direction");
        }
    } else if (key == "anchor_speed") {
        c.anchor_speed = parse_double(key, value);
    } else if (key == "method") {
        auto m = parse_method(value);
        if (!m) throw std::invalid_argument("key 'method' expects three_beacon, four_beacon_chord or four_beacon_algebraic");
        c.method = *m;
    } else if (key == "max_time") {
        c.max_time = parse_double(key, value);
    } else if (key == "seed") {
        c.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "chord_min_angle_deg") {
        c.chord_min_angle_deg = parse_double(key, value);
    } else if (key == "leg_min_fraction") {
        c.legs.min_fraction = parse_double(key, value);
    } else if (key == "leg_max_fraction") {
        c.legs.max_fraction = parse_double(key, value);
    } else if (key == "exact_beacon_points") {
        c.exact_beacon_points = parse_bool(key, value);
    } else {
        throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    }
}

ScenarioConfig parse_scenario(std::string_view text, const std::string& source, Preset preset) {
    ScenarioConfig config = preset_config(preset);
    const auto entries = parse_key_values(text, source);
    for (const auto& kv : entries) {
        try {
            apply_scenario_key(config, kv.key, kv.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(source, kv.line, e.what());
        }
    }
    for (auto required : kRequiredScenarioKeys) {
        const bool present = std::any_of(entries.begin(), entries.end(), [&](const KeyValue& kv) { return kv.key == required; });
        if (!present) throw ConfigError(source, 0, "missing required key '" + std::string(required) + "'");
    }
    try {
        config.validate();
    } catch (const InvalidConfig& e) {
        throw ConfigError(source, 0, e.what());
    }
    return config;
}

std::string format_scenario(const ScenarioConfig& c) {
    std::ostringstream out;
    const auto& f = c.field;
    out << "field = " << format_number(f.min.x) << ' ' << format_number(f.min.y) << ' ' << format_number(f.min.z) << ' '
        << format_number(f.max.x) << ' ' << format_number(f.max.y) << ' ' << format_number(f.max.z) << '\n'
        << "n_static = " << c.n_static << '\n'
        << "anchor_pct = " << format_number(c.anchor_pct) << '\n'
        << "comm_range = " << format_number(c.comm_range) << '\n'
        << "beacon_interval = " << format_number(c.beacon_interval) << '\n'
        << "lifetime_factor = " << format_number(c.lifetime_factor) << '\n'
        << "mobility = " << to_string(c.mobility) << '\n'
        << "anchor_speed = " << format_number(c.anchor_speed) << '\n'
        << "method = " << to_string(c.method) << '\n'
        << "max_time = " << format_number(c.max_time) << '\n'
        << "seed = " << c.seed << '\n'
        << "chord_min_angle_deg = " << format_number(c.chord_min_angle_deg) << '\n'
        << "leg_min_fraction = " << format_number(c.legs.min_fraction) << '\n'
        << "leg_max_fraction = " << format_number(c.legs.max_fraction) << '\n'
        << "exact_beacon_points = " << (c.exact_beacon_points ? "true" : "false") << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace beaconloc

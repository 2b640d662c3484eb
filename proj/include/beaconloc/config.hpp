#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beaconloc/sim.hpp"

namespace beaconloc {

/// Parse failure in a key = value file. `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, std::string message)
        : std::runtime_error(format(source, line, message)), line_(line) {}

    int line() const { return line_; }

private:
    static std::string format(const std::string& source, int line, const std::string& message) {
        return line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message;
    }

    int line_;
};

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

/// Flat `key = value` text. Blank lines and text after '#' are ignored.
std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source);

/// Applies one scenario key. Throws std::invalid_argument naming the problem.
void apply_scenario_key(ScenarioConfig& config, std::string_view key, std::string_view value);

inline constexpr std::string_view kRequiredScenarioKeys[] = {"comm_range"};

/// Builds a scenario from a preset plus the file's keys. Throws ConfigError.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source, Preset preset = Preset::desk);

/// Renders a scenario in the same format; parse_scenario(format_scenario(c)) == c.
std::string format_scenario(const ScenarioConfig& config);

std::string_view to_string(MobilityModel m);
std::string_view to_string(Preset p);
std::optional<Preset> parse_preset(std::string_view name);

std::string read_text_file(const std::string& path);

}  // namespace beaconloc

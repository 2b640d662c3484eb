#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beaconloc/config.hpp"
#include "beaconloc/sim.hpp"

namespace beaconloc {

/// A base scenario, the parameters to vary, and the seeds to repeat each cell with.
///
/// Sweep files use the scenario format plus `vary.<key> = v1, v2, ...` lines and a
/// `seeds = s1, s2, ...` line.
struct SweepSpec {
    ScenarioConfig base;
    std::vector<std::pair<std::string, std::vector<std::string>>> vary;
    std::vector<std::uint64_t> seeds;
};

/// One configuration of the varied parameters; `runs` holds one config per seed.
struct SweepCell {
    std::string params;  // "key=value;..." for varied keys other than method and anchor_pct
    std::vector<ScenarioConfig> runs;
};

/// Throws ConfigError.
SweepSpec parse_sweep(std::string_view text, const std::string& source, Preset preset = Preset::desk);

/// Cross product of the vary lists in file order, seeds innermost. Throws ConfigError.
std::vector<SweepCell> expand(const SweepSpec& spec);

/// Runs every config on up to `jobs` threads and hands reports to `sink` on the calling
/// thread, in input order, as soon as each prefix completes.
void run_ordered(std::span<const ScenarioConfig> configs, unsigned jobs,
                 const std::function<void(std::size_t, MetricsReport&&)>& sink);

}  // namespace beaconloc

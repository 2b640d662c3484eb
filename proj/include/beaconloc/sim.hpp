#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "beaconloc/geom3d.hpp"
#include "beaconloc/localize.hpp"
#include "beaconloc/mobility.hpp"
#include "beaconloc/random.hpp"

namespace beaconloc {

class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
    AxisAlignedBox field{{0.0, 0.0, 0.0}, {500.0, 500.0, 500.0}};
    std::int64_t n_static = 300;
    double anchor_pct = 1.0;     // percent of n_static
    double comm_range = 100.0;   // meters
    double beacon_interval = 1.0;
    double lifetime_factor = 2.0;
    MobilityModel mobility = MobilityModel::waypoint;
    double anchor_speed = 10.0;
    LocalizerMethod method = LocalizerMethod::three_beacon;
    double max_time = 3000.0;
    std::uint64_t seed = 1;
    double chord_min_angle_deg = kDefaultChordMinAngleDeg;
    LegLength legs;
    // Log the true sphere crossings on the anchor's path instead of broadcast positions.
    bool exact_beacon_points = false;

    std::int64_t anchor_count() const;
    double lifetime() const { return lifetime_factor * beacon_interval; }
    std::int64_t tick_count() const;

    /// Throws InvalidConfig.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

enum class Preset { desk, paper };

ScenarioConfig preset_config(Preset preset);

/// Static nodes and anchors right after deployment.
struct WorldState {
    ScenarioConfig config;
    std::vector<Point3> nodes;
    std::vector<MobilityState> anchors;
    std::vector<RandomStream> anchor_streams;
};

/// Fixed sub-stream ids; anchor i uses kAnchorStreamBase + i.
inline constexpr std::uint64_t kNodeStream = 1;
inline constexpr std::uint64_t kAnchorPlacementStream = 2;
inline constexpr std::uint64_t kAnchorStreamBase = 1000;

WorldState deploy(const ScenarioConfig& config);

struct NodeRecord {
    NodeId node_id = 0;
    Point3 truth;
    std::optional<LocalizationEstimate> estimate;

    double error() const { return estimate ? distance(estimate->position, truth) : 0.0; }
};

struct MetricsReport {
    LocalizerMethod method = LocalizerMethod::three_beacon;
    double anchor_pct = 0.0;
    std::uint64_t seed = 0;
    std::int64_t n_anchors = 0;

    double ale = 0.0;         // meters, over localized nodes
    bool ale_defined = false; // false when nothing was localized (ale reported as 0)
    double alt = 0.0;         // seconds, over localized nodes
    double beacon_overhead = 0.0;
    double localized_fraction = 0.0;
    double simulated_time = 0.0;

    // Broadcasts per anchor when 90% of nodes were localized; meaningless unless reached_90.
    double overhead_at_90 = 0.0;
    bool reached_90 = false;

    std::int64_t total_broadcasts = 0;
    std::int64_t messages_received = 0;
    std::int64_t beacon_points_consumed = 0;
    std::int64_t localized_nodes = 0;

    std::vector<NodeRecord> nodes;
};

/// Runs the fixed-tick loop until max_time and computes the metrics.
MetricsReport run(WorldState world);

inline MetricsReport run_scenario(const ScenarioConfig& config) { return run(deploy(config)); }

struct AleResult {
    double value = 0.0;
    bool empty = true;
};

/// Mean distance between each estimate and truths[estimate.node_id].
AleResult compute_ale(std::span<const LocalizationEstimate> estimates, std::span<const Point3> truths);

/// Point where the segment from -> to crosses the sphere; nullopt if it does not.
/// `entering` selects the first crossing, otherwise the last.
std::optional<Point3> segment_sphere_crossing(const Point3& from, const Point3& to, const Point3& center,
                                              double radius, bool entering);

}  // namespace beaconloc

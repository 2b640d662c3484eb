#include "beaconloc/sim.hpp"

#include <cmath>
#include <map>
#include <string>

namespace beaconloc {

std::int64_t ScenarioConfig::anchor_count() const {
    return std::llround(static_cast<double>(n_static) * anchor_pct / 100.0);
}

std::int64_t ScenarioConfig::tick_count() const {
    return static_cast<std::int64_t>(std::floor(max_time / beacon_interval + 1e-9));
}

void ScenarioConfig::validate() const {
    const Vec3 extent = field.extent();
    if (!is_finite(field.min) || !is_finite(field.max) || !(extent.x > 0.0 && extent.y > 0.0 && extent.z > 0.0)) {
        throw InvalidConfig("field must have positive finite extent on every axis");
    }
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidConfig(std::string(name) + " must be positive");
    };
    if (n_static <= 0) throw InvalidConfig("n_static must be positive");
    positive(anchor_pct, "anchor_pct");
    positive(comm_range, "comm_range");
    positive(beacon_interval, "beacon_interval");
    positive(anchor_speed, "anchor_speed");
    positive(max_time, "max_time");
    if (!(lifetime_factor > 1.0) || !std::isfinite(lifetime_factor)) {
        throw InvalidConfig("lifetime_factor must be greater than 1");
    }
    if (!(chord_min_angle_deg > 0.0 && chord_min_angle_deg < 90.0)) {
        throw InvalidConfig("chord_min_angle_deg must lie in (0, 90)");
    }
    if (!(legs.min_fraction > 0.0 && legs.min_fraction <= legs.max_fraction)) {
        throw InvalidConfig("leg length fractions must satisfy 0 < min <= max");
    }
    if (anchor_count() < 1) throw InvalidConfig("anchor_pct yields no anchors for this n_static");
}

ScenarioConfig preset_config(Preset preset) {
    ScenarioConfig config;
    if (preset == Preset::paper) {
        config.field = {{0.0, 0.0, 0.0}, {1000.0, 1000.0, 1000.0}};
        config.n_static = 3000;
        config.max_time = 10000.0;
    }
    return config;
}

WorldState deploy(const ScenarioConfig& config) {
    config.validate();
    WorldState world;
    world.config = config;

    RandomStream node_rng(config.seed, kNodeStream);
    world.nodes.reserve(static_cast<std::size_t>(config.n_static));
    for (std::int64_t i = 0; i < config.n_static; ++i) world.nodes.push_back(node_rng.point_in(config.field));

    RandomStream placement(config.seed, kAnchorPlacementStream);
    const auto n_anchors = config.anchor_count();
    for (std::int64_t i = 0; i < n_anchors; ++i) {
        const Point3 start = placement.point_in(config.field);
        auto& rng = world.anchor_streams.emplace_back(config.seed, kAnchorStreamBase + static_cast<std::uint64_t>(i));
        world.anchors.push_back(config.mobility == MobilityModel::waypoint
                                    ? make_waypoint_state(start, config.anchor_speed, config.field, rng)
                                    : make_direction_state(start, config.anchor_speed, config.field, rng, config.legs));
    }
    return world;
}

std::optional<Point3> segment_sphere_crossing(const Point3& from, const Point3& to, const Point3& center,
                                              double radius, bool entering) {
    const Vec3 d = to - from;
    const Vec3 f = from - center;
    const double a = dot(d, d);
    if (a == 0.0) return std::nullopt;
    const double b = 2.0 * dot(f, d);
    const double c = dot(f, f) - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double t = entering ? (-b - root) / (2.0 * a) : (-b + root) / (2.0 * a);
    if (t < 0.0 || t > 1.0) return std::nullopt;
    return from + t * d;
}

namespace {

struct NodeState {
    VisitorList visitors;
    std::vector<BeaconPoint> points;
    std::vector<Point3> witnesses;
    std::map<AnchorId, Point3> exact_exits;
    bool new_points = false;
    bool new_witnesses = false;
    std::optional<LocalizationEstimate> estimate;
};

std::optional<LocalizationEstimate> attempt(const ScenarioConfig& config, const NodeState& node) {
    const std::span<const BeaconPoint> points(node.points);
    switch (config.method) {
        case LocalizerMethod::three_beacon:
            if (points.size() < 3 || !(node.new_points || node.new_witnesses)) return std::nullopt;
            return try_localize_three(points, config.comm_range, config.field, node.witnesses);
        case LocalizerMethod::four_beacon_chord:
            if (points.size() < 4 || !node.new_points) return std::nullopt;
            return localize_four_chord(points, config.chord_min_angle_deg);
        case LocalizerMethod::four_beacon_algebraic:
            if (points.size() < 4 || !node.new_points) return std::nullopt;
            return localize_four_algebraic(points);
    }
    return std::nullopt;
}

}  // namespace

MetricsReport run(WorldState world) {
    const ScenarioConfig& config = world.config;
    const double range = config.comm_range;
    const double range_sq = range * range;
    const double dt = config.beacon_interval;
    const auto n_nodes = world.nodes.size();
    const auto n_anchors = world.anchors.size();
    const auto ticks = config.tick_count();

    MetricsReport report;
    report.method = config.method;
    report.anchor_pct = config.anchor_pct;
    report.seed = config.seed;
    report.n_anchors = static_cast<std::int64_t>(n_anchors);

    std::vector<NodeState> nodes(n_nodes);
    std::vector<Point3> previous(n_anchors);
    std::size_t localized = 0;

    for (std::int64_t tick = 1; tick <= ticks; ++tick) {
        const double now = static_cast<double>(tick) * dt;

        for (std::size_t a = 0; a < n_anchors; ++a) {
            previous[a] = world.anchors[a].position;
            world.anchors[a] = config.mobility == MobilityModel::waypoint
                                   ? step_waypoint(world.anchors[a], dt, config.field, world.anchor_streams[a])
                                   : step_direction(world.anchors[a], dt, config.field, world.anchor_streams[a],
                                                    config.legs);
        }

        for (std::size_t a = 0; a < n_anchors; ++a) {
            const BeaconMessage msg{static_cast<AnchorId>(a), world.anchors[a].position, now};
            ++report.total_broadcasts;
            for (std::size_t n = 0; n < n_nodes; ++n) {
                const Point3& truth = world.nodes[n];
                const Vec3 offset = msg.position - truth;
                const bool inside = dot(offset, offset) <= range_sq;
                NodeState& node = nodes[n];

                if (config.exact_beacon_points && !node.estimate && !inside) {
                    const Vec3 before = previous[a] - truth;
                    if (dot(before, before) <= range_sq) {
                        if (auto exit = segment_sphere_crossing(previous[a], msg.position, truth, range, false)) {
                            node.exact_exits[msg.anchor_id] = *exit;
                        }
                    }
                }
                if (!inside) continue;

                ++report.messages_received;
                if (node.estimate) continue;

                node.witnesses.push_back(msg.position);
                node.new_witnesses = true;
                auto entry = node.visitors.process_beacon(msg, config.lifetime());
                if (!entry) continue;
                if (config.exact_beacon_points) {
                    auto crossing = segment_sphere_crossing(previous[a], msg.position, truth, range, true);
                    if (!crossing) continue;
                    entry->position = *crossing;
                }
                node.points.push_back(*entry);
                node.new_points = true;
            }
        }

        for (std::size_t n = 0; n < n_nodes; ++n) {
            NodeState& node = nodes[n];
            if (node.estimate) continue;
            for (auto& exit : node.visitors.expire_visitors(now)) {
                if (config.exact_beacon_points) {
                    auto it = node.exact_exits.find(exit.anchor_id);
                    if (it == node.exact_exits.end()) continue;
                    exit.position = it->second;
                    node.exact_exits.erase(it);
                }
                node.points.push_back(exit);
                node.new_points = true;
            }

            auto estimate = attempt(config, node);
            node.new_points = false;
            node.new_witnesses = false;
            if (!estimate) continue;
            estimate->node_id = static_cast<NodeId>(n);
            estimate->fixed_at = now;
            node.estimate = std::move(estimate);
            node.witnesses = {};
            node.points = {};
            ++localized;
        }

        if (!report.reached_90 && 10 * localized >= 9 * n_nodes) {
            report.reached_90 = true;
            report.overhead_at_90 = static_cast<double>(report.total_broadcasts) / static_cast<double>(n_anchors);
        }
    }

    report.simulated_time = static_cast<double>(ticks) * dt;
    report.beacon_overhead = static_cast<double>(report.total_broadcasts) / static_cast<double>(n_anchors);

    std::vector<LocalizationEstimate> estimates;
    double time_sum = 0.0;
    report.nodes.reserve(n_nodes);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        NodeRecord record{static_cast<NodeId>(n), world.nodes[n], std::move(nodes[n].estimate)};
        if (record.estimate) {
            time_sum += record.estimate->fixed_at;
            report.beacon_points_consumed += static_cast<std::int64_t>(record.estimate->beacons_used.size());
            estimates.push_back(*record.estimate);
        }
        report.nodes.push_back(std::move(record));
    }

    const AleResult ale = compute_ale(estimates, world.nodes);
    report.ale = ale.value;
    report.ale_defined = !ale.empty;
    report.alt = estimates.empty() ? 0.0 : time_sum / static_cast<double>(estimates.size());
    report.localized_nodes = static_cast<std::int64_t>(estimates.size());
    report.localized_fraction = static_cast<double>(estimates.size()) / static_cast<double>(n_nodes);
    return report;
}

AleResult compute_ale(std::span<const LocalizationEstimate> estimates, std::span<const Point3> truths) {
    if (estimates.empty()) return {};
    double sum = 0.0;
    for (const auto& est : estimates) {
        if (est.node_id < 0 || static_cast<std::size_t>(est.node_id) >= truths.size()) {
            throw std::out_of_range("estimate node_id has no ground truth");
        }
        sum += distance(est.position, truths[static_cast<std::size_t>(est.node_id)]);
    }
    return {sum / static_cast<double>(estimates.size()), false};
}

}  // namespace beaconloc

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "beaconloc/geom3d.hpp"

namespace beaconloc {

using AnchorId = std::int64_t;
using NodeId = std::int64_t;

/// One broadcast from a mobile anchor.
struct BeaconMessage {
    AnchorId anchor_id = 0;
    Point3 position;
    double timestamp = 0.0;
};

enum class BeaconKind { entry, exit };

/// An anchor position logged as an (approximate) point on the node's communication sphere.
struct BeaconPoint {
    AnchorId anchor_id = 0;
    Point3 position;
    double logged_at = 0.0;
    BeaconKind kind = BeaconKind::entry;
};

/// Anchors currently inside a node's communication sphere, with lifetimes.
///
/// The first message of a pass is logged as an entry point. Later messages only refresh
/// the expiry. When the expiry lapses the last heard position is logged as an exit point.
class VisitorList {
public:
    struct Entry {
        Point3 last_position;
        double last_heard = 0.0;
        double first_heard = 0.0;
        double expiry = 0.0;
    };

    /// Records a received message. Returns the entry point when the anchor was not listed.
    std::optional<BeaconPoint> process_beacon(const BeaconMessage& msg, double lifetime);

    /// Removes every entry with expiry <= now and returns their exit points in anchor_id
    /// order. A pass heard only once yields no exit point: it would duplicate the entry.
    std::vector<BeaconPoint> expire_visitors(double now);

    bool contains(AnchorId id) const { return entries_.contains(id); }
    const Entry* find(AnchorId id) const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::map<AnchorId, Entry>& entries() const { return entries_; }

private:
    std::map<AnchorId, Entry> entries_;
};

enum class LocalizerMethod { three_beacon, four_beacon_chord, four_beacon_algebraic };

enum class Ambiguity { unique, disambiguated_by_witness, disambiguated_by_bounds, unresolved };

std::string_view to_string(LocalizerMethod m);
std::string_view to_string(Ambiguity a);
std::string_view to_string(BeaconKind k);
std::optional<LocalizerMethod> parse_method(std::string_view name);

/// Beacon points each method consumes per fix.
constexpr std::size_t beacons_required(LocalizerMethod m) {
    return m == LocalizerMethod::three_beacon ? 3 : 4;
}

struct LocalizationEstimate {
    NodeId node_id = -1;
    Point3 position;
    LocalizerMethod method = LocalizerMethod::three_beacon;
    std::vector<BeaconPoint> beacons_used;
    double fixed_at = 0.0;
    Ambiguity ambiguity = Ambiguity::unique;
};

/// Chord-method baseline defaults: minimum angle between the two cross-section planes.
inline constexpr double kDefaultChordMinAngleDeg = 10.0;

/// Three-beacon localizer.
///
/// Takes the first usable triple in logging order (ordered by the latest point, then
/// lexicographically), builds its circumcircle and the two sphere-center candidates at
/// distance comm_range. The mirror ambiguity is resolved by dropping candidates outside
/// `field`, then by counting `witnesses` (received positions, each known to lie within
/// comm_range of the node) that each candidate is consistent with. An unresolved tie
/// returns nullopt so the caller can retry once more messages arrive.
std::optional<LocalizationEstimate> try_localize_three(std::span<const BeaconPoint> points, double comm_range,
                                                       const AxisAlignedBox& field, std::span<const Point3> witnesses);

/// Four-beacon chord baseline: axes of the circles through points {1,2,3} and {1,2,4} of
/// the first admissible quadruple are intersected. A quadruple is admissible when it is
/// non-coplanar and the two circle planes meet at more than min_angle_deg.
std::optional<LocalizationEstimate> localize_four_chord(std::span<const BeaconPoint> points,
                                                        double min_angle_deg = kDefaultChordMinAngleDeg);

/// Four-beacon algebraic baseline: the first non-coplanar quadruple solved as a sphere.
std::optional<LocalizationEstimate> localize_four_algebraic(std::span<const BeaconPoint> points);

}  // namespace beaconloc

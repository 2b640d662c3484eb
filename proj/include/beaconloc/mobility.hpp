#pragma once

#include "beaconloc/geom3d.hpp"
#include "beaconloc/random.hpp"

namespace beaconloc {

enum class MobilityModel { waypoint, direction };

/// Kinematic state of one anchor.
///
/// For random waypoint, `heading` holds the current destination. For random direction,
/// it is the unit heading and `remaining` is the length left on the current leg.
struct MobilityState {
    Point3 position;
    Vec3 heading;
    double speed = 0.0;
    double remaining = 0.0;
};

/// Leg lengths for random direction, as fractions of the field diagonal.
struct LegLength {
    double min_fraction = 0.1;
    double max_fraction = 0.5;

    friend bool operator==(const LegLength&, const LegLength&) = default;
};

MobilityState make_waypoint_state(const Point3& start, double speed, const AxisAlignedBox& field, RandomStream& rng);
MobilityState make_direction_state(const Point3& start, double speed, const AxisAlignedBox& field, RandomStream& rng,
                                   LegLength legs = {});

/// Moves speed*dt toward the destination, drawing a new uniform destination on arrival
/// and spending the leftover distance on the new leg.
MobilityState step_waypoint(MobilityState s, double dt, const AxisAlignedBox& field, RandomStream& rng);

/// Moves speed*dt along the heading with specular reflection off the field faces. A new
/// heading and leg length are drawn when the current leg is used up.
MobilityState step_direction(MobilityState s, double dt, const AxisAlignedBox& field, RandomStream& rng,
                             LegLength legs = {});

}  // namespace beaconloc

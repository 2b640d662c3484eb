#include "beaconloc/mobility.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace beaconloc {

namespace {

// Bounds the inner loops; a single tick never needs more legs or bounces than this
// unless dt is absurd relative to the field.
constexpr int kMaxSegmentsPerStep = 100000;

void require_step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("mobility step requires dt > 0");
}

double draw_leg(const AxisAlignedBox& field, RandomStream& rng, LegLength legs) {
    const double diag = field.diagonal();
    return rng.uniform(legs.min_fraction * diag, legs.max_fraction * diag);
}

}  // namespace

MobilityState make_waypoint_state(const Point3& start, double speed, const AxisAlignedBox& field, RandomStream& rng) {
    return {start, rng.point_in(field), speed, 0.0};
}

MobilityState make_direction_state(const Point3& start, double speed, const AxisAlignedBox& field, RandomStream& rng,
                                   LegLength legs) {
    const Vec3 heading = rng.unit_vector();
    return {start, heading, speed, draw_leg(field, rng, legs)};
}

MobilityState step_waypoint(MobilityState s, double dt, const AxisAlignedBox& field, RandomStream& rng) {
    require_step(dt);
    double budget = s.speed * dt;
    for (int guard = 0; budget > 0.0 && guard < kMaxSegmentsPerStep; ++guard) {
        const double to_target = distance(s.position, s.heading);
        if (budget < to_target) {
            s.position += (budget / to_target) * (s.heading - s.position);
            budget = 0.0;
        } else {
            s.position = s.heading;
            budget -= to_target;
            s.heading = rng.point_in(field);
        }
    }
    s.position = field.clamp(s.position);
    return s;
}

MobilityState step_direction(MobilityState s, double dt, const AxisAlignedBox& field, RandomStream& rng,
                             LegLength legs) {
    require_step(dt);
    double budget = s.speed * dt;
    for (int guard = 0; budget > 0.0 && guard < kMaxSegmentsPerStep; ++guard) {
        if (s.remaining <= 0.0) {
            s.heading = rng.unit_vector();
            s.remaining = draw_leg(field, rng, legs);
            continue;
        }

        // Path length to each face along the heading.
        std::array<double, 3> to_axis_face;
        for (int axis = 0; axis < 3; ++axis) {
            const double h = s.heading[axis];
            if (h > 0.0) {
                to_axis_face[axis] = std::max(0.0, (field.max[axis] - s.position[axis]) / h);
            } else if (h < 0.0) {
                to_axis_face[axis] = std::max(0.0, (field.min[axis] - s.position[axis]) / h);
            } else {
                to_axis_face[axis] = std::numeric_limits<double>::infinity();
            }
        }
        const double to_face = *std::min_element(to_axis_face.begin(), to_axis_face.end());

        const double advance = std::min({budget, s.remaining, to_face});
        s.position = field.clamp(s.position + advance * s.heading);
        budget -= advance;
        s.remaining -= advance;

        if (advance == to_face) {
            const double slack = 1e-12 * field.diagonal();
            for (int axis = 0; axis < 3; ++axis) {
                const double h = s.heading[axis];
                if (h != 0.0 && (to_axis_face[axis] - to_face) * std::abs(h) <= slack) {
                    s.position[axis] = h > 0.0 ? field.max[axis] : field.min[axis];
                    s.heading[axis] = -h;
                }
            }
        }
    }
    return s;
}

}  // namespace beaconloc

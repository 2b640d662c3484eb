#pragma once

#include <cstdint>
#include <numbers>
#include <random>

#include "beaconloc/geom3d.hpp"

namespace beaconloc {

/// Deterministic random stream. Sub-streams are keyed by (seed, stream id) so that
/// every anchor and the deployment draw from independent sequences.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform in [0, 1) from the top 53 bits; identical on every platform.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Point3 point_in(const AxisAlignedBox& box) {
        const double x = uniform(box.min.x, box.max.x);
        const double y = uniform(box.min.y, box.max.y);
        const double z = uniform(box.min.z, box.max.z);
        return {x, y, z};
    }

    /// Uniform direction on the unit sphere (Archimedes: uniform z, uniform azimuth).
    Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {rho * std::cos(phi), rho * std::sin(phi), z};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace beaconloc

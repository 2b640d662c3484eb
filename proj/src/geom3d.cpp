#include "beaconloc/geom3d.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

namespace beaconloc {

namespace {

void require_finite(std::initializer_list<Point3> points) {
    for (const auto& p : points) {
        if (!is_finite(p)) throw NonFiniteInput();
    }
}

}  // namespace

Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : v;
}

bool AxisAlignedBox::contains(const Point3& p, double tol) const {
    for (int axis = 0; axis < 3; ++axis) {
        if (p[axis] < min[axis] - tol || p[axis] > max[axis] + tol) return false;
    }
    return true;
}

Point3 AxisAlignedBox::clamp(const Point3& p) const {
    Point3 out = p;
    for (int axis = 0; axis < 3; ++axis) out[axis] = std::clamp(p[axis], min[axis], max[axis]);
    return out;
}

double max_pairwise_distance(const Point3& a, const Point3& b, const Point3& c) {
    return std::max({distance(a, b), distance(b, c), distance(a, c)});
}

double max_pairwise_distance(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
    return std::max({distance(a, b), distance(a, c), distance(a, d), distance(b, c), distance(b, d),
                     distance(c, d)});
}

double triangle_area(const Point3& b1, const Point3& b2, const Point3& b3) {
    return 0.5 * norm(cross(b2 - b1, b3 - b1));
}

double tetrahedron_volume(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4) {
    return std::abs(dot(b2 - b1, cross(b3 - b1, b4 - b1))) / 6.0;
}

bool is_collinear(const Point3& b1, const Point3& b2, const Point3& b3) {
    const double scale = max_pairwise_distance(b1, b2, b3);
    return triangle_area(b1, b2, b3) <= tolerance::area * scale * scale;
}

bool is_coplanar(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4) {
    const double scale = max_pairwise_distance(b1, b2, b3, b4);
    return tetrahedron_volume(b1, b2, b3, b4) <= tolerance::volume * scale * scale * scale;
}

CircleCrossSection circumcircle_vector_method(const Point3& b1, const Point3& b2, const Point3& b3) {
    require_finite({b1, b2, b3});
    if (is_collinear(b1, b2, b3)) throw CollinearBeacons();

    const Vec3 b1b2 = b2 - b1;
    const Vec3 b1b3 = b3 - b1;
    const double a = norm(b1b2);
    const double b = distance(b2, b3);
    const double c = norm(b1b3);

    const Vec3 n = cross(b1b2, b1b3);
    const double area = 0.5 * norm(n);
    const double radius = a * b * c / (4.0 * area);

    // |PC| = sqrt(r^2 - (a/2)^2), evaluated as (a/2)|cot C| with C the angle at b3. The
    // square-root form cancels when b1b2 is close to a diameter.
    const double pc = a * std::abs(dot(b1 - b3, b2 - b3)) / (2.0 * norm(n));
    const Vec3 toward = normalized(cross(n, b1b2));

    const Point3 mid = midpoint(b1, b2);
    const Point3 plus = mid + pc * toward;
    const Point3 minus = mid - pc * toward;
    const double miss_plus = std::abs(distance(plus, b3) - radius);
    const double miss_minus = std::abs(distance(minus, b3) - radius);

    return {miss_plus <= miss_minus ? plus : minus, radius, normalized(n)};
}

CircleCrossSection circumcircle_bisector_method(const Point3& b1, const Point3& b2, const Point3& b3) {
    require_finite({b1, b2, b3});
    if (is_collinear(b1, b2, b3)) throw CollinearBeacons();

    const double scale = max_pairwise_distance(b1, b2, b3);
    const Vec3 n = normalized(cross(b2 - b1, b3 - b1));

    // Bisector of chord b1b3 and of chord b3b2, both lying in the circle plane.
    const Vec3 dir1 = cross(n, b3 - b1);
    const Vec3 dir2 = cross(n, b2 - b3);
    const Point3 mid1 = midpoint(b1, b3);
    const Point3 mid2 = midpoint(b3, b2);

    constexpr std::array<std::array<int, 2>, 3> kAxisPairs{{{0, 1}, {1, 2}, {2, 0}}};
    double best_denom = 0.0;
    std::array<int, 2> pair = kAxisPairs[0];
    for (const auto& candidate : kAxisPairs) {
        const auto [i, j] = candidate;
        const double denom = dir2[j] * dir1[i] - dir2[i] * dir1[j];
        if (std::abs(denom) > std::abs(best_denom)) {
            best_denom = denom;
            pair = candidate;
        }
    }
    if (std::abs(best_denom) < tolerance::denom * scale * scale) throw DegenerateBisectors();

    const auto [i, j] = pair;
    const double t1 = (dir2[i] * (mid1[j] - mid2[j]) - dir2[j] * (mid1[i] - mid2[i])) / best_denom;
    const Point3 center = mid1 + t1 * dir1;
    return {center, distance(center, b1), n};
}

SphereCenterCandidates sphere_centers_from_circle(const CircleCrossSection& circle, double comm_range) {
    require_finite({circle.center, circle.normal});
    if (!(comm_range > 0.0) || !std::isfinite(comm_range)) {
        throw std::invalid_argument("communication range must be positive and finite");
    }
    if (circle.radius > comm_range * (1.0 + tolerance::radius)) {
        throw RadiusExceedsRange(circle.radius, comm_range);
    }
    const double r = std::min(circle.radius, comm_range);
    const double offset = std::sqrt((comm_range - r) * (comm_range + r));
    return {circle.center + offset * circle.normal, circle.center - offset * circle.normal, offset};
}

Point3 solve_sphere_from_four_points(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4) {
    require_finite({b1, b2, b3, b4});
    if (is_coplanar(b1, b2, b3, b4)) throw CoplanarBeacons();

    // Differences of the sphere equations against b1, solved with b1 as origin:
    // 2 (bi - b1) . y = |bi - b1|^2 for i = 2, 3, 4.
    const Vec3 d2 = b2 - b1;
    const Vec3 d3 = b3 - b1;
    const Vec3 d4 = b4 - b1;
    const Vec3 c34 = cross(d3, d4);
    const double det = dot(d2, c34);
    const Vec3 y = (dot(d2, d2) * c34 + dot(d3, d3) * cross(d4, d2) + dot(d4, d4) * cross(d2, d3)) / (2.0 * det);
    return b1 + y;
}

std::optional<LineApproach> closest_approach(const Point3& p1, const Vec3& d1, const Point3& p2, const Vec3& d2) {
    const Vec3 w = p1 - p2;
    const double a = dot(d1, d1);
    const double b = dot(d1, d2);
    const double c = dot(d2, d2);
    const double d = dot(d1, w);
    const double e = dot(d2, w);
    const double denom = a * c - b * b;
    if (!(denom > 1e-14 * a * c)) return std::nullopt;

    const double s = (b * e - c * d) / denom;
    const double u = (a * e - b * d) / denom;
    const Point3 q1 = p1 + s * d1;
    const Point3 q2 = p2 + u * d2;
    return LineApproach{midpoint(q1, q2), distance(q1, q2)};
}

}  // namespace beaconloc

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace beaconloc {

/// A 3-D displacement or position in meters.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

/// Positions share the vector representation.
using Point3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& u, const Vec3& v);
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Point3& a, const Point3& b) { return norm(b - a); }
inline Point3 midpoint(const Point3& a, const Point3& b) { return (a + b) * 0.5; }
inline bool is_finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }
Vec3 normalized(const Vec3& v);

/// Closed axis-aligned box, used as the deployment field.
struct AxisAlignedBox {
    Point3 min;
    Point3 max;

    Vec3 extent() const { return max - min; }
    Point3 center() const { return midpoint(min, max); }
    double diagonal() const { return norm(extent()); }
    bool contains(const Point3& p, double tol = 0.0) const;
    Point3 clamp(const Point3& p) const;

    friend bool operator==(const AxisAlignedBox&, const AxisAlignedBox&) = default;
};

/// Circle through three beacons: the cross-section of the node's communication sphere.
struct CircleCrossSection {
    Point3 center;
    double radius = 0.0;
    Vec3 normal;  // unit length
};

/// The two sphere centers consistent with a cross-section and a known sphere radius.
/// They mirror each other through the circle plane.
struct SphereCenterCandidates {
    Point3 plus;
    Point3 minus;
    double offset = 0.0;
};

/// Scale-relative tolerances shared by every geometric guard.
namespace tolerance {
inline constexpr double area = 1e-9;    // times (max pairwise distance)^2
inline constexpr double volume = 1e-9;  // times (max pairwise distance)^3
inline constexpr double denom = 1e-12;  // times scale^2
inline constexpr double radius = 1e-9;  // relative slack on comm range
}  // namespace tolerance

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CollinearBeacons : public GeometryError {
public:
    CollinearBeacons() : GeometryError("beacon triple is collinear") {}
};

class DegenerateBisectors : public GeometryError {
public:
    DegenerateBisectors() : GeometryError("chord bisectors are parallel in every axis projection") {}
};

class RadiusExceedsRange : public GeometryError {
public:
    RadiusExceedsRange(double radius, double range)
        : GeometryError("circumradius " + std::to_string(radius) + " exceeds communication range " +
                        std::to_string(range)) {}
};

class CoplanarBeacons : public GeometryError {
public:
    CoplanarBeacons() : GeometryError("beacon quadruple is coplanar") {}
};

class NonFiniteInput : public GeometryError {
public:
    NonFiniteInput() : GeometryError("non-finite coordinate") {}
};

double max_pairwise_distance(const Point3& a, const Point3& b, const Point3& c);
double max_pairwise_distance(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// Half the magnitude of cross(b2 - b1, b3 - b1). Zero for degenerate input.
double triangle_area(const Point3& b1, const Point3& b2, const Point3& b3);

/// Unsigned volume of the tetrahedron b1..b4.
double tetrahedron_volume(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4);

/// True when the triangle area is at or below the scale-relative collinearity threshold.
bool is_collinear(const Point3& b1, const Point3& b2, const Point3& b3);
bool is_coplanar(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4);

/// Circumcircle by walking from the midpoint of chord b1b2 toward the center.
///
/// The offset from the chord midpoint is sqrt(r^2 - (|b1b2|/2)^2) with r = abc / 4*area,
/// taken along the in-plane direction N x b1b2. That length has no sign, so both
/// midpoint +/- offset are tried and the one equidistant from b3 is kept.
/// Throws CollinearBeacons.
CircleCrossSection circumcircle_vector_method(const Point3& b1, const Point3& b2, const Point3& b3);

/// Circumcircle as the intersection of the perpendicular bisectors of chords b1b3 and b3b2.
///
/// The two in-plane bisector lines are intersected in whichever axis-pair projection
/// has the best-conditioned 2x2 system. Throws CollinearBeacons or DegenerateBisectors.
CircleCrossSection circumcircle_bisector_method(const Point3& b1, const Point3& b2, const Point3& b3);

/// Points on the circle axis at distance comm_range from every point of the circle.
/// Throws RadiusExceedsRange when the circle does not fit on a sphere of that radius.
SphereCenterCandidates sphere_centers_from_circle(const CircleCrossSection& circle, double comm_range);

/// The point equidistant from four non-coplanar points. Throws CoplanarBeacons.
Point3 solve_sphere_from_four_points(const Point3& b1, const Point3& b2, const Point3& b3, const Point3& b4);

struct LineApproach {
    Point3 midpoint;  // midpoint of the shortest connecting segment
    double gap = 0.0; // length of that segment
};

/// Closest approach of two lines given as point + direction; nullopt when parallel.
std::optional<LineApproach> closest_approach(const Point3& p1, const Vec3& d1, const Point3& p2, const Vec3& d2);

}  // namespace beaconloc

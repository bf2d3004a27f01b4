#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace mirrorplan::geometry {

/// Point or free vector in the plane, millimetres.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) noexcept { return norm(a - b); }
constexpr Point2 midpoint(Point2 a, Point2 b) noexcept { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }
constexpr Point2 perpendicular(Point2 a) noexcept { return {-a.y, a.x}; }

inline constexpr double kSqrt2 = std::numbers::sqrt2;

constexpr double deg2rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Infinite line through `point` along `direction` (not necessarily unit length).
struct Line {
    Point2 point;
    Point2 direction;

    static Line through(Point2 a, Point2 b) noexcept { return {a, b - a}; }
    static Line at_angle(Point2 p, double radians) noexcept { return {p, {std::cos(radians), std::sin(radians)}}; }
};

/// Mirror image of `p` across `line`.
inline Point2 reflect_across_line(Point2 p, const Line& line) noexcept {
    const Point2 u = line.direction;
    const double t = dot(p - line.point, u) / dot(u, u);
    const Point2 foot = line.point + t * u;
    return 2.0 * foot - p;
}

/// Intersection of two lines; nullopt when they are parallel within `tolerance`
/// (measured on the sine of the angle between them).
inline std::optional<Point2> intersect(const Line& a, const Line& b, double tolerance = 1e-12) noexcept {
    const double denom = cross(a.direction, b.direction);
    if (std::abs(denom) <= tolerance * norm(a.direction) * norm(b.direction)) return std::nullopt;
    const double t = cross(b.point - a.point, b.direction) / denom;
    return a.point + t * a.direction;
}

/// Perpendicular distance from `p` to `line`.
inline double distance_to_line(Point2 p, const Line& line) noexcept {
    return std::abs(cross(line.direction, p - line.point)) / norm(line.direction);
}

/// Parameter of the orthogonal projection of `p` onto segment a->b (0 at a, 1 at b).
inline double segment_parameter(Point2 p, Point2 a, Point2 b) noexcept {
    const Point2 ab = b - a;
    return dot(p - a, ab) / dot(ab, ab);
}

}  // namespace mirrorplan::geometry

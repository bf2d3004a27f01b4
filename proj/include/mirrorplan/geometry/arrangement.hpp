#pragma once

// Planar model of the single-camera, three-mirror imaging arrangement.
//
// Frame: valve centre at the origin, the observed square rotated 45 degrees
// with corners V0 = (lV/sqrt2, 0), V1 = (0, lV/sqrt2), V2 = (0, -lV/sqrt2).
// Virtual camera P looks at the upper-right face along y = x, virtual camera
// Q at the lower-right face along y = -x. The real camera H sits on the y axis
// below the valve. Mirror A folds P onto H; mirrors B then C fold Q onto H
// through the intermediate virtual camera R.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mirrorplan/geometry/primitives.hpp"

namespace mirrorplan::geometry {

struct SceneConfig {
    double r = 17.0;     // observation circle radius
    double l_V = 118.0;  // outline length of the observed cuboid
    double min_A0_clearance = 3.0;
    double min_C1_x = 2.0;
    double min_angular_gap_deg = 1.0;
    double C1_clearance = 30.0;
    double C2_clearance = 10.0;
    double max_beta_deg = 17.5;

    double half_diagonal() const noexcept { return l_V / kSqrt2; }

    void validate() const {
        if (!(r > 0.0)) throw std::invalid_argument("scene: r must be positive");
        if (!(l_V > 2.0 * r)) throw std::invalid_argument("scene: l_V must exceed 2r");
        if (!(max_beta_deg > 0.0 && max_beta_deg < 90.0)) {
            throw std::invalid_argument("scene: max_beta_deg must lie in (0, 90)");
        }
    }
};

/// The four free variables. Lengths in mm, theta1 in radians.
struct DesignVector {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double theta1 = 0.0;

    friend bool operator==(const DesignVector&, const DesignVector&) = default;
};

struct Interval {
    double min = 0.0;
    double max = 0.0;

    bool contains(double v) const noexcept { return v >= min && v <= max; }
};

/// Box bounds on the design. Angles are stored in degrees, as configured.
struct DesignBounds {
    Interval a{150.0, 400.0};
    Interval b{150.0, 400.0};
    Interval c{150.0, 400.0};
    Interval theta1_deg{145.0, 180.0};

    bool contains(const DesignVector& x) const noexcept {
        return a.contains(x.a) && b.contains(x.b) && c.contains(x.c) && theta1_deg.contains(rad2deg(x.theta1));
    }

    /// Genome bounds (a, b, c, theta1 in radians).
    std::vector<double> lower() const { return {a.min, b.min, c.min, deg2rad(theta1_deg.min)}; }
    std::vector<double> upper() const { return {a.max, b.max, c.max, deg2rad(theta1_deg.max)}; }

    void validate() const {
        for (const auto* iv : {&a, &b, &c, &theta1_deg}) {
            if (!(iv->min < iv->max)) throw std::invalid_argument("bounds: min must be below max");
        }
        if (a.min <= 0.0 || b.min <= 0.0 || c.min <= 0.0) {
            throw std::invalid_argument("bounds: lengths must be positive");
        }
    }
};

enum class GeometryError {
    degenerate_angle,
    non_positive_path,
    circle_not_visible,
    reflection_inconsistent,
    no_root,
    degenerate_rh,
    parallel_lines,
};

constexpr std::string_view to_string(GeometryError e) noexcept {
    switch (e) {
        case GeometryError::degenerate_angle: return "degenerate_angle";
        case GeometryError::non_positive_path: return "non_positive_path";
        case GeometryError::circle_not_visible: return "circle_not_visible";
        case GeometryError::reflection_inconsistent: return "reflection_inconsistent";
        case GeometryError::no_root: return "no_root";
        case GeometryError::degenerate_rh: return "degenerate_rh";
        case GeometryError::parallel_lines: return "parallel_lines";
    }
    return "unknown";
}

/// The design has no valid arrangement. The optimizer discards and resamples it.
class GeometricFailure : public std::runtime_error {
public:
    GeometricFailure(GeometryError kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    GeometryError kind() const noexcept { return kind_; }

private:
    GeometryError kind_;
};

inline constexpr double kDegenerateGuard = 1e-12;
inline constexpr double kRootTolerance = 1e-9;  // mm^2, residual of |BC|^2 - c^2
inline constexpr double kScanStartDeg = 1.0;
inline constexpr double kScanEndDeg = 179.0;
inline constexpr double kScanStepDeg = 0.1;

struct SolverReport {
    double residual = 0.0;         // |BC|^2 - c^2 at the returned root
    std::size_t sign_changes = 0;  // brackets found by the scan
    std::size_t accepted_roots = 0;
    bool multiple_roots = false;
    double bc_parameter = 0.0;  // position of C along B->R, strictly inside (0, 1)
};

struct ArrangementSolution {
    DesignVector x;
    double d = 0.0;
    double theta2 = 0.0;  // radians, line angle of mirror B in (0, pi)
    double theta3 = 0.0;  // radians, line angle of mirror C in [0, pi)
    Point2 A, B, C, H, P, Q, R, V0, V1, V2;
    Point2 A0;      // where the inner mirror-A return ray passes the height of V0
    Point2 A1, A2;  // mirror A ends: inner (nearer the camera axis) and outer
    Point2 B0, B1;  // mirror B ends
    Point2 C1, C2;  // mirror C ends, x(C1) <= x(C2)
    Point2 K1, K2;  // valve edge points vertically above C1, C2
    double beta_deg = 0.0;
    std::array<double, 3> f{};
    std::array<double, 6> g{};
    bool feasible = false;
    SolverReport solver;

    /// (constraint index 1..6, amount) for every violated constraint.
    std::vector<std::pair<int, double>> violations() const {
        std::vector<std::pair<int, double>> out;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] > 0.0) out.emplace_back(static_cast<int>(i + 1), g[i]);
        }
        return out;
    }
};

/// b + c + d, the folded optical path length fixed by x_P = y_P and x_H = 0.
inline double path_length(double a, double theta1) {
    const double t = std::tan(theta1);
    const double denom = 1.0 + 2.0 * t - t * t;
    if (std::abs(denom) < kDegenerateGuard) {
        throw GeometricFailure(GeometryError::degenerate_angle, "1 + 2tan(theta1) - tan^2(theta1) vanishes");
    }
    return a * 2.0 * (t - t * t) / denom;
}

inline double derive_d(double a, double b, double c, double theta1) { return path_length(a, theta1) - b - c; }

struct BasePoints {
    Point2 V0, V1, V2, A, B, P, Q;
};

inline BasePoints base_points(const SceneConfig& cfg, const DesignVector& x, double d) {
    const double h = cfg.half_diagonal();
    const double s = (x.b + x.c + d) / kSqrt2;
    return {
        {h, 0.0},
        {0.0, h},
        {0.0, -h},
        {x.a / kSqrt2, x.a / kSqrt2},
        {x.b / kSqrt2, -x.b / kSqrt2},
        {s, s},
        {s, -s},
    };
}

/// Line of mirror A: through A at angle theta1.
inline Line mirror_a_line(double a, double theta1) { return Line::at_angle({a / kSqrt2, a / kSqrt2}, theta1); }

/// Line of mirror B: through B at angle theta2.
inline Line mirror_b_line(double b, double theta2) { return Line::at_angle({b / kSqrt2, -b / kSqrt2}, theta2); }

/// The real camera: P mirrored across mirror A. Lands on the y axis when d is consistent.
inline Point2 camera_H(double a, double theta1, Point2 P) {
    const Point2 H = reflect_across_line(P, mirror_a_line(a, theta1));
    if (std::abs(H.x) > 1e-6) {
        throw GeometricFailure(GeometryError::reflection_inconsistent,
                               "camera image off the y axis by " + std::to_string(H.x) + " mm");
    }
    return H;
}

inline Point2 reflect_Q_to_R(double b, double theta2, Point2 Q) { return reflect_across_line(Q, mirror_b_line(b, theta2)); }

/// tan(theta3) making mirror C perpendicular to RH.
inline double mirror_c_slope(Point2 R, Point2 H) {
    if (std::abs(R.y - H.y) < kDegenerateGuard) {
        throw GeometricFailure(GeometryError::degenerate_rh, "R and H at equal height");
    }
    return -(R.x - H.x) / (R.y - H.y);
}

/// Mirror C: the line of slope tan(theta3) through the midpoint of RH.
inline Line mirror_c_line(Point2 R, Point2 H, double tan_theta3) { return {midpoint(R, H), {1.0, tan_theta3}}; }

/// Intersection of mirror C with line BR.
inline Point2 point_C(Point2 R, Point2 H, double tan_theta3, Point2 B) {
    const auto C = intersect(mirror_c_line(R, H, tan_theta3), Line::through(B, R));
    if (!C) throw GeometricFailure(GeometryError::parallel_lines, "mirror C parallel to BR");
    return *C;
}

struct ThetaSolution {
    double theta2 = 0.0;
    double theta3 = 0.0;
    Point2 R;
    Point2 C;
    SolverReport report;
};

namespace detail {

struct ResidualSample {
    bool valid = false;
    double value = 0.0;
    Point2 R, C;
    double tan_theta3 = 0.0;
};

inline ResidualSample residual_at(double theta2, double b, double c, Point2 B, Point2 Q, Point2 H) {
    ResidualSample s;
    s.R = reflect_Q_to_R(b, theta2, Q);
    if (std::abs(s.R.y - H.y) < kDegenerateGuard) return s;
    s.tan_theta3 = -(s.R.x - H.x) / (s.R.y - H.y);
    const auto C = intersect(mirror_c_line(s.R, H, s.tan_theta3), Line::through(B, s.R));
    if (!C) return s;
    s.C = *C;
    // |BC|^2 - c^2, written as x_C(x_C - 2x_B) + y_C(y_C - 2y_B) + b^2 - c^2.
    s.value = s.C.x * (s.C.x - 2.0 * B.x) + s.C.y * (s.C.y - 2.0 * B.y) + b * b - c * c;
    s.valid = std::isfinite(s.value);
    return s;
}

}  // namespace detail

/**
 * Solve for the mirror B and C angles. Mirror C is the perpendicular bisector
 * of RH, which eliminates theta3; theta2 is then the root of |BC| = c with C
 * on line BR. The scan brackets sign changes on a 0.1 degree grid, bisection
 * refines each, and only roots with C strictly inside segment BR and x_C > 0
 * are accepted. The smallest accepted theta2 wins.
 */
inline ThetaSolution solve_theta23(const DesignVector& x, const BasePoints& base, Point2 H) {
    const double b = x.b;
    const double c = x.c;
    const auto n = static_cast<std::size_t>(std::lround((kScanEndDeg - kScanStartDeg) / kScanStepDeg));
    std::optional<ThetaSolution> best;
    std::size_t sign_changes = 0;
    std::size_t accepted = 0;
    bool saw_degenerate = false;

    detail::ResidualSample prev;
    double prev_theta = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double theta2 = deg2rad(kScanStartDeg + static_cast<double>(i) * kScanStepDeg);
        const auto cur = detail::residual_at(theta2, b, c, base.B, base.Q, H);
        if (!cur.valid) saw_degenerate = true;
        if (cur.valid && prev.valid && ((prev.value > 0.0) != (cur.value > 0.0))) {
            ++sign_changes;
            double lo = prev_theta, hi = theta2;
            double f_lo = prev.value;
            detail::ResidualSample at = cur;
            double theta = hi;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const auto s = detail::residual_at(mid, b, c, base.B, base.Q, H);
                if (!s.valid) break;
                if (std::abs(s.value) < std::abs(at.value)) {
                    at = s;
                    theta = mid;
                }
                if (std::abs(s.value) <= kRootTolerance) break;
                if ((s.value > 0.0) == (f_lo > 0.0)) {
                    lo = mid;
                    f_lo = s.value;
                } else {
                    hi = mid;
                }
            }
            if (std::abs(prev.value) < std::abs(at.value)) {
                at = prev;
                theta = prev_theta;
            }
            // A residual that will not shrink marks a discontinuity, not a root.
            const double u = segment_parameter(at.C, base.B, at.R);
            if (std::abs(at.value) <= 1e-6 && u > 0.0 && u < 1.0 && at.C.x > 0.0) {
                ++accepted;
                if (!best) {
                    ThetaSolution sol;
                    sol.theta2 = theta;
                    double theta3 = std::atan(at.tan_theta3);
                    if (theta3 < 0.0) theta3 += std::numbers::pi;
                    sol.theta3 = theta3;
                    sol.R = at.R;
                    sol.C = at.C;
                    sol.report.residual = at.value;
                    sol.report.bc_parameter = u;
                    best = sol;
                }
            }
        }
        prev = cur;
        prev_theta = theta2;
    }
    if (!best) {
        if (sign_changes == 0 && saw_degenerate) {
            throw GeometricFailure(GeometryError::degenerate_rh, "no usable theta2 samples");
        }
        throw GeometricFailure(GeometryError::no_root,
                               "no theta2 with C inside segment BR (" + std::to_string(sign_changes) + " brackets)");
    }
    best->report.sign_changes = sign_changes;
    best->report.accepted_roots = accepted;
    best->report.multiple_roots = accepted > 1;
    return *best;
}

/// The two rays from `eye` tangent to the observation circle, as direction vectors.
inline std::array<Point2, 2> tangent_rays(Point2 eye, double r) {
    const double dist = norm(eye);
    if (!(dist > r)) throw GeometricFailure(GeometryError::circle_not_visible, "virtual camera inside the circle");
    const double base = std::atan2(-eye.y, -eye.x);
    const double half = std::asin(r / dist);
    return {Point2{std::cos(base - half), std::sin(base - half)}, Point2{std::cos(base + half), std::sin(base + half)}};
}

struct MirrorSegments {
    Point2 A0, A1, A2, B0, B1, C1, C2;
};

namespace detail {

inline Point2 must_intersect(const Line& a, const Line& b, const char* what) {
    const auto p = intersect(a, b);
    if (!p) throw GeometricFailure(GeometryError::parallel_lines, what);
    return *p;
}

inline double off_axis_deg(Point2 H, Point2 e) noexcept { return rad2deg(std::atan2(e.x - H.x, e.y - H.y)); }

}  // namespace detail

/**
 * Mirror extents. Each virtual camera's beam is bounded by its two rays
 * tangent to the observation circle; mirror A and B ends are where those rays
 * meet the mirror lines. Beam-B edges reflect towards R and end on mirror C.
 * A0 is the point where the return ray from the inner end of mirror A to the
 * camera crosses the height of V0; its clearance from V0 keeps that ray clear
 * of the valve.
 */
inline MirrorSegments mirror_segments(const SceneConfig& cfg, const DesignVector& x, double theta2, Point2 P,
                                      Point2 Q, Point2 R, Point2 H, const Line& mirror_c) {
    MirrorSegments s;
    const Line la = mirror_a_line(x.a, x.theta1);
    const auto rays_p = tangent_rays(P, cfg.r);
    Point2 ea = detail::must_intersect({P, rays_p[0]}, la, "beam P parallel to mirror A");
    Point2 eb = detail::must_intersect({P, rays_p[1]}, la, "beam P parallel to mirror A");
    if (std::abs(detail::off_axis_deg(H, eb)) < std::abs(detail::off_axis_deg(H, ea))) std::swap(ea, eb);
    s.A1 = ea;
    s.A2 = eb;
    const Point2 V0{cfg.half_diagonal(), 0.0};
    s.A0 = detail::must_intersect(Line::through(H, s.A1), {V0, {1.0, 0.0}}, "mirror A return ray is horizontal");

    const Line lb = mirror_b_line(x.b, theta2);
    const auto rays_q = tangent_rays(Q, cfg.r);
    Point2 b0 = detail::must_intersect({Q, rays_q[0]}, lb, "beam Q parallel to mirror B");
    Point2 b1 = detail::must_intersect({Q, rays_q[1]}, lb, "beam Q parallel to mirror B");
    if (b1.y > b0.y) std::swap(b0, b1);
    s.B0 = b0;
    s.B1 = b1;

    Point2 c0 = detail::must_intersect(Line::through(R, s.B0), mirror_c, "beam edge parallel to mirror C");
    Point2 c1 = detail::must_intersect(Line::through(R, s.B1), mirror_c, "beam edge parallel to mirror C");
    if (c1.x < c0.x) std::swap(c0, c1);
    s.C1 = c0;
    s.C2 = c1;
    return s;
}

/// Points of the lower-right valve edge (V0 to V2) vertically above C1 and C2.
inline std::pair<Point2, Point2> clearance_K(const SceneConfig& cfg, Point2 C1, Point2 C2) {
    const double h = cfg.half_diagonal();
    auto project = [h](Point2 c) {
        const double x = std::clamp(c.x, 0.0, h);
        return Point2{x, x - h};
    };
    return {project(C1), project(C2)};
}

/// Largest angle, in degrees, between the +y axis and a ray from H to one of `endpoints`.
inline double view_angle_beta(Point2 H, std::initializer_list<Point2> endpoints) {
    double beta = 0.0;
    for (Point2 e : endpoints) beta = std::max(beta, std::abs(detail::off_axis_deg(H, e)));
    return beta;
}

/// (f1, f2, f3) = (b + c + d, x_B, y_A - y_H).
inline std::array<double, 3> objectives(const ArrangementSolution& s) {
    return {s.x.b + s.x.c + s.d, s.B.x, s.A.y - s.H.y};
}

inline std::array<double, 6> constraints(const SceneConfig& cfg, const ArrangementSolution& s) {
    auto ray_angle_deg = [&](Point2 e) { return rad2deg(std::atan2(e.y - s.H.y, e.x - s.H.x)); };
    return {
        ray_angle_deg(s.V0) - ray_angle_deg(s.C2) + cfg.min_angular_gap_deg,
        s.V0.x - s.A0.x + cfg.min_A0_clearance,
        cfg.min_C1_x - s.C1.x,
        s.C1.y - s.K1.y + cfg.C1_clearance,
        s.C2.y - s.K2.y + cfg.C2_clearance,
        s.beta_deg - cfg.max_beta_deg,
    };
}

/// Full arrangement for one design. Throws GeometricFailure when none exists.
inline ArrangementSolution evaluate_design(const SceneConfig& cfg, const DesignVector& x) {
    ArrangementSolution s;
    s.x = x;
    s.d = derive_d(x.a, x.b, x.c, x.theta1);
    if (!(s.d > 0.0)) {
        throw GeometricFailure(GeometryError::non_positive_path,
                               "b + c + d = " + std::to_string(s.d + x.b + x.c) + " mm leaves no room for d");
    }
    if (!(s.d + x.b + x.c > x.a)) {
        throw GeometricFailure(GeometryError::non_positive_path, "virtual camera P does not lie beyond mirror A");
    }
    const BasePoints base = base_points(cfg, x, s.d);
    s.V0 = base.V0;
    s.V1 = base.V1;
    s.V2 = base.V2;
    s.A = base.A;
    s.B = base.B;
    s.P = base.P;
    s.Q = base.Q;
    s.H = camera_H(x.a, x.theta1, s.P);

    const ThetaSolution th = solve_theta23(x, base, s.H);
    s.theta2 = th.theta2;
    s.theta3 = th.theta3;
    s.R = th.R;
    s.C = th.C;
    s.solver = th.report;

    const Line mirror_c = mirror_c_line(s.R, s.H, mirror_c_slope(s.R, s.H));
    const MirrorSegments seg = mirror_segments(cfg, x, s.theta2, s.P, s.Q, s.R, s.H, mirror_c);
    s.A0 = seg.A0;
    s.A1 = seg.A1;
    s.A2 = seg.A2;
    s.B0 = seg.B0;
    s.B1 = seg.B1;
    s.C1 = seg.C1;
    s.C2 = seg.C2;
    std::tie(s.K1, s.K2) = clearance_K(cfg, s.C1, s.C2);
    s.beta_deg = view_angle_beta(s.H, {s.A1, s.A2, s.C1, s.C2});
    s.f = objectives(s);
    s.g = constraints(cfg, s);
    s.feasible = std::all_of(s.g.begin(), s.g.end(), [](double v) { return v <= 0.0; });
    return s;
}

}  // namespace mirrorplan::geometry

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirrorplan/geometry/primitives.hpp"

namespace mirrorplan::analysis {

using geometry::Point2;

class TooFewPoints : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Values on a regular grid of cell centres. values[iy * xs.size() + ix].
struct Grid {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;
    double bandwidth_x = 0.0;  // KDE only
    double bandwidth_y = 0.0;

    double at(std::size_t ix, std::size_t iy) const { return values[iy * xs.size() + ix]; }
    double cell_width() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
    double cell_height() const { return ys.size() > 1 ? ys[1] - ys[0] : 0.0; }

    /// (ix, iy) of the largest value.
    std::pair<std::size_t, std::size_t> argmax() const {
        const auto it = std::max_element(values.begin(), values.end());
        const auto k = static_cast<std::size_t>(it - values.begin());
        return {k % xs.size(), k / xs.size()};
    }

    std::pair<std::size_t, std::size_t> argmin() const {
        const auto it = std::min_element(values.begin(), values.end());
        const auto k = static_cast<std::size_t>(it - values.begin());
        return {k % xs.size(), k / xs.size()};
    }
};

namespace detail {

inline double sample_std(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Cell-centred axis over [lo, hi] padded by `padding` of the extent on both sides.
inline std::vector<double> padded_axis(double lo, double hi, std::size_t n, double padding) {
    double extent = hi - lo;
    if (extent <= 0.0) extent = 1.0;
    const double a = lo - padding * extent;
    const double b = hi + padding * extent;
    const double step = (b - a) / static_cast<double>(n);
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) axis[i] = a + (static_cast<double>(i) + 0.5) * step;
    return axis;
}

inline Grid empty_grid(std::span<const Point2> points, std::size_t grid_size, double padding) {
    auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                            [](Point2 p, Point2 q) { return p.x < q.x; });
    auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                            [](Point2 p, Point2 q) { return p.y < q.y; });
    Grid g;
    g.xs = padded_axis(xmin->x, xmax->x, grid_size, padding);
    g.ys = padded_axis(ymin->y, ymax->y, grid_size, padding);
    g.values.assign(grid_size * grid_size, 0.0);
    return g;
}

}  // namespace detail

/// Silverman's rule of thumb for one axis: 1.06 * sigma * n^(-1/5).
inline double silverman_bandwidth(std::span<const double> v) {
    return 1.06 * detail::sample_std(v) * std::pow(static_cast<double>(v.size()), -0.2);
}

/**
 * Product-Gaussian kernel density of the points, evaluated at the cell centres
 * of a grid_size x grid_size grid over their bounding box padded by 5% per side.
 * Per-axis bandwidths follow Silverman's rule.
 */
inline Grid kde_point_C(std::span<const Point2> points, std::size_t grid_size = 200, double padding = 0.05) {
    if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
    if (points.size() < 2) throw TooFewPoints("kernel density needs at least two points");
    std::vector<double> xs, ys;
    for (Point2 p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const double hx = silverman_bandwidth(xs);
    const double hy = silverman_bandwidth(ys);
    if (!(hx > 1e-9) || !(hy > 1e-9)) {
        throw TooFewPoints("points do not spread along both axes; kernel bandwidth would vanish");
    }

    Grid g = detail::empty_grid(points, grid_size, padding);
    g.bandwidth_x = hx;
    g.bandwidth_y = hy;
    const double norm = 1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(points.size()));
    // The kernel separates, so precompute per-axis factors.
    std::vector<double> kx(grid_size * points.size()), ky(grid_size * points.size());
    for (std::size_t i = 0; i < grid_size; ++i) {
        for (std::size_t k = 0; k < points.size(); ++k) {
            const double u = (g.xs[i] - points[k].x) / hx;
            const double v = (g.ys[i] - points[k].y) / hy;
            kx[i * points.size() + k] = std::exp(-0.5 * u * u);
            ky[i * points.size() + k] = std::exp(-0.5 * v * v);
        }
    }
    for (std::size_t iy = 0; iy < grid_size; ++iy) {
        for (std::size_t ix = 0; ix < grid_size; ++ix) {
            double sum = 0.0;
            for (std::size_t k = 0; k < points.size(); ++k) {
                sum += kx[ix * points.size() + k] * ky[iy * points.size() + k];
            }
            g.values[iy * grid_size + ix] = sum * norm;
        }
    }
    return g;
}

inline constexpr double kNodeSnap = 1e-9;

/// Inverse-distance-weighted (power 2) value at `q`. Exact at sample points.
inline double idw_at(Point2 q, std::span<const Point2> points, std::span<const double> values) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point2 d = q - points[k];
        const double d2 = dot(d, d);
        if (d2 <= kNodeSnap * kNodeSnap) return values[k];
        num += values[k] / d2;
        den += 1.0 / d2;
    }
    return num / den;
}

/// IDW interpolation of per-point values onto the padded grid.
inline Grid objective_contours(std::span<const Point2> points, std::span<const double> values,
                               std::size_t grid_size = 200, double padding = 0.05) {
    if (points.size() != values.size()) throw std::invalid_argument("one value per point is required");
    if (points.size() < 4) throw TooFewPoints("contours need at least four points");
    if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
    Grid g = detail::empty_grid(points, grid_size, padding);
    for (std::size_t iy = 0; iy < grid_size; ++iy) {
        for (std::size_t ix = 0; ix < grid_size; ++ix) {
            g.values[iy * grid_size + ix] = idw_at({g.xs[ix], g.ys[iy]}, points, values);
        }
    }
    return g;
}

}  // namespace mirrorplan::analysis

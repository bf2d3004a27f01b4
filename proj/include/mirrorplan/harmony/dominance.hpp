#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mirrorplan/harmony/errors.hpp"

namespace mirrorplan::hs {

namespace detail {

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw LengthMismatch(std::string(what) + ": lengths " + std::to_string(a) + " and " +
                             std::to_string(b) + " differ");
    }
}

// a <= b componentwise with at least one strict inequality.
inline bool pareto_less(std::span<const double> a, std::span<const double> b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

}  // namespace detail

/// True when objective vector `a` Pareto-dominates `b` (minimization).
inline bool objective_dominates(std::span<const double> a, std::span<const double> b) {
    detail::require_same_length(a.size(), b.size(), "objective_dominates");
    return detail::pareto_less(a, b);
}

/**
 * Dominance between constraint vectors of two infeasible members: `ga`
 * dominates `gb` if none of its constraint values is larger and at least one
 * is smaller. Raw values are compared, including the satisfied (negative) ones.
 */
inline bool constraint_dominates(std::span<const double> ga, std::span<const double> gb) {
    detail::require_same_length(ga.size(), gb.size(), "constraint_dominates");
    return detail::pareto_less(ga, gb);
}

/// Sum of positive constraint values.
inline double total_violation(std::span<const double> g) {
    double sum = 0.0;
    for (double v : g) sum += std::max(0.0, v);
    return sum;
}

/// Front index (0 = non-dominated) of every point, by repeated peeling.
inline std::vector<std::size_t> nondominated_front_indices(const std::vector<std::vector<double>>& points) {
    const std::size_t n = points.size();
    std::vector<std::size_t> dominated_by(n, 0);
    std::vector<std::vector<std::size_t>> dominates(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (objective_dominates(points[i], points[j])) {
                dominates[i].push_back(j);
                ++dominated_by[j];
            } else if (objective_dominates(points[j], points[i])) {
                dominates[j].push_back(i);
                ++dominated_by[i];
            }
        }
    }
    std::vector<std::size_t> front(n, 0);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated_by[i] == 0) current.push_back(i);
    }
    std::size_t level = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            front[i] = level;
            for (std::size_t j : dominates[i]) {
                if (--dominated_by[j] == 0) next.push_back(j);
            }
        }
        current = std::move(next);
        ++level;
    }
    return front;
}

/// NSGA-II crowding distance; per-objective extremes get +infinity.
inline std::vector<double> crowding_distances(const std::vector<std::vector<double>>& points) {
    const std::size_t n = points.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0) return distance;
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), std::numeric_limits<double>::infinity());
        return distance;
    }
    const std::size_t m = points.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return points[a][k] < points[b][k]; });
        const double lo = points[order.front()][k];
        const double hi = points[order.back()][k];
        distance[order.front()] = std::numeric_limits<double>::infinity();
        distance[order.back()] = std::numeric_limits<double>::infinity();
        if (hi - lo <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            distance[order[i]] += (points[order[i + 1]][k] - points[order[i - 1]][k]) / (hi - lo);
        }
    }
    return distance;
}

}  // namespace mirrorplan::hs

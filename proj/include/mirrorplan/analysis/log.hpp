#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mirrorplan/analysis/density.hpp"
#include "mirrorplan/geometry/mirror_problem.hpp"
#include "mirrorplan/harmony/engine.hpp"

namespace mirrorplan::analysis {

struct LogRow {
    std::size_t iteration = 0;
    geometry::DesignVector x;
    Point2 C;
    std::array<double, 3> f{};
    bool feasible = false;
};

/// Every recorded evaluation of a mirror run, in evaluation order.
struct SolutionLog {
    std::vector<LogRow> rows;

    std::vector<Point2> points_C() const {
        std::vector<Point2> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.C);
        return out;
    }

    std::vector<double> objective(std::size_t k) const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.f.at(k));
        return out;
    }
};

/// Expects members produced by MirrorEvaluator (aux holds C).
inline SolutionLog solution_log(const hs::OptimizationRun& run) {
    SolutionLog log;
    log.rows.reserve(run.evaluations.size());
    for (const auto& e : run.evaluations) {
        const auto& m = e.member;
        log.rows.push_back({e.iteration, geometry::design_from_genome(m.x), {m.aux.at(0), m.aux.at(1)},
                            {m.f.at(0), m.f.at(1), m.f.at(2)}, m.feasible});
    }
    return log;
}

inline Grid kde_point_C(const SolutionLog& log, std::size_t grid_size = 200) {
    const auto pts = log.points_C();
    return kde_point_C(std::span<const Point2>(pts), grid_size);
}

inline Grid objective_contours(const SolutionLog& log, std::size_t objective_index, std::size_t grid_size = 200) {
    const auto pts = log.points_C();
    const auto vals = log.objective(objective_index);
    return objective_contours(std::span<const Point2>(pts), std::span<const double>(vals), grid_size);
}

struct ConvergenceRow {
    std::size_t iteration = 0;
    std::vector<double> best;  // componentwise minima over the archive, NaN while it is empty
    std::vector<double> mean;  // memory mean per objective
    std::size_t archive_size = 0;
    std::size_t feasible_members = 0;
    std::size_t replacements = 0;
};

inline std::vector<ConvergenceRow> convergence_trace(const hs::OptimizationRun& run) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(run.traces.size());
    for (const auto& t : run.traces) {
        rows.push_back({t.iteration, t.best_objectives, t.mean_objectives, t.archive_size, t.feasible_members,
                        t.replacements});
    }
    return rows;
}

}  // namespace mirrorplan::analysis

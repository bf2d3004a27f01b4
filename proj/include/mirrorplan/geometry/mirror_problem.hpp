#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mirrorplan/geometry/arrangement.hpp"
#include "mirrorplan/harmony/problem.hpp"

namespace mirrorplan::geometry {

inline DesignVector design_from_genome(std::span<const double> x) {
    if (x.size() != 4) throw std::invalid_argument("mirror genome has four entries");
    return {x[0], x[1], x[2], x[3]};
}

inline std::vector<double> genome_from_design(const DesignVector& x) { return {x.a, x.b, x.c, x.theta1}; }

/// Evaluator for the harmony search: genome (a, b, c, theta1 rad), three
/// objectives, six constraints, aux = (x_C, y_C). Geometric failures map to nullopt.
struct MirrorEvaluator {
    SceneConfig scene;

    std::optional<hs::Evaluation> operator()(std::span<const double> genome) const {
        try {
            const ArrangementSolution s = evaluate_design(scene, design_from_genome(genome));
            return hs::Evaluation{{s.f.begin(), s.f.end()}, {s.g.begin(), s.g.end()}, {s.C.x, s.C.y}};
        } catch (const GeometricFailure&) {
            return std::nullopt;
        }
    }
};

using MirrorProblem = hs::ProblemSpec<MirrorEvaluator>;

/// Objectives are lengths in mm; all are normalized by the largest length bound.
inline MirrorProblem make_mirror_problem(const SceneConfig& scene, const DesignBounds& bounds) {
    scene.validate();
    bounds.validate();
    MirrorProblem spec = hs::make_problem(bounds.lower(), bounds.upper(), 3, 6, MirrorEvaluator{scene});
    const double scale = std::max({bounds.a.max, bounds.b.max, bounds.c.max});
    spec.objective_scales.assign(3, scale);
    return spec;
}

}  // namespace mirrorplan::geometry

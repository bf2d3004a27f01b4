#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mirrorplan::hs {

/// Objective and constraint values of one design. `aux` carries
/// problem-specific extras that are recorded but never optimized.
struct Evaluation {
    std::vector<double> objectives;
    std::vector<double> constraints;
    std::vector<double> aux;
};

/// An evaluator maps a design vector to an Evaluation, or to nullopt when the
/// design cannot be evaluated at all (a geometric failure, say). It must be pure.
template <class F>
concept Evaluator = std::copy_constructible<F> && requires(const F& f, std::span<const double> x) {
    { f(x) } -> std::convertible_to<std::optional<Evaluation>>;
};

/// Box-bounded constrained multi-objective problem: minimize f(x) subject to g(x) <= 0.
template <Evaluator Eval>
struct ProblemSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t objective_count = 1;
    std::size_t constraint_count = 0;
    /// |h(x)| <= tolerance for equality constraints folded into g. Carried, not used.
    double equality_tolerance = 0.0;
    /// Per-objective divisors for the equal-weight normalized sum. Empty means all 1.
    std::vector<double> objective_scales;
    Eval evaluate;

    std::size_t dimension() const noexcept { return lower.size(); }

    double scale(std::size_t k) const noexcept {
        return objective_scales.empty() ? 1.0 : objective_scales[k];
    }

    void validate() const {
        if (lower.empty()) throw std::invalid_argument("problem dimension must be positive");
        if (lower.size() != upper.size()) throw std::invalid_argument("bound vectors differ in length");
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (!(lower[j] < upper[j])) {
                throw std::invalid_argument("lower bound must be below upper bound in dimension " +
                                            std::to_string(j));
            }
        }
        if (objective_count == 0) throw std::invalid_argument("at least one objective is required");
        if (equality_tolerance < 0.0) throw std::invalid_argument("equality tolerance must be >= 0");
        if (!objective_scales.empty()) {
            if (objective_scales.size() != objective_count) {
                throw std::invalid_argument("objective_scales must have one entry per objective");
            }
            for (double s : objective_scales) {
                if (!(s > 0.0)) throw std::invalid_argument("objective scales must be positive");
            }
        }
    }
};

template <Evaluator Eval>
ProblemSpec<Eval> make_problem(std::vector<double> lower, std::vector<double> upper, std::size_t objective_count,
                               std::size_t constraint_count, Eval evaluate) {
    ProblemSpec<Eval> spec{std::move(lower), std::move(upper), objective_count, constraint_count, 0.0, {},
                           std::move(evaluate)};
    return spec;
}

/// Harmony search parameters. Defaults reproduce the mirror case study.
struct HSParams {
    std::size_t hms = 50;
    double hmcr = 0.75;
    double par = 0.4;
    double bandwidth_fraction = 0.05;
    /// When > 0 the bandwidth decays geometrically to this fraction over the run.
    double bandwidth_final_fraction = 0.0;
    std::size_t iterations = 100;
    std::size_t batch_size = 20;
    std::size_t archive_capacity = 10;
    double diversity_delta = 1e-6;
    std::uint64_t seed = 1;
    /// Penalty weights; consumed by the penalty baseline only.
    std::vector<double> penalty_weights;
    /// Redraw cap per memory slot at initialization and per candidate on evaluation failure.
    std::size_t max_redraws = 100;

    void validate() const {
        if (hms < 2) throw std::invalid_argument("hms must be at least 2");
        if (!(hmcr >= 0.0 && hmcr <= 1.0)) throw std::invalid_argument("hmcr must lie in [0, 1]");
        if (!(par >= 0.0 && par <= 1.0)) throw std::invalid_argument("par must lie in [0, 1]");
        if (!(bandwidth_fraction > 0.0)) throw std::invalid_argument("bandwidth_fraction must be positive");
        if (bandwidth_final_fraction < 0.0 || bandwidth_final_fraction > bandwidth_fraction) {
            throw std::invalid_argument("bandwidth_final_fraction must lie in [0, bandwidth_fraction]");
        }
        if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
        if (archive_capacity == 0) throw std::invalid_argument("archive_capacity must be positive");
        if (!(diversity_delta >= 0.0)) throw std::invalid_argument("diversity_delta must be >= 0");
        if (max_redraws == 0) throw std::invalid_argument("max_redraws must be positive");
    }
};

/// An evaluated design. `id` is the evaluation sequence number within a run.
struct Member {
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> g;
    std::vector<double> aux;
    bool feasible = false;
    std::uint64_t id = 0;

    static Member from(std::vector<double> x, Evaluation e, std::uint64_t id = 0) {
        Member m;
        m.x = std::move(x);
        m.f = std::move(e.objectives);
        m.g = std::move(e.constraints);
        m.aux = std::move(e.aux);
        m.feasible = true;
        for (double v : m.g) {
            if (!(v <= 0.0)) m.feasible = false;
        }
        m.id = id;
        return m;
    }
};

}  // namespace mirrorplan::hs

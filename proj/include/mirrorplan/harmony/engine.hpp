#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mirrorplan/harmony/archive.hpp"
#include "mirrorplan/harmony/errors.hpp"
#include "mirrorplan/harmony/memory.hpp"
#include "mirrorplan/harmony/problem.hpp"

namespace mirrorplan::hs {

using Rng = std::mt19937_64;

namespace detail {

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::vector<double> uniform_design(Rng& rng, std::span<const double> lower, std::span<const double> upper) {
    std::vector<double> x(lower.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = uniform(rng, lower[j], upper[j]);
    return x;
}

}  // namespace detail

/// Pitch bandwidth as a fraction of each dimension's range, `progress` in [0, 1]
/// being the elapsed share of the iteration budget. Fixed unless a final
/// fraction is configured, in which case it decays geometrically towards it.
inline double bandwidth_fraction_at(const HSParams& params, double progress) noexcept {
    if (params.bandwidth_final_fraction <= 0.0) return params.bandwidth_fraction;
    return params.bandwidth_fraction *
           std::pow(params.bandwidth_final_fraction / params.bandwidth_fraction, std::clamp(progress, 0.0, 1.0));
}

/// Fill a memory with `hms` uniformly drawn, evaluable, mutually distinct members.
/// `next_id` numbers the evaluations and is advanced for every stored member.
template <class Eval>
HarmonyMemory initialize_memory(const ProblemSpec<Eval>& spec, const HSParams& params, Rng& rng,
                                std::uint64_t* next_id = nullptr) {
    spec.validate();
    params.validate();
    HarmonyMemory hm;
    hm.members.reserve(params.hms);
    std::uint64_t local_id = 0;
    std::uint64_t& id = next_id ? *next_id : local_id;
    for (std::size_t slot = 0; slot < params.hms; ++slot) {
        bool filled = false;
        for (std::size_t attempt = 0; attempt < params.max_redraws && !filled; ++attempt) {
            auto x = detail::uniform_design(rng, spec.lower, spec.upper);
            if (!hm.empty()) {
                const double nearest = min_member_distance(x, hm, spec.lower, spec.upper);
                if (nearest < params.diversity_delta || nearest == 0.0) continue;
            }
            auto evaluation = spec.evaluate(std::span<const double>(x));
            if (!evaluation) continue;
            hm.members.push_back(Member::from(std::move(x), std::move(*evaluation), id++));
            filled = true;
        }
        if (!filled) {
            throw InitializationExhausted("could not fill harmony memory slot " + std::to_string(slot) + " in " +
                                          std::to_string(params.max_redraws) + " draws");
        }
    }
    return hm;
}

/// One new design: per dimension, memory consideration with optional pitch
/// adjustment (probabilities hmcr and par), otherwise a uniform draw.
template <class Eval>
std::vector<double> improvise_candidate(const HarmonyMemory& hm, const ProblemSpec<Eval>& spec,
                                        const HSParams& params, Rng& rng, double progress = 0.0) {
    if (hm.empty()) throw std::invalid_argument("improvise_candidate: empty memory");
    const std::size_t n = spec.dimension();
    std::vector<double> x(n);
    std::uniform_int_distribution<std::size_t> pick(0, hm.size() - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = spec.lower[j];
        const double hi = spec.upper[j];
        if (detail::unit(rng) < params.hmcr) {
            x[j] = hm.members[pick(rng)].x[j];
            if (detail::unit(rng) < params.par) {
                const double bandwidth = bandwidth_fraction_at(params, progress) * (hi - lo);
                const double step = detail::unit(rng) * bandwidth;
                x[j] += detail::unit(rng) < 0.5 ? -step : step;
                x[j] = std::clamp(x[j], lo, hi);
            }
        } else {
            x[j] = detail::uniform(rng, lo, hi);
        }
    }
    return x;
}

/// One row per iteration.
struct IterationTrace {
    std::size_t iteration = 0;
    /// Componentwise minima over the archive (best feasible values found so far); NaN while empty.
    std::vector<double> best_objectives;
    /// Mean of each objective over the memory.
    std::vector<double> mean_objectives;
    std::size_t archive_size = 0;
    std::size_t feasible_members = 0;
    std::size_t replacements = 0;
    /// Design and objectives of the top-ranked memory member.
    std::vector<double> lead_x;
    std::vector<double> lead_f;
    std::vector<std::uint64_t> archive_ids;
};

struct RecordedEvaluation {
    std::size_t iteration = 0;
    std::size_t slot = 0;
    std::size_t failed_attempts = 0;
    Member member;
    ReplaceOutcome outcome = ReplaceOutcome::rejected_not_better;
};

struct OptimizationRun {
    HSParams params;
    std::vector<IterationTrace> traces;
    ParetoArchive archive;
    std::optional<Member> selected;
    std::vector<RecordedEvaluation> evaluations;
    HarmonyMemory memory;
    std::size_t failed_evaluations = 0;
};

/// Archive member with the smallest normalized objective sum.
inline std::optional<Member> select_compromise(const ParetoArchive& archive, std::span<const double> scales) {
    std::optional<Member> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& m : archive.members()) {
        const double score = normalized_objective_sum(m.f, scales);
        if (score < best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

using ProgressFn = std::function<void(std::size_t iterations_done)>;

namespace detail {

inline IterationTrace make_trace(std::size_t iteration, const HarmonyMemory& hm, const ParetoArchive& archive,
                                 std::size_t objective_count, std::span<const double> scales,
                                 std::size_t replacements) {
    IterationTrace t;
    t.iteration = iteration;
    t.best_objectives.assign(objective_count, std::numeric_limits<double>::quiet_NaN());
    for (const auto& m : archive.members()) {
        for (std::size_t k = 0; k < objective_count; ++k) {
            if (std::isnan(t.best_objectives[k]) || m.f[k] < t.best_objectives[k]) t.best_objectives[k] = m.f[k];
        }
        t.archive_ids.push_back(m.id);
    }
    for (std::size_t k = 0; k < objective_count; ++k) t.mean_objectives.push_back(mean_objective(hm, k));
    t.archive_size = archive.size();
    t.feasible_members = static_cast<std::size_t>(
        std::count_if(hm.members.begin(), hm.members.end(), [](const Member& m) { return m.feasible; }));
    t.replacements = replacements;
    const auto& lead = hm.members[rank_memory(hm, scales).front()];
    t.lead_x = lead.x;
    t.lead_f = lead.f;
    return t;
}

}  // namespace detail

/**
 * Modified harmony search. Each iteration improvises `batch_size` candidates
 * (re-improvising any the evaluator rejects), then applies replace_worst and
 * the archive update in batch order. Deterministic for a given seed.
 */
template <class Eval>
OptimizationRun run_optimization(const ProblemSpec<Eval>& spec, const HSParams& params,
                                 const ProgressFn& progress = {}) {
    spec.validate();
    params.validate();
    Rng rng(params.seed);
    std::uint64_t next_id = 0;

    OptimizationRun run{params, {}, ParetoArchive(params.archive_capacity), std::nullopt, {}, {}, 0};
    run.memory = initialize_memory(spec, params, rng, &next_id);
    const auto ctx = MemoryContext::of(spec, params);
    for (const auto& m : run.memory.members) {
        if (m.feasible) run.archive.update(m);
    }

    const auto progress_of = [&](std::size_t iteration) {
        return params.iterations > 1 ? static_cast<double>(iteration) / static_cast<double>(params.iterations - 1)
                                     : 0.0;
    };
    run.traces.reserve(params.iterations);
    run.evaluations.reserve(params.iterations * params.batch_size);
    for (std::size_t iteration = 0; iteration < params.iterations; ++iteration) {
        const std::size_t first = run.evaluations.size();
        for (std::size_t slot = 0; slot < params.batch_size; ++slot) {
            std::size_t failures = 0;
            std::optional<Member> candidate;
            while (!candidate) {
                if (failures == params.max_redraws) {
                    throw EvaluationExhausted("iteration " + std::to_string(iteration) + ": " +
                                              std::to_string(failures) + " consecutive evaluation failures");
                }
                auto x = improvise_candidate(run.memory, spec, params, rng, progress_of(iteration));
                auto evaluation = spec.evaluate(std::span<const double>(x));
                if (!evaluation) {
                    ++failures;
                    continue;
                }
                candidate = Member::from(std::move(x), std::move(*evaluation), next_id++);
            }
            run.failed_evaluations += failures;
            run.evaluations.push_back({iteration, slot, failures, std::move(*candidate), {}});
        }

        std::size_t replacements = 0;
        for (std::size_t i = first; i < run.evaluations.size(); ++i) {
            auto& record = run.evaluations[i];
            record.outcome = replace_worst(run.memory, record.member, ctx);
            if (was_replaced(record.outcome)) ++replacements;
            if (record.member.feasible) run.archive.update(record.member);
        }
        run.traces.push_back(
            detail::make_trace(iteration, run.memory, run.archive, spec.objective_count, ctx.objective_scales,
                               replacements));
        if (progress) progress(iteration + 1);
    }
    run.selected = select_compromise(run.archive, spec.objective_scales);
    return run;
}

/// F = f + sum_i w_i * max(0, g_i)^2.
inline double penalty_scalarization(double f, std::span<const double> g, std::span<const double> w) {
    detail::require_same_length(g.size(), w.size(), "penalty_scalarization");
    double penalty = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double violation = std::max(0.0, g[i]);
        penalty += w[i] * violation * violation;
    }
    return f + penalty;
}

struct PenaltyRunResult {
    std::vector<double> best_x;
    double best_fitness = std::numeric_limits<double>::infinity();
    double best_objective = std::numeric_limits<double>::infinity();
    bool best_feasible = false;
    std::vector<double> fitness_trace;  // best penalized fitness after each iteration
};

/**
 * Classic single-objective harmony search on the penalized fitness of
 * objective 0. Baseline for comparisons; the Pareto-dominance path never uses it.
 */
template <class Eval>
PenaltyRunResult run_penalty_baseline(const ProblemSpec<Eval>& spec, const HSParams& params) {
    spec.validate();
    params.validate();
    std::vector<double> weights = params.penalty_weights;
    if (weights.empty()) weights.assign(spec.constraint_count, 1e3);
    Rng rng(params.seed);
    HarmonyMemory hm = initialize_memory(spec, params, rng);
    auto fitness = [&](const Member& m) { return penalty_scalarization(m.f.at(0), m.g, weights); };
    std::vector<double> scores;
    scores.reserve(hm.size());
    for (const auto& m : hm.members) scores.push_back(fitness(m));

    PenaltyRunResult result;
    for (std::size_t iteration = 0; iteration < params.iterations; ++iteration) {
        for (std::size_t slot = 0; slot < params.batch_size; ++slot) {
            for (std::size_t attempt = 0; attempt < params.max_redraws; ++attempt) {
                const double elapsed = params.iterations > 1 ? static_cast<double>(iteration) /
                                                                   static_cast<double>(params.iterations - 1)
                                                             : 0.0;
                auto x = improvise_candidate(hm, spec, params, rng, elapsed);
                auto evaluation = spec.evaluate(std::span<const double>(x));
                if (!evaluation) continue;
                Member candidate = Member::from(std::move(x), std::move(*evaluation));
                const double score = fitness(candidate);
                const auto worst = static_cast<std::size_t>(
                    std::distance(scores.begin(), std::max_element(scores.begin(), scores.end())));
                if (score < scores[worst]) {
                    hm.members[worst] = std::move(candidate);
                    scores[worst] = score;
                }
                break;
            }
        }
        result.fitness_trace.push_back(*std::min_element(scores.begin(), scores.end()));
    }
    const auto best = static_cast<std::size_t>(
        std::distance(scores.begin(), std::min_element(scores.begin(), scores.end())));
    result.best_x = hm.members[best].x;
    result.best_fitness = scores[best];
    result.best_objective = hm.members[best].f.at(0);
    result.best_feasible = hm.members[best].feasible;
    return result;
}

}  // namespace mirrorplan::hs

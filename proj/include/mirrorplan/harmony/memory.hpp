#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "mirrorplan/harmony/dominance.hpp"
#include "mirrorplan/harmony/problem.hpp"

namespace mirrorplan::hs {

struct HarmonyMemory {
    std::vector<Member> members;

    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
};

/// What the memory needs to know about the problem to rank and guard its members.
struct MemoryContext {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> objective_scales;  // empty means all 1
    double diversity_delta = 0.0;

    template <class Eval>
    static MemoryContext of(const ProblemSpec<Eval>& spec, const HSParams& params) {
        MemoryContext ctx{spec.lower, spec.upper, spec.objective_scales, params.diversity_delta};
        return ctx;
    }
};

/// Euclidean distance in bound-normalized coordinates (each axis divided by its range).
inline double normalized_distance(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> lower, std::span<const double> upper) {
    detail::require_same_length(a.size(), b.size(), "normalized_distance");
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double delta = (a[j] - b[j]) / (upper[j] - lower[j]);
        sum += delta * delta;
    }
    return std::sqrt(sum);
}

/// Smallest normalized distance from `candidate` to any member.
inline double min_member_distance(std::span<const double> candidate, const HarmonyMemory& hm,
                                  std::span<const double> lower, std::span<const double> upper) {
    if (hm.empty()) throw std::invalid_argument("min_member_distance: empty memory");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : hm.members) best = std::min(best, normalized_distance(candidate, m.x, lower, upper));
    return best;
}

/// Arithmetic mean of objective `k` over the memory.
inline double mean_objective(const HarmonyMemory& hm, std::size_t k) {
    if (hm.empty()) throw std::invalid_argument("mean_objective: empty memory");
    double sum = 0.0;
    for (const auto& m : hm.members) sum += m.f.at(k);
    return sum / static_cast<double>(hm.size());
}

/// Equal-weight sum of objectives, each divided by its scale.
inline double normalized_objective_sum(std::span<const double> f, std::span<const double> scales) {
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] / (scales.empty() ? 1.0 : scales[k]);
    return sum;
}

/// Ordering metadata of one member within its memory.
struct RankKey {
    bool feasible = false;
    std::size_t level = 0;  // front index (feasible) or domination count (infeasible)
    double tiebreak = 0.0;  // normalized objective sum (feasible) or total violation (infeasible)
};

inline bool rank_less(const RankKey& a, const RankKey& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (a.level != b.level) return a.level < b.level;
    return a.tiebreak < b.tiebreak;
}

/// Rank keys of every member. Feasible members are sorted into non-dominated
/// fronts on f; infeasible ones by how many other infeasible members
/// constraint-dominate them.
inline std::vector<RankKey> rank_keys(const HarmonyMemory& hm, std::span<const double> scales) {
    const std::size_t n = hm.size();
    std::vector<RankKey> keys(n);
    std::vector<std::size_t> feasible, infeasible;
    for (std::size_t i = 0; i < n; ++i) (hm.members[i].feasible ? feasible : infeasible).push_back(i);

    std::vector<std::vector<double>> objectives;
    objectives.reserve(feasible.size());
    for (std::size_t i : feasible) objectives.push_back(hm.members[i].f);
    const auto fronts = nondominated_front_indices(objectives);
    for (std::size_t k = 0; k < feasible.size(); ++k) {
        const auto& m = hm.members[feasible[k]];
        keys[feasible[k]] = {true, fronts[k], normalized_objective_sum(m.f, scales)};
    }

    for (std::size_t i : infeasible) {
        std::size_t count = 0;
        for (std::size_t j : infeasible) {
            if (i != j && constraint_dominates(hm.members[j].g, hm.members[i].g)) ++count;
        }
        keys[i] = {false, count, total_violation(hm.members[i].g)};
    }
    return keys;
}

/// Member indices from best to worst. Ties keep memory order.
inline std::vector<std::size_t> rank_memory(const HarmonyMemory& hm, std::span<const double> scales = {}) {
    const auto keys = rank_keys(hm, scales);
    std::vector<std::size_t> order(hm.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank_less(keys[a], keys[b]); });
    return order;
}

enum class ReplaceOutcome {
    feasible_replaces_infeasible,   // case 1
    better_feasible,                // case 2
    constraint_dominates_worst,     // case 3
    rejected_too_close,             // diversity guard
    rejected_infeasible_vs_feasible,
    rejected_not_better,
    rejected_not_dominating,
};

constexpr bool was_replaced(ReplaceOutcome o) noexcept {
    return o == ReplaceOutcome::feasible_replaces_infeasible || o == ReplaceOutcome::better_feasible ||
           o == ReplaceOutcome::constraint_dominates_worst;
}

/// Case-2 comparator between two feasible members.
inline bool feasible_better(const Member& candidate, const Member& incumbent, std::span<const double> scales) {
    if (objective_dominates(candidate.f, incumbent.f)) return true;
    if (objective_dominates(incumbent.f, candidate.f)) return false;
    return normalized_objective_sum(candidate.f, scales) < normalized_objective_sum(incumbent.f, scales);
}

/**
 * Compare `candidate` with the worst-ranked member and swap it in when one of
 * the three replacement cases holds:
 *   1. candidate feasible, worst infeasible;
 *   2. both feasible, candidate better (dominates, or incomparable with a
 *      smaller normalized objective sum);
 *   3. both infeasible, candidate constraint-dominates the worst.
 * A candidate closer than diversity_delta to any member is rejected first.
 */
inline ReplaceOutcome replace_worst(HarmonyMemory& hm, const Member& candidate, const MemoryContext& ctx) {
    if (hm.empty()) throw std::invalid_argument("replace_worst: empty memory");
    // Exact duplicates are rejected even with a zero delta.
    const double nearest = min_member_distance(candidate.x, hm, ctx.lower, ctx.upper);
    if (nearest < ctx.diversity_delta || nearest == 0.0) return ReplaceOutcome::rejected_too_close;
    const std::size_t worst = rank_memory(hm, ctx.objective_scales).back();
    Member& incumbent = hm.members[worst];

    ReplaceOutcome outcome;
    if (candidate.feasible && !incumbent.feasible) {
        outcome = ReplaceOutcome::feasible_replaces_infeasible;
    } else if (candidate.feasible) {
        outcome = feasible_better(candidate, incumbent, ctx.objective_scales) ? ReplaceOutcome::better_feasible
                                                                              : ReplaceOutcome::rejected_not_better;
    } else if (incumbent.feasible) {
        outcome = ReplaceOutcome::rejected_infeasible_vs_feasible;
    } else {
        outcome = constraint_dominates(candidate.g, incumbent.g) ? ReplaceOutcome::constraint_dominates_worst
                                                                  : ReplaceOutcome::rejected_not_dominating;
    }
    if (was_replaced(outcome)) incumbent = candidate;
    return outcome;
}

}  // namespace mirrorplan::hs

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mirrorplan/harmony/engine.hpp"

using namespace mirrorplan::hs;
using V = std::vector<double>;

namespace {

struct Sphere {
    std::optional<Evaluation> operator()(std::span<const double> x) const {
        double s = 0.0;
        for (double v : x) s += v * v;
        return Evaluation{{s}, {}, {}};
    }
};

// min sum x^2 subject to x1 >= 1.
struct ConstrainedSphere {
    std::optional<Evaluation> operator()(std::span<const double> x) const {
        double s = 0.0;
        for (double v : x) s += v * v;
        return Evaluation{{s}, {1.0 - x[0]}, {}};
    }
};

// Two objectives with a known front f2 = (1 - sqrt f1)^2 on x2 = 0, one constraint.
struct TwoObjective {
    std::optional<Evaluation> operator()(std::span<const double> x) const {
        const double f1 = x[0] * x[0];
        const double f2 = (1.0 - x[0]) * (1.0 - x[0]) + x[1] * x[1];
        return Evaluation{{f1, f2}, {x[1] - 0.8}, {}};
    }
};

// Fails on a region, to exercise resampling.
struct Holey {
    std::optional<Evaluation> operator()(std::span<const double> x) const {
        if (x[0] > 0.5) return std::nullopt;
        return Evaluation{{x[0] * x[0] + x[1] * x[1]}, {}, {}};
    }
};

auto sphere4() { return make_problem(V(4, -5.0), V(4, 5.0), 1, 0, Sphere{}); }

HSParams small(std::uint64_t seed = 1) {
    HSParams p;
    p.hms = 10;
    p.iterations = 20;
    p.batch_size = 5;
    p.seed = seed;
    return p;
}

}  // namespace

TEST(InitializeMemory, FillsWithinBounds) {
    HSParams p;
    p.seed = 42;
    Rng rng(p.seed);
    const auto spec = sphere4();
    const auto hm = initialize_memory(spec, p, rng);
    ASSERT_EQ(hm.size(), 50u);
    for (const auto& m : hm.members) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_GE(m.x[j], -5.0);
            EXPECT_LE(m.x[j], 5.0);
        }
    }
}

TEST(InitializeMemory, SameSeedBitwiseIdentical) {
    HSParams p;
    p.seed = 42;
    Rng r1(p.seed), r2(p.seed);
    const auto a = initialize_memory(sphere4(), p, r1);
    const auto b = initialize_memory(sphere4(), p, r2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.members[i].x, b.members[i].x);
        EXPECT_EQ(a.members[i].f, b.members[i].f);
    }
}

TEST(InitializeMemory, PigeonholeExhausts) {
    HSParams p;
    p.hms = 2;
    p.diversity_delta = 3.0;  // the normalized diagonal in 4 dimensions is 2
    Rng rng(1);
    EXPECT_THROW(initialize_memory(sphere4(), p, rng), InitializationExhausted);
}

TEST(InitializeMemory, RedrawsEvaluationFailures) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 1, 0, Holey{});
    HSParams p = small();
    Rng rng(3);
    const auto hm = initialize_memory(spec, p, rng);
    for (const auto& m : hm.members) EXPECT_LE(m.x[0], 0.5);
}

TEST(InitializeMemory, ExhaustsWhenNothingEvaluates) {
    struct Never {
        std::optional<Evaluation> operator()(std::span<const double>) const { return std::nullopt; }
    };
    const auto spec = make_problem(V{0}, V{1}, 1, 0, Never{});
    Rng rng(1);
    EXPECT_THROW(initialize_memory(spec, small(), rng), InitializationExhausted);
}

TEST(Improvise, FullMemoryConsiderationCopiesMemberValues) {
    HSParams p = small();
    p.hmcr = 1.0;
    p.par = 0.0;
    Rng rng(4);
    const auto spec = sphere4();
    const auto hm = initialize_memory(spec, p, rng);
    for (int t = 0; t < 200; ++t) {
        const auto x = improvise_candidate(hm, spec, p, rng);
        for (std::size_t j = 0; j < 4; ++j) {
            bool found = false;
            for (const auto& m : hm.members) found |= m.x[j] == x[j];
            EXPECT_TRUE(found);
        }
    }
}

TEST(Improvise, PitchAdjustmentStaysWithinBandwidthAndBounds) {
    HSParams p = small();
    p.hmcr = 1.0;
    p.par = 1.0;
    p.bandwidth_fraction = 0.01;
    Rng rng(5);
    const auto spec = sphere4();
    const auto hm = initialize_memory(spec, p, rng);
    for (int t = 0; t < 500; ++t) {
        const auto x = improvise_candidate(hm, spec, p, rng);
        for (std::size_t j = 0; j < 4; ++j) {
            double nearest = 1e9;
            for (const auto& m : hm.members) nearest = std::min(nearest, std::abs(m.x[j] - x[j]));
            EXPECT_LE(nearest, 0.1 + 1e-12);  // 1% of a range of 10
            EXPECT_GE(x[j], -5.0);
            EXPECT_LE(x[j], 5.0);
        }
    }
}

TEST(Improvise, NoMemoryConsiderationIsUniform) {
    HSParams p = small();
    p.hmcr = 0.0;
    Rng rng(6);
    const auto spec = sphere4();
    const auto hm = initialize_memory(spec, p, rng);
    double sum = 0.0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) sum += improvise_candidate(hm, spec, p, rng)[0];
    EXPECT_NEAR(sum / n, 0.0, 0.1);  // mean of U(-5, 5); 5 sigma is about 0.1
}

TEST(Bandwidth, FixedOrGeometricDecay) {
    HSParams p;
    p.bandwidth_fraction = 0.05;
    p.bandwidth_final_fraction = 0.0;
    EXPECT_DOUBLE_EQ(bandwidth_fraction_at(p, 0.7), 0.05);
    p.bandwidth_final_fraction = 0.0005;
    EXPECT_DOUBLE_EQ(bandwidth_fraction_at(p, 0.0), 0.05);
    EXPECT_NEAR(bandwidth_fraction_at(p, 1.0), 0.0005, 1e-15);
    EXPECT_NEAR(bandwidth_fraction_at(p, 0.5), 0.005, 1e-15);
}

TEST(HSParamsValidate, RejectsBadValues) {
    HSParams p;
    p.hms = 1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = HSParams{};
    p.hmcr = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = HSParams{};
    p.bandwidth_final_fraction = 0.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(RunOptimization, RecordsExactBudgetAndTraces) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 2, 1, TwoObjective{});
    HSParams p = small();
    std::size_t calls = 0;
    const auto run = run_optimization(spec, p, [&](std::size_t done) { EXPECT_EQ(done, ++calls); });
    EXPECT_EQ(calls, p.iterations);
    EXPECT_EQ(run.traces.size(), p.iterations);
    EXPECT_EQ(run.evaluations.size(), p.iterations * p.batch_size);
    std::set<std::uint64_t> ids;
    for (const auto& e : run.evaluations) ids.insert(e.member.id);
    EXPECT_EQ(ids.size(), run.evaluations.size());
}

TEST(RunOptimization, ResampledFailuresAreNotRecorded) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 1, 0, Holey{});
    const auto run = run_optimization(spec, small(2));
    EXPECT_EQ(run.evaluations.size(), 100u);
    EXPECT_GT(run.failed_evaluations, 0u);
    std::size_t attempts = 0;
    for (const auto& e : run.evaluations) {
        EXPECT_LE(e.member.x[0], 0.5);
        attempts += e.failed_attempts;
    }
    EXPECT_EQ(attempts, run.failed_evaluations);
}

TEST(RunOptimization, EvaluationExhaustedWhenCandidatesKeepFailing) {
    // Succeeds for the initial memory only.
    struct Budgeted {
        std::shared_ptr<int> left = std::make_shared<int>(10);
        std::optional<Evaluation> operator()(std::span<const double> x) const {
            if ((*left)-- <= 0) return std::nullopt;
            return Evaluation{{x[0]}, {}, {}};
        }
    };
    const auto spec = make_problem(V{0}, V{1}, 1, 0, Budgeted{});
    EXPECT_THROW(run_optimization(spec, small()), EvaluationExhausted);
}

TEST(RunOptimization, DeterministicForEqualSeeds) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 2, 1, TwoObjective{});
    const auto a = run_optimization(spec, small(7));
    const auto b = run_optimization(spec, small(7));
    ASSERT_EQ(a.evaluations.size(), b.evaluations.size());
    for (std::size_t i = 0; i < a.evaluations.size(); ++i) {
        EXPECT_EQ(a.evaluations[i].member.x, b.evaluations[i].member.x);
        EXPECT_EQ(a.evaluations[i].outcome, b.evaluations[i].outcome);
    }
    const auto c = run_optimization(spec, small(8));
    EXPECT_NE(a.evaluations[0].member.x, c.evaluations[0].member.x);
}

TEST(RunOptimization, ArchiveFeasibleNondominatedAndSelectedIsMinSum) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 2, 1, TwoObjective{});
    HSParams p;
    p.iterations = 50;
    const auto run = run_optimization(spec, p);
    ASSERT_FALSE(run.archive.empty());
    EXPECT_LE(run.archive.size(), p.archive_capacity);
    for (const auto& m : run.archive.members()) {
        EXPECT_TRUE(m.feasible);
        for (const auto& o : run.archive.members()) EXPECT_FALSE(objective_dominates(o.f, m.f));
    }
    ASSERT_TRUE(run.selected.has_value());
    for (const auto& m : run.archive.members()) {
        EXPECT_LE(run.selected->f[0] + run.selected->f[1], m.f[0] + m.f[1]);
    }
    // Final trace row's best values are the archive's componentwise minima.
    const auto& last = run.traces.back();
    for (std::size_t k = 0; k < 2; ++k) {
        double lo = INFINITY;
        for (const auto& m : run.archive.members()) lo = std::min(lo, m.f[k]);
        EXPECT_EQ(last.best_objectives[k], lo);
    }
}

TEST(RunOptimization, MemoryInvariantsHoldAfterRun) {
    const auto spec = make_problem(V{-1, -1}, V{1, 1}, 2, 1, TwoObjective{});
    HSParams p = small(3);
    p.diversity_delta = 0.01;
    const auto run = run_optimization(spec, p);
    ASSERT_EQ(run.memory.size(), p.hms);
    for (std::size_t i = 0; i < run.memory.size(); ++i) {
        for (std::size_t j = i + 1; j < run.memory.size(); ++j) {
            EXPECT_GE(normalized_distance(run.memory.members[i].x, run.memory.members[j].x, spec.lower, spec.upper),
                      p.diversity_delta);
        }
    }
}

TEST(RunOptimization, UnconstrainedSphereConverges) {
    const auto run = run_optimization(sphere4(), HSParams{});
    ASSERT_TRUE(run.selected.has_value());
    EXPECT_LT(run.selected->f[0], 1e-2);
}

TEST(PenaltyScalarization, QuadraticPenaltyOnViolationsOnly) {
    EXPECT_DOUBLE_EQ(penalty_scalarization(1.0, V{-2.0, 0.5, 2.0}, V{10.0, 4.0, 1.0}), 1.0 + 4.0 * 0.25 + 4.0);
    EXPECT_DOUBLE_EQ(penalty_scalarization(3.0, V{}, V{}), 3.0);
    EXPECT_THROW(penalty_scalarization(0.0, V{1.0}, V{}), LengthMismatch);
}

TEST(PenaltyBaseline, FindsFeasibleNearOptimum) {
    const auto spec = make_problem(V(4, -5.0), V(4, 5.0), 1, 1, ConstrainedSphere{});
    const auto result = run_penalty_baseline(spec, HSParams{});
    EXPECT_EQ(result.fitness_trace.size(), 100u);
    for (std::size_t i = 1; i < result.fitness_trace.size(); ++i) {
        EXPECT_LE(result.fitness_trace[i], result.fitness_trace[i - 1]);
    }
    EXPECT_LT(result.best_fitness, 1.2);
}

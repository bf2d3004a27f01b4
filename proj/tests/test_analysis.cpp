#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mirrorplan/analysis/density.hpp"
#include "mirrorplan/analysis/log.hpp"
#include "mirrorplan/geometry/mirror_problem.hpp"
#include "mirrorplan/harmony/engine.hpp"

using namespace mirrorplan;
using analysis::Grid;
using analysis::Point2;

namespace {

std::vector<Point2> gaussian_cloud(std::mt19937_64& rng, Point2 centre, double sigma, int n) {
    std::normal_distribution<double> nd(0.0, sigma);
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) pts.push_back({centre.x + nd(rng), centre.y + nd(rng)});
    return pts;
}

double grid_mass(const Grid& g) {
    double sum = 0.0;
    for (double v : g.values) sum += v;
    return sum * g.cell_width() * g.cell_height();
}

}  // namespace

TEST(Kde, RejectsTooFewOrCollinearPoints) {
    std::vector<Point2> one{{1, 2}};
    EXPECT_THROW(analysis::kde_point_C(one), analysis::TooFewPoints);
    std::vector<Point2> same_x{{1, 2}, {1, 3}, {1, 4}};
    EXPECT_THROW(analysis::kde_point_C(same_x), analysis::TooFewPoints);
}

TEST(Kde, SilvermanBandwidth) {
    std::vector<double> v{1, 2, 3, 4, 5};
    // sample sd = sqrt(2.5)
    EXPECT_NEAR(analysis::silverman_bandwidth(v), 1.06 * std::sqrt(2.5) * std::pow(5.0, -0.2), 1e-12);
}

TEST(Kde, IntegratesToAboutOne) {
    std::mt19937_64 rng(5);
    auto pts = gaussian_cloud(rng, {10, -40}, 3.0, 400);
    const Grid g = analysis::kde_point_C(pts, 120, 0.5);
    EXPECT_NEAR(grid_mass(g), 1.0, 0.05);
}

TEST(Kde, DefaultGridShape) {
    std::mt19937_64 rng(6);
    auto pts = gaussian_cloud(rng, {0, 0}, 1.0, 50);
    const Grid g = analysis::kde_point_C(pts);
    EXPECT_EQ(g.xs.size(), 200u);
    EXPECT_EQ(g.ys.size(), 200u);
    EXPECT_EQ(g.values.size(), 40000u);
    const auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x; });
    EXPECT_LT(g.xs.front(), xmin->x);
    EXPECT_GT(g.xs.back(), xmax->x);
}

TEST(Kde, HighestDensityInTheHeavierCluster) {
    std::mt19937_64 rng(7);
    auto pts = gaussian_cloud(rng, {0, 0}, 1.0, 300);
    auto other = gaussian_cloud(rng, {20, 20}, 1.0, 100);
    pts.insert(pts.end(), other.begin(), other.end());
    const Grid g = analysis::kde_point_C(pts, 100);
    const auto [ix, iy] = g.argmax();
    EXPECT_NEAR(g.xs[ix], 0.0, 1.5);
    EXPECT_NEAR(g.ys[iy], 0.0, 1.5);
    for (double v : g.values) EXPECT_GE(v, 0.0);
}

TEST(KdeProperty, TranslationEquivariant) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        auto pts = gaussian_cloud(rng, {0, 0}, 2.0, 60);
        const Point2 shift{std::uniform_real_distribution<double>(-100, 100)(rng),
                           std::uniform_real_distribution<double>(-100, 100)(rng)};
        auto moved = pts;
        for (auto& p : moved) p = p + shift;
        const Grid a = analysis::kde_point_C(pts, 40);
        const Grid b = analysis::kde_point_C(moved, 40);
        ASSERT_EQ(a.values.size(), b.values.size());
        for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-9);
        EXPECT_NEAR(b.xs[0] - a.xs[0], shift.x, 1e-9);
    }
}

TEST(Idw, ExactAtNodesAndConstantField) {
    std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.3, 0.7}};
    std::vector<double> vals{1, 2, 3, 4, 5};
    for (std::size_t k = 0; k < pts.size(); ++k) EXPECT_EQ(analysis::idw_at(pts[k], pts, vals), vals[k]);
    std::vector<double> flat(5, 7.25);
    const Grid g = analysis::objective_contours(pts, flat, 30);
    for (double v : g.values) EXPECT_NEAR(v, 7.25, 1e-12);
    std::vector<Point2> three{{0, 0}, {1, 0}, {0, 1}};
    std::vector<double> three_vals{1, 2, 3};
    EXPECT_THROW(analysis::objective_contours(three, three_vals), analysis::TooFewPoints);
}

TEST(IdwProperty, BoundedByData) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-50, 50), val(100, 900);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Point2> pts;
        std::vector<double> vals;
        for (int i = 0; i < 30; ++i) {
            pts.push_back({u(rng), u(rng)});
            vals.push_back(val(rng));
        }
        const Grid g = analysis::objective_contours(pts, vals, 60);
        const double lo = *std::min_element(vals.begin(), vals.end());
        const double hi = *std::max_element(vals.begin(), vals.end());
        for (double v : g.values) {
            EXPECT_GE(v, lo - 1e-9);
            EXPECT_LE(v, hi + 1e-9);
        }
    }
}

TEST(Idw, MinimumAtLowCentreSample) {
    std::vector<Point2> pts{{-10, -10}, {10, -10}, {-10, 10}, {10, 10}, {0, 0}};
    std::vector<double> vals{10, 10, 10, 10, 0};
    const Grid g = analysis::objective_contours(pts, vals, 41);
    const auto [ix, iy] = g.argmin();
    EXPECT_LE(std::abs(g.xs[ix]), g.cell_width());
    EXPECT_LE(std::abs(g.ys[iy]), g.cell_height());
}

TEST(SolutionLog, MirrorRunFeedsAnalysis) {
    const auto problem = geometry::make_mirror_problem({}, {});
    hs::HSParams p;
    p.iterations = 5;
    p.batch_size = 10;
    p.hms = 20;
    const auto run = hs::run_optimization(problem, p);
    const auto log = analysis::solution_log(run);
    ASSERT_EQ(log.rows.size(), 50u);
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
        const auto& row = log.rows[i];
        EXPECT_EQ(row.iteration, i / 10);
        const auto s = geometry::evaluate_design({}, row.x);
        EXPECT_EQ(s.C, row.C);
        EXPECT_EQ(s.f, row.f);
        EXPECT_EQ(s.feasible, row.feasible);
    }
    const Grid kde = analysis::kde_point_C(log, 50);
    EXPECT_EQ(kde.values.size(), 2500u);
    const Grid f1 = analysis::objective_contours(log, 0, 50);
    const auto f = log.objective(0);
    const double lo = *std::min_element(f.begin(), f.end());
    for (double v : f1.values) EXPECT_GE(v, lo - 1e-9);

    const auto trace = analysis::convergence_trace(run);
    ASSERT_EQ(trace.size(), 5u);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        EXPECT_EQ(trace[i].iteration, i);
        EXPECT_EQ(trace[i].mean.size(), 3u);
        EXPECT_LE(trace[i].feasible_members, p.hms);
        EXPECT_LE(trace[i].archive_size, p.archive_capacity);
        EXPECT_LE(trace[i].replacements, p.batch_size);
    }
}

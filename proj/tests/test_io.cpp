#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "mirrorplan/io/config.hpp"
#include "mirrorplan/io/csv.hpp"
#include "mirrorplan/io/run_outputs.hpp"
#include "mirrorplan/io/solution_json.hpp"
#include "mirrorplan/io/svg.hpp"

using namespace mirrorplan;
using io::json;

namespace {

geometry::ArrangementSolution optimum() {
    return geometry::evaluate_design({}, {187.879, 255.392, 181.091, geometry::deg2rad(149.679)});
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Config, DefaultsMatchCaseStudy) {
    const io::RunConfig cfg;
    EXPECT_EQ(cfg.scene.r, 17.0);
    EXPECT_EQ(cfg.scene.l_V, 118.0);
    EXPECT_EQ(cfg.bounds.a.min, 150.0);
    EXPECT_EQ(cfg.bounds.theta1_deg.max, 180.0);
    EXPECT_EQ(cfg.hs.hms, 50u);
    EXPECT_EQ(cfg.hs.hmcr, 0.75);
    EXPECT_EQ(cfg.hs.par, 0.4);
    EXPECT_EQ(cfg.hs.iterations, 100u);
    EXPECT_EQ(cfg.hs.batch_size, 20u);
    EXPECT_EQ(cfg.hs.archive_capacity, 10u);
    EXPECT_EQ(cfg.hs.seed, 1u);
    EXPECT_EQ(cfg.hs.bandwidth_final_fraction, 0.001);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, PartialOverridesKeepDefaults) {
    const auto cfg = io::parse_config(R"({"hs": {"seed": 7, "iterations": 3}, "scene": {"r": 12.5}})");
    EXPECT_EQ(cfg.hs.seed, 7u);
    EXPECT_EQ(cfg.hs.iterations, 3u);
    EXPECT_EQ(cfg.hs.hms, 50u);
    EXPECT_EQ(cfg.scene.r, 12.5);
    EXPECT_EQ(cfg.scene.l_V, 118.0);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(io::parse_config("{"), io::ConfigError);
    EXPECT_THROW(io::parse_config("[]"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"hs": {"foo": 1}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"extra": 1})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"hs": {"hms": "50"}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"hs": {"hms": -1}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"hs": {"hmcr": 1.5}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"bounds": {"a": {"min": 400, "max": 150}}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"scene": {"r": -1}})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"schema_version": 2})"), io::ConfigError);
    EXPECT_THROW(io::parse_config(R"({"hs": {"penalty_weights": [1, 2]}})"), io::ConfigError);
    try {
        io::parse_config(R"({"hs": {"foo": 1}})");
    } catch (const io::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("hs.foo"), std::string::npos);
    }
}

TEST(Config, JsonRoundTrip) {
    io::RunConfig cfg;
    cfg.hs.seed = 99;
    cfg.hs.penalty_weights = {1, 2, 3, 4, 5, 6};
    cfg.bounds.c = {160.0, 390.0};
    cfg.outputs.analysis = true;
    cfg.service.max_concurrent_jobs = 3;
    const json doc = io::config_to_json(cfg);
    const auto back = io::config_from_json(doc);
    EXPECT_EQ(io::config_to_json(back), doc);
    EXPECT_EQ(back.hs.penalty_weights, cfg.hs.penalty_weights);
    EXPECT_EQ(back.bounds.c.min, 160.0);
}

TEST(Csv, NumbersRoundTrip) {
    for (double v : {0.0, -1.5, 680.596, 1.0 / 3.0, 2.612, 1e-17}) {
        EXPECT_EQ(std::stod(io::format_number(v)), v);
    }
    EXPECT_EQ(io::format_number(std::nan("")), "nan");
}

TEST(Csv, ParetoRowsSortedBySumWithHeader) {
    hs::ParetoArchive archive(10);
    auto member = [](std::vector<double> f, std::uint64_t id) {
        hs::Member m;
        m.x = {static_cast<double>(id), 2, 3, 4};
        m.f = std::move(f);
        m.g = {-1};
        m.feasible = true;
        m.id = id;
        return m;
    };
    archive.update(member({3, 1, 1}, 1));
    archive.update(member({1, 1, 2}, 2));
    archive.update(member({1, 3, 1}, 3));
    const std::vector<double> scales{1, 1, 1};
    const auto rows = io::pareto_rows(archive, scales);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].id, 2u);
    std::ostringstream out;
    io::write_pareto_csv(out, rows);
    const auto lines = split_lines(out.str());
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "No,a_mm,b_mm,c_mm,theta1_rad,f1_mm,f2_mm,f3_mm");
    EXPECT_EQ(lines[1], "1,2,2,3,4,1,1,2");
}

TEST(Csv, GridLongFormat) {
    analysis::Grid g;
    g.xs = {0.5, 1.5};
    g.ys = {-1, 1};
    g.values = {1, 2, 3, 4};
    std::ostringstream out;
    io::write_grid_csv(out, g, "density");
    EXPECT_EQ(out.str(), "x_mm,y_mm,density\n0.5,-1,1\n1.5,-1,2\n0.5,1,3\n1.5,1,4\n");
}

TEST(SolutionJson, RoundTripIsLossless) {
    const auto s = optimum();
    const json doc = io::solution_to_json(s);
    EXPECT_EQ(doc.at("schema_version"), 1);
    EXPECT_NEAR(doc.at("f").at("f2").get<double>(), 255.392 / std::sqrt(2.0), 1e-9);
    EXPECT_TRUE(doc.at("feasible").get<bool>());
    EXPECT_TRUE(doc.at("violations").empty());
    const auto back = io::solution_from_json(json::parse(doc.dump()));
    EXPECT_EQ(io::solution_to_json(back).dump(), doc.dump());
    EXPECT_NEAR(back.C1.x, s.C1.x, 1e-12);
}

TEST(SolutionJson, ViolationsListed) {
    auto s = geometry::evaluate_design({}, {187.879, 255.392, 181.091, 2.612});
    const json doc = io::solution_to_json(s);
    EXPECT_EQ(doc.at("violations").size(), s.violations().size());
    for (const auto& v : doc.at("violations")) EXPECT_GT(v.at("amount").get<double>(), 0.0);
}

TEST(SolutionJson, MissingFieldIsConfigError) {
    json doc = io::solution_to_json(optimum());
    doc.at("points").erase("C1");
    EXPECT_THROW(io::solution_from_json(doc), io::ConfigError);
}

TEST(EvaluateRequest, BoundsAndFailures) {
    const io::RunConfig cfg;
    EXPECT_THROW(io::evaluate_request(cfg, 0.0, 255, 181, 150), io::ConfigError);
    EXPECT_THROW(io::evaluate_request(cfg, 200, 255, 181, 100), io::ConfigError);
    EXPECT_THROW(io::evaluate_request(cfg, 200, 255, 181, std::nan("")), io::ConfigError);
    EXPECT_THROW(io::evaluate_request(cfg, 187, 255, 181, 180), geometry::GeometricFailure);
    const auto s = io::evaluate_request(cfg, 187.879, 255.392, 181.091, 149.679);
    EXPECT_TRUE(s.feasible);
}

TEST(Svg, MirrorsParseBackToModelCoordinates) {
    const auto s = optimum();
    const std::string svg = io::render_svg(s, 17.0);
    const std::regex line_re(R"re(<line id="(mirror-[ABC])" class="mirror" x1="([-0-9.]+)" y1="([-0-9.]+)" x2="([-0-9.]+)" y2="([-0-9.]+)"/>)re");
    std::map<std::string, std::array<double, 4>> mirrors;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line_re); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        mirrors[m[1]] = {std::stod(m[2]), std::stod(m[3]), std::stod(m[4]), std::stod(m[5])};
    }
    ASSERT_EQ(mirrors.size(), 3u);
    const std::regex any_mirror(R"(class="mirror")");
    EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), any_mirror), std::sregex_iterator()), 3);
    auto check = [&](const char* id, geometry::Point2 p, geometry::Point2 q) {
        const auto& v = mirrors.at(id);
        EXPECT_NEAR(v[0], p.x, 1e-3) << id;
        EXPECT_NEAR(v[1], p.y, 1e-3) << id;
        EXPECT_NEAR(v[2], q.x, 1e-3) << id;
        EXPECT_NEAR(v[3], q.y, 1e-3) << id;
    };
    check("mirror-A", s.A1, s.A2);
    check("mirror-B", s.B0, s.B1);
    check("mirror-C", s.C1, s.C2);

    std::smatch h;
    ASSERT_TRUE(std::regex_search(svg, h, std::regex(R"re(<circle id="camera-H" cx="([-0-9.]+)" cy="([-0-9.]+)")re")));
    EXPECT_NEAR(std::stod(h[1]), s.H.x, 1e-3);
    EXPECT_NEAR(std::stod(h[2]), s.H.y, 1e-3);
    EXPECT_NE(svg.find(">H</text>"), std::string::npos);
    EXPECT_NE(svg.find("50 mm"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(RunOutputs, ShortRunWritesEveryFile) {
    io::RunConfig cfg;
    cfg.hs.iterations = 4;
    cfg.hs.batch_size = 10;
    cfg.hs.hms = 20;
    cfg.outputs.analysis = true;
    cfg.outputs.grid_size = 20;
    const auto result = io::execute_run(cfg);
    ASSERT_EQ(result.pareto.size(), result.arrangements.size());
    const auto dir = std::filesystem::path(::testing::TempDir()) / "mirrorplan_io_outputs";
    std::filesystem::remove_all(dir);
    const auto files = io::write_outputs(dir, result);
    for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    EXPECT_TRUE(std::filesystem::exists(dir / "kde_C.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "contour_f3.csv"));
    std::ifstream ev(dir / "evaluations.csv");
    std::size_t lines = 0;
    for (std::string l; std::getline(ev, l);) ++lines;
    EXPECT_EQ(lines, 41u);
    const json pj = io::pareto_json(result);
    EXPECT_EQ(pj.at("rows").size(), result.pareto.size());
    const json tj = io::trace_json(result);
    EXPECT_EQ(tj.at("rows").size(), 4u);
    EXPECT_EQ(tj.at("rows")[0].at("iteration"), 1);
}

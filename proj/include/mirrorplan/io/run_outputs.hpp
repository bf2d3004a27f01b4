#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mirrorplan/analysis/log.hpp"
#include "mirrorplan/geometry/mirror_problem.hpp"
#include "mirrorplan/harmony/engine.hpp"
#include "mirrorplan/io/config.hpp"
#include "mirrorplan/io/csv.hpp"
#include "mirrorplan/io/solution_json.hpp"
#include "mirrorplan/io/svg.hpp"

namespace mirrorplan::io {

/// A finished mirror optimization with its Pareto rows fully re-evaluated.
struct RunResult {
    RunConfig config;
    hs::OptimizationRun run;
    std::vector<hs::Member> pareto;                         // row order; row 1 is the selected compromise
    std::vector<geometry::ArrangementSolution> arrangements;  // one per Pareto row
};

inline RunResult execute_run(const RunConfig& cfg, const hs::ProgressFn& progress = {}) {
    cfg.validate();
    const auto problem = geometry::make_mirror_problem(cfg.scene, cfg.bounds);
    RunResult result{cfg, hs::run_optimization(problem, cfg.hs, progress), {}, {}};
    result.pareto = pareto_rows(result.run.archive, problem.objective_scales);
    for (const auto& m : result.pareto) {
        result.arrangements.push_back(geometry::evaluate_design(cfg.scene, geometry::design_from_genome(m.x)));
    }
    return result;
}

inline json pareto_json(const RunResult& r) {
    json rows = json::array();
    for (std::size_t i = 0; i < r.pareto.size(); ++i) {
        const auto& m = r.pareto[i];
        rows.push_back({{"No", i + 1},
                        {"a_mm", m.x[0]},
                        {"b_mm", m.x[1]},
                        {"c_mm", m.x[2]},
                        {"theta1_rad", m.x[3]},
                        {"f1_mm", m.f[0]},
                        {"f2_mm", m.f[1]},
                        {"f3_mm", m.f[2]}});
    }
    return {{"schema_version", kSchemaVersion},
            {"columns", {"No", "a_mm", "b_mm", "c_mm", "theta1_rad", "f1_mm", "f2_mm", "f3_mm"}},
            {"rows", rows},
            {"selected_row", r.pareto.empty() ? json(nullptr) : json(1)}};
}

inline json trace_json(const RunResult& r) {
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    json rows = json::array();
    for (const auto& t : analysis::convergence_trace(r.run)) {
        rows.push_back({{"iteration", t.iteration + 1},
                        {"best_f1_mm", num(t.best[0])},
                        {"best_f2_mm", num(t.best[1])},
                        {"best_f3_mm", num(t.best[2])},
                        {"mean_f1_mm", t.mean[0]},
                        {"mean_f2_mm", t.mean[1]},
                        {"mean_f3_mm", t.mean[2]},
                        {"archive_size", t.archive_size},
                        {"feasible_members", t.feasible_members},
                        {"replacements", t.replacements}});
    }
    return {{"schema_version", kSchemaVersion}, {"rows", rows}};
}

namespace detail {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& write) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write(out);
    if (!out) throw std::runtime_error("error while writing " + path.string());
}

}  // namespace detail

/// Write every artifact of a run into `dir` (created if missing). Returns the file names written.
inline std::vector<std::string> write_outputs(const std::filesystem::path& dir, const RunResult& r) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, auto&& writer) {
        detail::write_file(dir / name, writer);
        written.push_back(name);
    };
    emit("pareto.csv", [&](std::ostream& o) { write_pareto_csv(o, r.pareto); });
    emit("trace.csv", [&](std::ostream& o) {
        const auto rows = analysis::convergence_trace(r.run);
        write_trace_csv(o, rows);
    });
    emit("evaluations.csv", [&](std::ostream& o) { write_evaluations_csv(o, r.run.evaluations); });
    if (!r.arrangements.empty()) {
        emit("selected.json", [&](std::ostream& o) { o << solution_to_json(r.arrangements.front()).dump(2) << '\n'; });
        emit("arrangement.svg", [&](std::ostream& o) { o << render_svg(r.arrangements.front(), r.config.scene.r); });
    }
    if (r.config.outputs.analysis) {
        const auto log = analysis::solution_log(r.run);
        const std::size_t n = r.config.outputs.grid_size;
        emit("kde_C.csv", [&](std::ostream& o) { write_grid_csv(o, analysis::kde_point_C(log, n), "density"); });
        for (std::size_t k = 0; k < 3; ++k) {
            const std::string name = "contour_f" + std::to_string(k + 1) + ".csv";
            emit(name, [&](std::ostream& o) {
                write_grid_csv(o, analysis::objective_contours(log, k, n), ("f" + std::to_string(k + 1) + "_mm").c_str());
            });
        }
    }
    return written;
}

}  // namespace mirrorplan::io

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mirrorplan/analysis/density.hpp"
#include "mirrorplan/analysis/log.hpp"
#include "mirrorplan/harmony/engine.hpp"
#include "mirrorplan/io/config.hpp"

namespace mirrorplan::io {

/// Shortest decimal text that parses back to the same double; "nan" for NaN.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

/// Archive members ordered by normalized objective sum, so row 1 is the selected compromise.
inline std::vector<hs::Member> pareto_rows(const hs::ParetoArchive& archive, std::span<const double> scales) {
    std::vector<hs::Member> rows(archive.members().begin(), archive.members().end());
    std::stable_sort(rows.begin(), rows.end(), [&](const hs::Member& a, const hs::Member& b) {
        return hs::normalized_objective_sum(a.f, scales) < hs::normalized_objective_sum(b.f, scales);
    });
    return rows;
}

inline constexpr const char* kParetoHeader = "No,a_mm,b_mm,c_mm,theta1_rad,f1_mm,f2_mm,f3_mm";

inline void write_pareto_csv(std::ostream& out, std::span<const hs::Member> rows) {
    out << kParetoHeader << '\n';
    std::size_t no = 1;
    for (const auto& m : rows) {
        out << no++;
        for (double v : m.x) out << ',' << format_number(v);
        for (double v : m.f) out << ',' << format_number(v);
        out << '\n';
    }
}

inline void write_trace_csv(std::ostream& out, std::span<const analysis::ConvergenceRow> rows) {
    out << "iteration,best_f1_mm,best_f2_mm,best_f3_mm,mean_f1_mm,mean_f2_mm,mean_f3_mm,archive_size,"
           "feasible_members,replacements\n";
    for (const auto& r : rows) {
        out << r.iteration + 1;
        for (double v : r.best) out << ',' << format_number(v);
        for (double v : r.mean) out << ',' << format_number(v);
        out << ',' << r.archive_size << ',' << r.feasible_members << ',' << r.replacements << '\n';
    }
}

inline std::string outcome_name(hs::ReplaceOutcome o) {
    switch (o) {
        case hs::ReplaceOutcome::feasible_replaces_infeasible: return "case1";
        case hs::ReplaceOutcome::better_feasible: return "case2";
        case hs::ReplaceOutcome::constraint_dominates_worst: return "case3";
        case hs::ReplaceOutcome::rejected_too_close: return "rejected_too_close";
        case hs::ReplaceOutcome::rejected_infeasible_vs_feasible: return "rejected_infeasible";
        case hs::ReplaceOutcome::rejected_not_better: return "rejected_not_better";
        case hs::ReplaceOutcome::rejected_not_dominating: return "rejected_not_dominating";
    }
    return "unknown";
}

/// One row per recorded evaluation of a mirror run.
inline void write_evaluations_csv(std::ostream& out, std::span<const hs::RecordedEvaluation> evals) {
    out << "eval_id,iteration,slot,a_mm,b_mm,c_mm,theta1_rad,xC_mm,yC_mm,f1_mm,f2_mm,f3_mm,g1_deg,g2_mm,g3_mm,"
           "g4_mm,g5_mm,g6_deg,feasible,outcome,failed_attempts\n";
    for (const auto& e : evals) {
        const auto& m = e.member;
        out << m.id << ',' << e.iteration + 1 << ',' << e.slot + 1;
        for (double v : m.x) out << ',' << format_number(v);
        for (double v : m.aux) out << ',' << format_number(v);
        for (double v : m.f) out << ',' << format_number(v);
        for (double v : m.g) out << ',' << format_number(v);
        out << ',' << (m.feasible ? 1 : 0) << ',' << outcome_name(e.outcome) << ',' << e.failed_attempts << '\n';
    }
}

/// Long format: x_mm,y_mm,value.
inline void write_grid_csv(std::ostream& out, const analysis::Grid& g, const char* value_name) {
    out << "x_mm,y_mm," << value_name << '\n';
    for (std::size_t iy = 0; iy < g.ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < g.xs.size(); ++ix) {
            out << format_number(g.xs[ix]) << ',' << format_number(g.ys[iy]) << ',' << format_number(g.at(ix, iy))
                << '\n';
        }
    }
}

}  // namespace mirrorplan::io

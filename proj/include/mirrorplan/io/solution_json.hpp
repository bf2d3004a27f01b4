#pragma once

#include <string>

#include "mirrorplan/geometry/arrangement.hpp"
#include "mirrorplan/io/config.hpp"

namespace mirrorplan::io {

inline json point_json(geometry::Point2 p) { return {{"x", p.x}, {"y", p.y}}; }

inline geometry::Point2 point_from_json(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

/// Full arrangement as JSON. Angles in degrees, lengths in mm.
inline json solution_to_json(const geometry::ArrangementSolution& s) {
    using geometry::rad2deg;
    json points = json::object();
    const std::pair<const char*, geometry::Point2> named[] = {
        {"A", s.A},   {"B", s.B},   {"C", s.C},   {"H", s.H},   {"P", s.P},   {"Q", s.Q},   {"R", s.R},
        {"V0", s.V0}, {"V1", s.V1}, {"V2", s.V2}, {"A0", s.A0}, {"A1", s.A1}, {"A2", s.A2}, {"B0", s.B0},
        {"B1", s.B1}, {"C1", s.C1}, {"C2", s.C2}, {"K1", s.K1}, {"K2", s.K2},
    };
    for (const auto& [name, p] : named) points[name] = point_json(p);

    json violations = json::array();
    for (const auto& [index, amount] : s.violations()) {
        violations.push_back({{"constraint", "g" + std::to_string(index)}, {"amount", amount}});
    }
    return {
        {"schema_version", kSchemaVersion},
        {"design", {{"a", s.x.a}, {"b", s.x.b}, {"c", s.x.c}, {"theta1_deg", rad2deg(s.x.theta1)}}},
        {"d", s.d},
        {"theta2_deg", rad2deg(s.theta2)},
        {"theta3_deg", rad2deg(s.theta3)},
        {"beta_deg", s.beta_deg},
        {"points", points},
        {"f", {{"f1", s.f[0]}, {"f2", s.f[1]}, {"f3", s.f[2]}}},
        {"g", {{"g1", s.g[0]}, {"g2", s.g[1]}, {"g3", s.g[2]}, {"g4", s.g[3]}, {"g5", s.g[4]}, {"g6", s.g[5]}}},
        {"feasible", s.feasible},
        {"violations", violations},
        {"solver",
         {{"residual", s.solver.residual},
          {"sign_changes", s.solver.sign_changes},
          {"accepted_roots", s.solver.accepted_roots},
          {"multiple_roots", s.solver.multiple_roots},
          {"bc_parameter", s.solver.bc_parameter}}},
    };
}

/// Inverse of solution_to_json. Throws ConfigError on missing or mistyped fields.
inline geometry::ArrangementSolution solution_from_json(const json& j) {
    using geometry::deg2rad;
    try {
        geometry::ArrangementSolution s;
        const auto& d = j.at("design");
        s.x = {d.at("a").get<double>(), d.at("b").get<double>(), d.at("c").get<double>(),
               deg2rad(d.at("theta1_deg").get<double>())};
        s.d = j.at("d").get<double>();
        s.theta2 = deg2rad(j.at("theta2_deg").get<double>());
        s.theta3 = deg2rad(j.at("theta3_deg").get<double>());
        s.beta_deg = j.at("beta_deg").get<double>();
        const auto& p = j.at("points");
        geometry::Point2* targets[] = {&s.A,  &s.B,  &s.C,  &s.H,  &s.P,  &s.Q,  &s.R,  &s.V0, &s.V1, &s.V2,
                                       &s.A0, &s.A1, &s.A2, &s.B0, &s.B1, &s.C1, &s.C2, &s.K1, &s.K2};
        const char* names[] = {"A", "B", "C", "H", "P", "Q", "R", "V0", "V1", "V2",
                               "A0", "A1", "A2", "B0", "B1", "C1", "C2", "K1", "K2"};
        for (std::size_t i = 0; i < std::size(names); ++i) *targets[i] = point_from_json(p.at(names[i]));
        const auto& f = j.at("f");
        s.f = {f.at("f1").get<double>(), f.at("f2").get<double>(), f.at("f3").get<double>()};
        const auto& g = j.at("g");
        for (std::size_t i = 0; i < 6; ++i) s.g[i] = g.at("g" + std::to_string(i + 1)).get<double>();
        s.feasible = j.at("feasible").get<bool>();
        if (j.contains("solver")) {
            const auto& r = j.at("solver");
            s.solver.residual = r.value("residual", 0.0);
            s.solver.sign_changes = r.value("sign_changes", std::size_t{0});
            s.solver.accepted_roots = r.value("accepted_roots", std::size_t{0});
            s.solver.multiple_roots = r.value("multiple_roots", false);
            s.solver.bc_parameter = r.value("bc_parameter", 0.0);
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid solution document: ") + e.what());
    }
}

inline json failure_json(const geometry::GeometricFailure& e) {
    return {{"schema_version", kSchemaVersion},
            {"error", "geometric_failure"},
            {"kind", std::string(geometry::to_string(e.kind()))},
            {"reason", e.what()}};
}

inline json error_json(const std::string& error, const std::string& message) {
    return {{"schema_version", kSchemaVersion}, {"error", error}, {"message", message}};
}

/// What-if evaluation of one design given in interface units. Throws ConfigError
/// for out-of-bounds input and GeometricFailure when no arrangement exists.
inline geometry::ArrangementSolution evaluate_request(const RunConfig& cfg, double a, double b, double c,
                                                      double theta1_deg) {
    const geometry::DesignVector x{a, b, c, geometry::deg2rad(theta1_deg)};
    const auto& bd = cfg.bounds;
    auto check = [](const geometry::Interval& iv, double v, const char* name) {
        if (!std::isfinite(v) || !iv.contains(v)) {
            throw ConfigError(std::string(name) + " = " + std::to_string(v) + " is outside [" +
                              std::to_string(iv.min) + ", " + std::to_string(iv.max) + "]");
        }
    };
    check(bd.a, a, "a");
    check(bd.b, b, "b");
    check(bd.c, c, "c");
    check(bd.theta1_deg, theta1_deg, "theta1_deg");
    return geometry::evaluate_design(cfg.scene, x);
}

}  // namespace mirrorplan::io

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mirrorplan/geometry/arrangement.hpp"
#include "mirrorplan/harmony/problem.hpp"

namespace mirrorplan::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OutputConfig {
    std::string directory = "out";
    bool analysis = false;  // also write KDE and contour grids
    std::size_t grid_size = 200;
};

struct ServiceConfig {
    std::size_t max_concurrent_jobs = 2;
    std::string host = "127.0.0.1";
};

/// Everything a run needs. Defaults reproduce the valve case study.
struct RunConfig {
    geometry::SceneConfig scene;
    geometry::DesignBounds bounds;
    hs::HSParams hs = default_params();
    OutputConfig outputs;
    ServiceConfig service;

    static hs::HSParams default_params() {
        hs::HSParams p;
        p.bandwidth_final_fraction = 0.001;
        return p;
    }

    void validate() const {
        try {
            scene.validate();
            bounds.validate();
            hs.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!hs.penalty_weights.empty() && hs.penalty_weights.size() != 6) {
            throw ConfigError("hs.penalty_weights needs one weight per constraint (6)");
        }
        if (service.max_concurrent_jobs == 0) throw ConfigError("service.max_concurrent_jobs must be positive");
        if (outputs.grid_size < 2) throw ConfigError("outputs.grid_size must be at least 2");
    }
};

namespace detail {

using Setter = std::function<void(const json&)>;

inline std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

/// Apply `setters` to the keys of `obj`, rejecting anything unknown.
inline void visit_object(const json& obj, const std::string& path, const std::map<std::string, Setter>& setters) {
    if (!obj.is_object()) throw ConfigError((path.empty() ? "config" : path) + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key '" + join_path(path, key) + "'");
        it->second(value);
    }
}

inline Setter number(double& target, std::string name) {
    return [&target, name = std::move(name)](const json& v) {
        if (!v.is_number()) throw ConfigError(name + " must be a number");
        target = v.get<double>();
    };
}

inline Setter count(std::size_t& target, std::string name) {
    return [&target, name = std::move(name)](const json& v) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw ConfigError(name + " must be a non-negative integer");
        }
        target = v.get<std::size_t>();
    };
}

inline Setter boolean(bool& target, std::string name) {
    return [&target, name = std::move(name)](const json& v) {
        if (!v.is_boolean()) throw ConfigError(name + " must be true or false");
        target = v.get<bool>();
    };
}

inline Setter text(std::string& target, std::string name) {
    return [&target, name = std::move(name)](const json& v) {
        if (!v.is_string()) throw ConfigError(name + " must be a string");
        target = v.get<std::string>();
    };
}

inline Setter interval(geometry::Interval& target, std::string name) {
    return [&target, name = std::move(name)](const json& v) {
        visit_object(v, name, {{"min", number(target.min, name + ".min")}, {"max", number(target.max, name + ".max")}});
    };
}

}  // namespace detail

/// Overlay the keys present in `doc` onto `cfg`. Unknown keys and wrong types raise ConfigError.
inline void apply_overrides(RunConfig& cfg, const json& doc) {
    using namespace detail;
    auto& s = cfg.scene;
    auto& b = cfg.bounds;
    auto& h = cfg.hs;
    visit_object(doc, "",
                 {
                     {"schema_version",
                      [](const json& v) {
                          if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
                              throw ConfigError("unsupported schema_version (expected " +
                                                std::to_string(kSchemaVersion) + ")");
                          }
                      }},
                     {"scene",
                      [&](const json& v) {
                          visit_object(v, "scene",
                                       {{"r", number(s.r, "scene.r")},
                                        {"l_V", number(s.l_V, "scene.l_V")},
                                        {"min_A0_clearance", number(s.min_A0_clearance, "scene.min_A0_clearance")},
                                        {"min_C1_x", number(s.min_C1_x, "scene.min_C1_x")},
                                        {"min_angular_gap_deg",
                                         number(s.min_angular_gap_deg, "scene.min_angular_gap_deg")},
                                        {"C1_clearance", number(s.C1_clearance, "scene.C1_clearance")},
                                        {"C2_clearance", number(s.C2_clearance, "scene.C2_clearance")},
                                        {"max_beta_deg", number(s.max_beta_deg, "scene.max_beta_deg")}});
                      }},
                     {"bounds",
                      [&](const json& v) {
                          visit_object(v, "bounds",
                                       {{"a", interval(b.a, "bounds.a")},
                                        {"b", interval(b.b, "bounds.b")},
                                        {"c", interval(b.c, "bounds.c")},
                                        {"theta1_deg", interval(b.theta1_deg, "bounds.theta1_deg")}});
                      }},
                     {"hs",
                      [&](const json& v) {
                          visit_object(
                              v, "hs",
                              {{"hms", count(h.hms, "hs.hms")},
                               {"hmcr", number(h.hmcr, "hs.hmcr")},
                               {"par", number(h.par, "hs.par")},
                               {"bandwidth_fraction", number(h.bandwidth_fraction, "hs.bandwidth_fraction")},
                               {"bandwidth_final_fraction",
                                number(h.bandwidth_final_fraction, "hs.bandwidth_final_fraction")},
                               {"iterations", count(h.iterations, "hs.iterations")},
                               {"batch_size", count(h.batch_size, "hs.batch_size")},
                               {"archive_capacity", count(h.archive_capacity, "hs.archive_capacity")},
                               {"diversity_delta", number(h.diversity_delta, "hs.diversity_delta")},
                               {"seed",
                                [&](const json& x) {
                                    if (!x.is_number_unsigned()) throw ConfigError("hs.seed must be a non-negative integer");
                                    h.seed = x.get<std::uint64_t>();
                                }},
                               {"penalty_weights",
                                [&](const json& x) {
                                    if (!x.is_array()) throw ConfigError("hs.penalty_weights must be an array");
                                    h.penalty_weights.clear();
                                    for (const auto& w : x) {
                                        if (!w.is_number()) throw ConfigError("hs.penalty_weights must hold numbers");
                                        h.penalty_weights.push_back(w.get<double>());
                                    }
                                }},
                               {"max_redraws", count(h.max_redraws, "hs.max_redraws")}});
                      }},
                     {"outputs",
                      [&](const json& v) {
                          visit_object(v, "outputs",
                                       {{"directory", text(cfg.outputs.directory, "outputs.directory")},
                                        {"analysis", boolean(cfg.outputs.analysis, "outputs.analysis")},
                                        {"grid_size", count(cfg.outputs.grid_size, "outputs.grid_size")}});
                      }},
                     {"service",
                      [&](const json& v) {
                          visit_object(v, "service",
                                       {{"max_concurrent_jobs",
                                         count(cfg.service.max_concurrent_jobs, "service.max_concurrent_jobs")},
                                        {"host", text(cfg.service.host, "service.host")}});
                      }},
                 });
}

inline RunConfig config_from_json(const json& doc, const RunConfig& base = {}) {
    RunConfig cfg = base;
    apply_overrides(cfg, doc);
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config(const std::string& text, const RunConfig& base = {}) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc, base);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline json interval_json(const geometry::Interval& iv) { return {{"min", iv.min}, {"max", iv.max}}; }

inline json config_to_json(const RunConfig& cfg) {
    const auto& s = cfg.scene;
    const auto& h = cfg.hs;
    return {
        {"schema_version", kSchemaVersion},
        {"scene",
         {{"r", s.r},
          {"l_V", s.l_V},
          {"min_A0_clearance", s.min_A0_clearance},
          {"min_C1_x", s.min_C1_x},
          {"min_angular_gap_deg", s.min_angular_gap_deg},
          {"C1_clearance", s.C1_clearance},
          {"C2_clearance", s.C2_clearance},
          {"max_beta_deg", s.max_beta_deg}}},
        {"bounds",
         {{"a", interval_json(cfg.bounds.a)},
          {"b", interval_json(cfg.bounds.b)},
          {"c", interval_json(cfg.bounds.c)},
          {"theta1_deg", interval_json(cfg.bounds.theta1_deg)}}},
        {"hs",
         {{"hms", h.hms},
          {"hmcr", h.hmcr},
          {"par", h.par},
          {"bandwidth_fraction", h.bandwidth_fraction},
          {"bandwidth_final_fraction", h.bandwidth_final_fraction},
          {"iterations", h.iterations},
          {"batch_size", h.batch_size},
          {"archive_capacity", h.archive_capacity},
          {"diversity_delta", h.diversity_delta},
          {"seed", h.seed},
          {"penalty_weights", h.penalty_weights},
          {"max_redraws", h.max_redraws}}},
        {"outputs",
         {{"directory", cfg.outputs.directory},
          {"analysis", cfg.outputs.analysis},
          {"grid_size", cfg.outputs.grid_size}}},
        {"service", {{"max_concurrent_jobs", cfg.service.max_concurrent_jobs}, {"host", cfg.service.host}}},
    };
}

}  // namespace mirrorplan::io

#pragma once

#include <array>
#include <cstddef>
#include <string>

#include <httplib.h>

#include "mirrorplan/io/config.hpp"
#include "mirrorplan/io/run_outputs.hpp"
#include "mirrorplan/io/solution_json.hpp"
#include "mirrorplan/io/svg.hpp"
#include "mirrorplan/service/jobs.hpp"

namespace mirrorplan::service {

using io::json;

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

inline json job_json(const JobSnapshot& s) {
    json j = {{"schema_version", io::kSchemaVersion},
              {"id", s.id},
              {"state", to_string(s.state)},
              {"progress", s.progress},
              {"iterations", s.iterations},
              {"progress_fraction",
               s.iterations ? static_cast<double>(s.progress) / static_cast<double>(s.iterations) : 0.0}};
    if (!s.error.empty()) j["error"] = s.error;
    if (s.result) {
        j["pareto_rows"] = s.result->pareto.size();
        j["selected_row"] = s.result->pareto.empty() ? json(nullptr) : json(1);
    }
    return j;
}

inline double required_number(const json& body, const char* key) {
    if (!body.contains(key) || !body.at(key).is_number()) {
        throw io::ConfigError(std::string("field '") + key + "' must be a number");
    }
    return body.at(key).get<double>();
}

}  // namespace detail

/// SO_REUSEADDR only. The library default also sets SO_REUSEPORT, which lets a
/// second server bind a port that is already in use.
inline void exclusive_socket_options(socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
}

/// The synchronous what-if evaluation shared by the HTTP endpoint and the CLI.
/// Returns the HTTP status and the JSON body.
inline std::pair<int, json> evaluate_document(const io::RunConfig& cfg, double a, double b, double c,
                                              double theta1_deg) {
    try {
        return {200, io::solution_to_json(io::evaluate_request(cfg, a, b, c, theta1_deg))};
    } catch (const io::ConfigError& e) {
        return {400, io::error_json("invalid_input", e.what())};
    } catch (const geometry::GeometricFailure& e) {
        return {422, io::failure_json(e)};
    }
}

/**
 * Register the /api/v1 routes. `base` supplies defaults for job overrides and
 * the scene/bounds used by /evaluate.
 */
inline void install_routes(httplib::Server& server, JobRegistry& jobs, const io::RunConfig& base) {
    using detail::send_json;

    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    server.Get("/api/v1/config", [base](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, io::config_to_json(base));
    });

    server.Post("/api/v1/jobs", [&jobs, base](const httplib::Request& req, httplib::Response& res) {
        try {
            const json overrides = req.body.empty() ? json::object() : json::parse(req.body);
            const std::string id = jobs.submit(io::config_from_json(overrides, base));
            res.set_header("Location", "/api/v1/jobs/" + id);
            send_json(res, 202, {{"schema_version", io::kSchemaVersion}, {"id", id}, {"state", "queued"}});
        } catch (const json::parse_error& e) {
            send_json(res, 400, io::error_json("malformed_json", e.what()));
        } catch (const io::ConfigError& e) {
            send_json(res, 400, io::error_json("invalid_config", e.what()));
        }
    });

    auto with_job = [&jobs](const httplib::Request& req, httplib::Response& res, bool need_result,
                            auto&& respond) {
        const auto snap = jobs.get(req.matches[1]);
        if (!snap) {
            send_json(res, 404, io::error_json("unknown_job", "no job '" + std::string(req.matches[1]) + "'"));
            return;
        }
        if (need_result && !snap->result) {
            send_json(res, 409,
                      io::error_json("not_ready", "job is " + std::string(to_string(snap->state)) + ", not done"));
            return;
        }
        respond(*snap);
    };

    server.Get(R"(/api/v1/jobs/([^/]+))", [with_job](const httplib::Request& req, httplib::Response& res) {
        with_job(req, res, false, [&](const JobSnapshot& s) { send_json(res, 200, detail::job_json(s)); });
    });

    server.Get(R"(/api/v1/jobs/([^/]+)/pareto)", [with_job](const httplib::Request& req, httplib::Response& res) {
        with_job(req, res, true, [&](const JobSnapshot& s) { send_json(res, 200, io::pareto_json(*s.result)); });
    });

    server.Get(R"(/api/v1/jobs/([^/]+)/trace)", [with_job](const httplib::Request& req, httplib::Response& res) {
        with_job(req, res, true, [&](const JobSnapshot& s) { send_json(res, 200, io::trace_json(*s.result)); });
    });

    // Row drawing (.svg) or full arrangement JSON (.json) of a Pareto row, 1-based.
    server.Get(R"(/api/v1/jobs/([^/]+)/arrangement/(\d+)\.(svg|json))",
               [with_job](const httplib::Request& req, httplib::Response& res) {
                   with_job(req, res, true, [&](const JobSnapshot& s) {
                       const std::size_t row = std::stoul(req.matches[2]);
                       const auto& arr = s.result->arrangements;
                       if (row == 0 || row > arr.size()) {
                           send_json(res, 404, io::error_json("unknown_row", "row " + std::to_string(row) +
                                                                                  " not in 1.." +
                                                                                  std::to_string(arr.size())));
                           return;
                       }
                       if (req.matches[3] == "json") {
                           send_json(res, 200, io::solution_to_json(arr[row - 1]));
                           return;
                       }
                       res.status = 200;
                       res.set_content(io::render_svg(arr[row - 1], s.result->config.scene.r), "image/svg+xml");
                   });
               });

    // Body {a, b, c, theta1_deg}; anything else is rejected.
    auto parse_design = [](const std::string& text) {
        const json body = json::parse(text);
        if (!body.is_object()) throw io::ConfigError("body must be a JSON object");
        for (const auto& [key, value] : body.items()) {
            if (key != "a" && key != "b" && key != "c" && key != "theta1_deg") {
                throw io::ConfigError("unknown key '" + key + "'");
            }
        }
        return std::array<double, 4>{detail::required_number(body, "a"), detail::required_number(body, "b"),
                                     detail::required_number(body, "c"), detail::required_number(body, "theta1_deg")};
    };

    server.Post("/api/v1/evaluate", [base, parse_design](const httplib::Request& req, httplib::Response& res) {
        try {
            const auto [a, b, c, t] = parse_design(req.body);
            const auto [status, doc] = evaluate_document(base, a, b, c, t);
            send_json(res, status, doc);
        } catch (const json::parse_error& e) {
            send_json(res, 400, io::error_json("malformed_json", e.what()));
        } catch (const io::ConfigError& e) {
            send_json(res, 400, io::error_json("invalid_input", e.what()));
        }
    });

    server.Post("/api/v1/evaluate/arrangement.svg",
                [base, parse_design](const httplib::Request& req, httplib::Response& res) {
                    try {
                        const auto [a, b, c, t] = parse_design(req.body);
                        const auto solution = io::evaluate_request(base, a, b, c, t);
                        res.status = 200;
                        res.set_content(io::render_svg(solution, base.scene.r), "image/svg+xml");
                    } catch (const json::parse_error& e) {
                        send_json(res, 400, io::error_json("malformed_json", e.what()));
                    } catch (const io::ConfigError& e) {
                        send_json(res, 400, io::error_json("invalid_input", e.what()));
                    } catch (const geometry::GeometricFailure& e) {
                        send_json(res, 422, io::failure_json(e));
                    }
                });

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) send_json(res, res.status, io::error_json("http_" + std::to_string(res.status), "not found"));
    });
}

}  // namespace mirrorplan::service

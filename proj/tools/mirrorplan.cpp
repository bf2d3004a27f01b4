// mirrorplan: optimize, evaluate and draw single-camera three-mirror arrangements.
//
// Exit codes: 0 ok, 1 unexpected error, 2 invalid config or input,
// 3 memory initialization exhausted, 4 geometric failure, 5 port busy.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mirrorplan/io/config.hpp"
#include "mirrorplan/io/run_outputs.hpp"
#include "mirrorplan/io/solution_json.hpp"
#include "mirrorplan/io/svg.hpp"
#include "mirrorplan/service/server.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mirrorplan;

enum Exit { ok = 0, unexpected = 1, invalid = 2, init_exhausted = 3, geometric = 4, port_busy = 5 };

io::RunConfig load_or_default(const std::string& path) {
    return path.empty() ? io::RunConfig{} : io::load_config(path);
}

fs::path output_dir(const io::RunConfig& cfg) {
    if (const char* env = std::getenv("MIRRORPLAN_OUT"); env && *env) return env;
    return cfg.outputs.directory;
}

int cmd_optimize(const std::string& config_path, const std::optional<std::uint64_t>& seed, bool quiet) {
    io::RunConfig cfg = load_or_default(config_path);
    if (seed) cfg.hs.seed = *seed;
    cfg.validate();
    const auto dir = output_dir(cfg);
    const auto result = io::execute_run(cfg, [&](std::size_t done) {
        if (!quiet && (done % 10 == 0 || done == cfg.hs.iterations)) {
            std::cerr << "iteration " << done << "/" << cfg.hs.iterations << "\n";
        }
    });
    const auto files = io::write_outputs(dir, result);
    if (result.pareto.empty()) std::cerr << "warning: no feasible design found; archive is empty\n";
    if (!quiet) {
        std::cerr << "archive: " << result.pareto.size() << " designs, " << result.run.evaluations.size()
                  << " evaluations recorded\n";
        for (const auto& f : files) std::cerr << "wrote " << (dir / f).string() << "\n";
    }
    if (!result.pareto.empty()) {
        const auto& s = result.pareto.front();
        std::cout << "selected: a=" << s.x[0] << " b=" << s.x[1] << " c=" << s.x[2]
                  << " theta1_deg=" << geometry::rad2deg(s.x[3]) << " f=(" << s.f[0] << ", " << s.f[1] << ", "
                  << s.f[2] << ")\n";
    }
    return ok;
}

int cmd_evaluate(const std::string& config_path, double a, double b, double c, double theta1_deg) {
    const io::RunConfig cfg = load_or_default(config_path);
    const auto [status, doc] = service::evaluate_document(cfg, a, b, c, theta1_deg);
    if (status == 400) {
        std::cerr << "error: " << doc.at("message").get<std::string>() << "\n";
        return invalid;
    }
    std::cout << doc.dump(2) << "\n";
    if (status == 422) {
        std::cerr << "geometric failure: " << doc.at("reason").get<std::string>() << "\n";
        return geometric;
    }
    return ok;
}

int cmd_render(const std::string& solution_path, const std::string& out_path, double r) {
    std::ifstream in(solution_path);
    if (!in) throw io::ConfigError("cannot read solution file '" + solution_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    io::json doc;
    try {
        doc = io::json::parse(ss.str());
    } catch (const io::json::parse_error& e) {
        throw io::ConfigError(std::string("malformed JSON: ") + e.what());
    }
    const auto solution = io::solution_from_json(doc);
    const std::string svg = io::render_svg(solution, r);
    if (out_path.empty() || out_path == "-") {
        std::cout << svg;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << svg;
    }
    return ok;
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const std::string& config_path, int port, bool write_through) {
    const io::RunConfig cfg = load_or_default(config_path);
    cfg.validate();
    std::optional<fs::path> sink;
    if (write_through) sink = output_dir(cfg);
    service::JobRegistry jobs(cfg.service.max_concurrent_jobs, sink);
    httplib::Server server;
    server.set_socket_options(service::exclusive_socket_options);
    service::install_routes(server, jobs, cfg);
    if (!server.bind_to_port(cfg.service.host, port)) {
        std::cerr << "error: cannot bind " << cfg.service.host << ":" << port << " (port busy?)\n";
        return port_busy;
    }
    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    std::cerr << "listening on http://" << cfg.service.host << ":" << port << "/api/v1\n";
    server.listen_after_bind();
    g_server = nullptr;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal arrangement of a single-camera three-mirror imaging device"};
    app.require_subcommand(1);

    std::string config_path;
    bool quiet = false;
    std::optional<std::uint64_t> seed;
    auto* optimize = app.add_subcommand("optimize", "Run the harmony search and write CSV/JSON/SVG results");
    optimize->add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    optimize->add_option("--seed", seed, "Override hs.seed");
    optimize->add_flag("-q,--quiet", quiet, "Only print the selected design");

    double a = 0, b = 0, c = 0, theta1_deg = 0;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate one design and print the arrangement as JSON");
    evaluate->add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    evaluate->add_option("--a", a, "Length a in mm")->required();
    evaluate->add_option("--b", b, "Length b in mm")->required();
    evaluate->add_option("--c", c, "Length c in mm")->required();
    evaluate->add_option("--theta1-deg", theta1_deg, "Mirror A angle in degrees")->required();

    std::string solution_path, out_path;
    double radius = io::RunConfig{}.scene.r;
    auto* render = app.add_subcommand("render", "Draw a solution JSON (as written by evaluate/optimize) to SVG");
    render->add_option("--solution", solution_path, "Solution JSON")->required();
    render->add_option("--out", out_path, "Output SVG path, '-' for standard output")->required();
    render->add_option("--r", radius, "Observation circle radius in mm");

    int port = 8080;
    bool write_through = false;
    auto* serve = app.add_subcommand("serve", "Start the HTTP+JSON job service");
    serve->add_option("--config", config_path, "Base configuration (JSON)")->check(CLI::ExistingFile);
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_flag("--write-through", write_through, "Also write each finished job's files to the output dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : invalid;
    }

    try {
        if (*optimize) return cmd_optimize(config_path, seed, quiet);
        if (*evaluate) return cmd_evaluate(config_path, a, b, c, theta1_deg);
        if (*render) return cmd_render(solution_path, out_path, radius);
        if (*serve) return cmd_serve(config_path, port, write_through);
    } catch (const io::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    } catch (const hs::InitializationExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return init_exhausted;
    } catch (const geometry::GeometricFailure& e) {
        std::cerr << "geometric failure: " << e.what() << "\n";
        return geometric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return unexpected;
    }
    return unexpected;
}

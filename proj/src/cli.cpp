#include "swarm/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

namespace swarm::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::stderr_color_mt("swarm");
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("SWARM_LOG_LEVEL")) l->set_level(spdlog::level::from_str(env));
        return l;
    }();
    return log;
}

bool write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

// Loads a scenario, mapping failures onto exit codes.
std::optional<SimConfig> load(const fs::path& path, int& code) {
    if (!fs::exists(path)) {
        logger()->error("scenario file not found: {}", path.string());
        code = kMissingFile;
        return std::nullopt;
    }
    try {
        return load_scenario(path);
    } catch (const ScenarioError& e) {
        logger()->error("schema violation: {}", e.what());
        code = kSchemaViolation;
    } catch (const std::exception& e) {
        logger()->error("{}", e.what());
        code = kIoError;
    }
    return std::nullopt;
}

std::optional<TrajectoryLog> read_log(const fs::path& path, int& code) {
    std::ifstream in(path);
    if (!in) {
        logger()->error("trajectory file not found: {}", path.string());
        code = kMissingFile;
        return std::nullopt;
    }
    try {
        return read_trajectory_csv(in);
    } catch (const std::exception& e) {
        logger()->error("parse error in {}: {}", path.string(), e.what());
        code = kParseError;
    }
    return std::nullopt;
}

}  // namespace

int cmd_run(const RunOptions& options) {
    int code = kOk;
    auto config = load(options.scenario, code);
    if (!config) return code;
    if (options.seed) {
        config->init.seed = *options.seed;
        config->lloyd.rng_seed = *options.seed;
    }
    if (options.mode) config->mode = *options.mode;

    TrajectoryLog log;
    try {
        log = run_scenario(*config);
    } catch (const DivergenceError& e) {
        logger()->error("{}", e.what());
        return kDivergence;
    } catch (const std::invalid_argument& e) {
        logger()->error("schema violation: {}", e.what());
        return kSchemaViolation;
    }
    if (!log.cvt_converged)
        logger()->info("CVT did not reach move_tol within {} iterations", log.cvt_iterations);
    if (log.building_penetrations > 0)
        logger()->warn("{} agent-steps inside buildings", log.building_penetrations);

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) {
        logger()->error("cannot create {}: {}", options.out_dir.string(), ec.message());
        return kIoError;
    }

    std::ostringstream traj, obs;
    write_trajectory_csv(log, traj);
    write_obstacles_csv(log, obs);
    const Metrics metrics = compute_metrics(log, *config);

    nlohmann::ordered_json manifest;
    manifest["scenario_file"] = options.scenario.string();
    manifest["init_seed"] = config->init.seed;
    manifest["cvt_seed"] = config->lloyd.rng_seed;
    manifest["cvt_iterations"] = log.cvt_iterations;
    manifest["cvt_converged"] = log.cvt_converged;
    manifest["steps"] = config->step_count() + 1;
    manifest["rows"] = log.rows.size();
    manifest["config"] = nlohmann::ordered_json::parse(scenario_to_json(*config));

    if (!write_file(options.out_dir / "trajectory.csv", traj.str()) ||
        !write_file(options.out_dir / "obstacles.csv", obs.str()) ||
        !write_file(options.out_dir / "metrics.json", metrics_json(metrics)) ||
        !write_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n")) {
        logger()->error("failed writing outputs to {}", options.out_dir.string());
        return kIoError;
    }
    logger()->info("wrote {} rows to {}", log.rows.size(), options.out_dir.string());
    return kOk;
}

int cmd_cvt(const CvtOptions& options) {
    LloydParams params = options.params;
    params.n = options.n;
    params.samples = options.samples.value_or(100 * std::max(options.n, 1));
    const Region region = Region::rectangle(options.x0, options.y0, options.x1, options.y1, options.z);
    try {
        region.validate();
        params.validate();
    } catch (const std::invalid_argument& e) {
        logger()->error("schema violation: {}", e.what());
        return kSchemaViolation;
    }

    Rng eval_rng(params.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    const std::vector<Vec3> eval = sample_region(region, options.energy_samples, eval_rng);
    std::ostringstream trace;
    trace << "iteration,energy\n";
    const LloydResult result = run_lloyd(region, params, [&](int it, std::span<const CvtCell> cells) {
        std::vector<Vec3> seeds;
        for (const auto& c : cells) seeds.push_back(c.seed);
        trace << it << ',' << distortion_energy(seeds, eval) << '\n';
    });
    if (!result.converged)
        logger()->warn("CVT did not reach move_tol {} within {} iterations (last move {})", params.move_tol,
                       result.iterations, result.last_move);

    std::ostringstream seeds;
    seeds.precision(17);
    seeds << "index,x,y,z\n";
    for (std::size_t i = 0; i < result.seeds.size(); ++i)
        seeds << i << ',' << result.seeds[i].x << ',' << result.seeds[i].y << ',' << result.seeds[i].z << '\n';

    fs::path energy_out = options.energy_out;
    if (energy_out.empty())
        energy_out = options.out.parent_path() / (options.out.stem().string() + "_energy.csv");
    if (!options.out.parent_path().empty()) fs::create_directories(options.out.parent_path());
    if (!write_file(options.out, seeds.str()) || !write_file(energy_out, trace.str())) {
        logger()->error("failed writing {}", options.out.string());
        return kIoError;
    }
    return kOk;
}

int cmd_metrics(const MetricsOptions& options) {
    int code = kOk;
    auto config = load(options.scenario, code);
    if (!config) return code;
    auto log = read_log(options.trajectory, code);
    if (!log) return code;
    if (log->agents != config->agents) {
        logger()->error("trajectory has {} agents, scenario has {}", log->agents, config->agents);
        return kParseError;
    }
    attach_formation(*log, *config);
    const std::string json = metrics_json(compute_metrics(*log, *config));
    if (options.out.empty()) {
        std::cout << json;
        return kOk;
    }
    return write_file(options.out, json) ? kOk : kIoError;
}

int cmd_plot(const PlotCommandOptions& options) {
    int code = kOk;
    auto log = read_log(options.trajectory, code);
    if (!log) return code;
    PlotOptions plot;
    plot.agent = options.agent;
    if (!options.scenario.empty()) {
        auto config = load(options.scenario, code);
        if (!config) return code;
        plot.safety_range = config->detection.r_s;
        plot.buildings = config->buildings;
        plot.obstacles = obstacle_rows_for(*log, config->obstacles);
    }
    if (!options.out.parent_path().empty()) fs::create_directories(options.out.parent_path());
    return write_file(options.out, render_svg(*log, options.view, plot)) ? kOk : kIoError;
}

int main(int argc, char** argv) {
    CLI::App app{"Multi-UAV swarm formation and obstacle-avoidance simulator"};
    app.require_subcommand(0, 1);
    bool schema_dump = false;
    app.add_flag("--schema-dump", schema_dump, "Print the scenario schema and exit");

    RunOptions run;
    std::optional<std::string> run_mode;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
    run_cmd->add_option("scenario", run.scenario, "Scenario file (JSON)")->required();
    run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
    run_cmd->add_option("--seed", run.seed, "Override the init and CVT seeds");
    run_cmd->add_option("--mode", run_mode, "Maneuver mode override")->check(CLI::IsMember({"planar", "3d"}));

    CvtOptions cvt;
    std::vector<double> region{0.0, 0.0, 1.0, 1.0};
    auto* cvt_cmd = app.add_subcommand("cvt", "Run the probabilistic Lloyd iteration on a rectangle");
    cvt_cmd->add_option("--region", region, "x0 y0 x1 y1 [m]")->expected(4);
    cvt_cmd->add_option("--z", cvt.z, "Plane altitude [m]");
    cvt_cmd->add_option("-n,--count", cvt.n, "Number of seeds")->required();
    cvt_cmd->add_option("--samples", cvt.samples, "Samples per iteration (default 100 N)");
    cvt_cmd->add_option("--max-iter", cvt.params.max_iter);
    cvt_cmd->add_option("--move-tol", cvt.params.move_tol);
    cvt_cmd->add_option("--seed", cvt.params.rng_seed);
    cvt_cmd->add_option("--a1", cvt.params.a1);
    cvt_cmd->add_option("--a2", cvt.params.a2);
    cvt_cmd->add_option("--b1", cvt.params.b1);
    cvt_cmd->add_option("--b2", cvt.params.b2);
    cvt_cmd->add_option("--energy-samples", cvt.energy_samples);
    cvt_cmd->add_option("--out", cvt.out, "Seeds CSV")->required();
    cvt_cmd->add_option("--energy-out", cvt.energy_out, "Energy trace CSV");

    MetricsOptions metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "Compute metrics for a trajectory CSV");
    metrics_cmd->add_option("scenario", metrics.scenario)->required();
    metrics_cmd->add_option("trajectory", metrics.trajectory)->required();
    metrics_cmd->add_option("--out", metrics.out, "Metrics JSON (default stdout)");

    PlotCommandOptions plot;
    std::string view = "top";
    auto* plot_cmd = app.add_subcommand("plot", "Render a trajectory CSV as SVG");
    plot_cmd->add_option("trajectory", plot.trajectory)->required();
    plot_cmd->add_option("--out", plot.out)->required();
    plot_cmd->add_option("--view", view)->check(CLI::IsMember({"top", "3d-projection", "separation"}));
    plot_cmd->add_option("--agent", plot.agent, "Reference agent for the separation view");
    plot_cmd->add_option("--scenario", plot.scenario, "Scenario file for obstacles, buildings and r_s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (schema_dump) {
        std::cout << scenario_schema();
        return kOk;
    }
    if (*run_cmd) {
        if (run_mode) run.mode = *run_mode == "planar" ? Maneuver::Planar : Maneuver::Spatial;
        return cmd_run(run);
    }
    if (*cvt_cmd) {
        cvt.x0 = region[0];
        cvt.y0 = region[1];
        cvt.x1 = region[2];
        cvt.y1 = region[3];
        return cmd_cvt(cvt);
    }
    if (*metrics_cmd) return cmd_metrics(metrics);
    if (*plot_cmd) {
        plot.view = view == "top" ? PlotView::Top : view == "separation" ? PlotView::Separation : PlotView::Projection;
        return cmd_plot(plot);
    }
    std::cout << app.help();
    return kUsage;
}

}  // namespace swarm::cli

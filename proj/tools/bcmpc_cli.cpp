// bcmpc: run closed-loop scenarios and validate parameter files.
//
//   bcmpc run --scenario <name|path> [--params <path>] --out <dir> [--seed <n>] [--plot]
//   bcmpc validate --params <path>
//
// Exit codes: 0 ok, 1 validation violations or output failure, 2 unreadable or invalid config, 3 planner abort.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bcmpc/config.hpp"
#include "bcmpc/run_log_io.hpp"
#include "bcmpc/sim_harness.hpp"
#include "bcmpc/svg_plot.hpp"

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPlanner = 3;

int fail(int code, const std::string& kind, const std::string& message, const nlohmann::json& extra = nlohmann::json::object()) {
    nlohmann::json err{{"error", kind}, {"message", message}, {"exit_code", code}};
    for (auto it = extra.begin(); it != extra.end(); ++it) err[it.key()] = *it;
    std::cerr << err.dump() << std::endl;
    return code;
}

bcmpc::Params read_params(const std::optional<std::string>& path) {
    return path ? bcmpc::load_params(*path) : bcmpc::Params{};
}

int cmd_validate(const std::string& params_path) {
    bcmpc::Params params;
    try {
        params = bcmpc::load_params(params_path);
    } catch (const bcmpc::ConfigError& e) {
        return fail(kExitConfig, "config", e.what(), {{"path", params_path}});
    }
    const auto violations = bcmpc::validate(params);
    nlohmann::json report{{"path", params_path}, {"valid", violations.empty()}, {"violations", violations}};
    std::cout << report.dump(2) << std::endl;
    return violations.empty() ? 0 : kExitViolations;
}

int cmd_run(const std::string& scenario_arg, const std::optional<std::string>& params_path, const std::string& out_dir,
            const std::optional<std::uint64_t>& seed, bool plot) {
    bcmpc::Params params;
    bcmpc::Scenario scenario;
    try {
        params = read_params(params_path);
        scenario = bcmpc::resolve_scenario(scenario_arg);
    } catch (const bcmpc::ConfigError& e) {
        return fail(kExitConfig, "config", e.what());
    }
    if (seed) scenario.seed = *seed;

    auto violations = bcmpc::validate(params);
    for (auto&& v : bcmpc::validate(scenario)) violations.push_back(v);
    if (!violations.empty()) return fail(kExitConfig, "config", "invalid configuration", {{"violations", violations}});

    bcmpc::RunLog log;
    try {
        log = bcmpc::run_closed_loop(scenario, params.planner, params.plant, params.sim);
    } catch (const bcmpc::PlannerError& e) {
        return fail(kExitPlanner, "planner", e.what(), {{"scenario", scenario.name}});
    }
    const bcmpc::Metrics metrics =
        bcmpc::compute_metrics(log, scenario, params.planner.regions, params.sim.grid_resolution);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) return fail(kExitViolations, "output", ec.message(), {{"path", out_dir}});

    const fs::path dir(out_dir);
    {
        std::ofstream csv(dir / "run.csv");
        bcmpc::write_csv(csv, log);
        std::ofstream js(dir / "metrics.json");
        js << bcmpc::metrics_json(log, metrics).dump(2) << '\n';
        if (!csv || !js) return fail(kExitViolations, "output", "failed to write outputs", {{"path", out_dir}});
    }
    if (plot) {
        std::ofstream svg(dir / "scenario.svg");
        bcmpc::write_svg(svg, log, scenario);
        if (!svg) return fail(kExitViolations, "output", "failed to write scenario.svg", {{"path", out_dir}});
    }
    std::cout << "wrote " << (dir / "run.csv").string() << ", " << (dir / "metrics.json").string()
              << (plot ? ", " + (dir / "scenario.svg").string() : std::string()) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Branching-course MPC collision avoidance simulator"};
    app.require_subcommand(1);

    std::string scenario_arg, out_dir;
    std::optional<std::string> run_params;
    std::optional<std::uint64_t> seed;
    bool plot = false;
    auto* run = app.add_subcommand("run", "Run a closed-loop scenario");
    run->add_option("--scenario", scenario_arg, "Built-in scenario name or scenario JSON path")->required();
    run->add_option("--params", run_params, "Parameter JSON path (defaults when omitted)");
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the scenario noise seed");
    run->add_flag("--plot", plot, "Also write scenario.svg");

    std::string validate_params;
    auto* val = app.add_subcommand("validate", "Check a parameter file without running");
    val->add_option("--params", validate_params, "Parameter JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(scenario_arg, run_params, out_dir, seed, plot);
        return cmd_validate(validate_params);
    } catch (const std::exception& e) {
        return fail(kExitConfig, "internal", e.what());
    }
}

// Command line front end: closed-loop scenario runs, parameter sweeps and
// trace metrics for the crane anti-sway simulation lab.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cranesim/metrics.hpp"
#include "cranesim/scenario.hpp"
#include "cranesim/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitAborted = 3;

std::string default_out_dir() {
    const char* env = std::getenv("CRANESIM_OUT");
    return env ? env : ".";
}

int run_simulate(const std::string& scenario_path, std::string out_dir, long long seed) {
    cranesim::ScenarioConfig cfg = cranesim::load_scenario_file(scenario_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    const cranesim::RunResult result = cranesim::run_scenario(cfg);

    fs::create_directories(out_dir);
    const fs::path trace_path = fs::path(out_dir) / (cfg.id + "_trace.csv");
    {
        std::ofstream os(trace_path);
        if (!os) {
            std::cerr << "error: cannot write " << trace_path << "\n";
            return kExitAborted;
        }
        cranesim::write_trace_csv(result, os);
    }
    std::cout << "trace: " << trace_path.string() << "\n";

    if (result.aborted) {
        std::cerr << "simulation aborted: " << result.abort_reason << "\n";
        return kExitAborted;
    }

    const cranesim::MetricsReport metrics = cranesim::evaluate_metrics(result);
    std::cout << cranesim::format_metrics(metrics);
    return metrics.not_converged() ? kExitNotConverged : kExitOk;
}

int run_sweep(const std::string& scenario_path, const std::string& grid_path,
              std::string out_dir) {
    const cranesim::ScenarioConfig base = cranesim::load_scenario_file(scenario_path);
    const cranesim::SweepGrid grid = cranesim::load_grid_file(grid_path);

    const auto cells = cranesim::sweep(base, grid);

    fs::create_directories(out_dir);
    const fs::path report_path = fs::path(out_dir) / (base.id + "_sweep.csv");
    {
        std::ofstream os(report_path);
        if (!os) {
            std::cerr << "error: cannot write " << report_path << "\n";
            return kExitAborted;
        }
        cranesim::write_sweep_report_csv(cells, os);
    }
    std::cout << "report: " << report_path.string() << "\n";

    bool any_bad = false;
    for (const auto& cell : cells) {
        if (!cell.metrics || !cell.error.empty() || cell.metrics->not_converged()) any_bad = true;
    }
    return any_bad ? kExitNotConverged : kExitOk;
}

int run_metrics(const std::string& trace_path) {
    std::ifstream is(trace_path);
    if (!is) {
        std::cerr << "error: cannot open " << trace_path << "\n";
        return kExitAborted;
    }
    const cranesim::RunResult result = cranesim::read_trace_csv(is);
    const cranesim::MetricsReport metrics = cranesim::evaluate_metrics(result);
    std::cout << cranesim::format_metrics(metrics);
    return metrics.not_converged() ? kExitNotConverged : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knuckle boom crane anti-sway simulation lab"};
    app.require_subcommand(1);

    std::string scenario_path, grid_path, trace_path;
    std::string out_dir = default_out_dir();
    long long seed = -1;

    auto* simulate = app.add_subcommand("simulate", "Run a closed-loop scenario");
    simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate->add_option("--out", out_dir, "Output directory (default $CRANESIM_OUT or .)");
    simulate->add_option("--seed", seed, "Override the scenario seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid over a scenario");
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario template file")->required();
    sweep_cmd->add_option("--grid", grid_path, "Grid file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory (default $CRANESIM_OUT or .)");

    auto* metrics_cmd = app.add_subcommand("metrics", "Evaluate metrics for a trace CSV");
    metrics_cmd->add_option("--trace", trace_path, "Trace CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(scenario_path, out_dir, seed);
        if (sweep_cmd->parsed()) return run_sweep(scenario_path, grid_path, out_dir);
        if (metrics_cmd->parsed()) return run_metrics(trace_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAborted;
    }
    return kExitOk;
}

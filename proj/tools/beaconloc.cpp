// beaconloc: run localization scenarios or parameter sweeps and write CSV results.
//
// Exit codes: 0 success, 2 configuration error, 3 output not writable.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "beaconloc/config.hpp"
#include "beaconloc/report.hpp"
#include "beaconloc/sim.hpp"
#include "beaconloc/sweep.hpp"

namespace fs = std::filesystem;
using namespace beaconloc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitOutput = 3;

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("beaconloc");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BEACONLOC_LOG")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory '" + dir + "'");
    return fs::path(dir);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + path.string() + "'");
    return out;
}

void check(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw OutputError("write failed for '" + path.string() + "'");
}

int run_single(const std::string& config_path, const std::string& out_dir, Preset preset,
               std::optional<std::uint64_t> seed) {
    ScenarioConfig config = parse_scenario(read_text_file(config_path), config_path, preset);
    if (seed) config.seed = *seed;
    const fs::path dir = prepare_out_dir(out_dir);

    spdlog::info("running {} with {} nodes, {} anchors, seed {}", to_string(config.method), config.n_static,
                 config.anchor_count(), config.seed);
    const MetricsReport report = run_scenario(config);
    spdlog::info("localized {:.3f} of nodes, ALE {:.4f} m, ALT {:.2f} s", report.localized_fraction, report.ale,
                 report.alt);
    if (!report.ale_defined) spdlog::warn("no node was localized; ALE reported as 0");

    const fs::path nodes_path = dir / "nodes.csv";
    auto nodes = open_output(nodes_path);
    write_node_csv(nodes, report);
    check(nodes, nodes_path);

    const fs::path summary_path = dir / "summary.csv";
    auto summary = open_output(summary_path);
    summary << kSummaryCsvHeader << '\n' << summary_row(report) << '\n';
    check(summary, summary_path);
    return 0;
}

int run_sweep(const std::string& sweep_path, const std::string& out_dir, Preset preset,
              std::optional<std::uint64_t> seed, unsigned jobs) {
    SweepSpec spec = parse_sweep(read_text_file(sweep_path), sweep_path, preset);
    if (seed) spec.seeds = {*seed};
    const auto cells = expand(spec);
    const fs::path dir = prepare_out_dir(out_dir);

    std::vector<ScenarioConfig> configs;
    std::vector<std::size_t> cell_of;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (const auto& run : cells[c].runs) {
            configs.push_back(run);
            cell_of.push_back(c);
        }
    }
    spdlog::info("sweep: {} cells, {} runs, {} jobs", cells.size(), configs.size(), jobs);

    const fs::path summary_path = dir / "summary.csv";
    const fs::path aggregate_path = dir / "aggregate.csv";
    auto summary = open_output(summary_path);
    auto aggregate_out = open_output(aggregate_path);
    summary << kSummaryCsvHeader << '\n';
    aggregate_out << kAggregateCsvHeader << '\n';
    check(summary, summary_path);
    check(aggregate_out, aggregate_path);

    std::vector<MetricsReport> pending;
    run_ordered(configs, jobs, [&](std::size_t i, MetricsReport&& report) {
        summary << summary_row(report) << '\n';
        check(summary, summary_path);
        report.nodes.clear();
        report.nodes.shrink_to_fit();
        pending.push_back(std::move(report));

        const std::size_t c = cell_of[i];
        if (pending.size() == cells[c].runs.size()) {
            aggregate_out << aggregate_row(aggregate(pending, cells[c].params)) << '\n';
            check(aggregate_out, aggregate_path);
            pending.clear();
            spdlog::debug("cell {}/{} done", c + 1, cells.size());
        }
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Range-free 3-D sensor localization simulator with mobile anchors"};
    std::string config_path;
    std::string sweep_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string preset_name = "desk";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    auto* config_opt = app.add_option("--config", config_path, "Scenario file (key = value)");
    auto* sweep_opt = app.add_option("--sweep", sweep_path, "Sweep file (scenario keys plus vary.* and seeds)");
    config_opt->excludes(sweep_opt);
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_option("--seed", seed, "Override the seed (replaces the seed list of a sweep)");
    app.add_option("--preset", preset_name, "Defaults before the file is applied")
        ->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    if (config_path.empty() == sweep_path.empty()) {
        std::cerr << "exactly one of --config or --sweep is required\n";
        return kExitConfig;
    }

    setup_logging();
    const Preset preset = *parse_preset(preset_name);
    try {
        if (!config_path.empty()) return run_single(config_path, out_dir, preset, seed);
        return run_sweep(sweep_path, out_dir, preset, seed, jobs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitOutput;
    }
}

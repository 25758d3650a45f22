#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "minigp/errors.hpp"
#include "minigp/harness.hpp"
#include "minigp/svg_plot.hpp"

namespace {

struct CommonFlags {
    int seed_count = 0;
    int workers = 0;
    std::string out_dir;
    double lambda = 0.0;
    bool lambda_set = false;
    double xi = -1.0;
};

void apply_flags(minigp::ExperimentConfig& config, const CommonFlags& flags) {
    if (flags.seed_count > 0) {
        config.seeds.clear();
        for (int s = 0; s < flags.seed_count; ++s) {
            config.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
    if (flags.lambda_set) config.lambda = flags.lambda;
    if (flags.xi >= 0.0) config.noise_std = flags.xi;
}

int run_command(const std::string& config_path, const CommonFlags& flags, bool full_grid) {
    minigp::ExperimentConfig config = minigp::load_config(config_path);
    apply_flags(config, flags);
    if (!full_grid) {
        // `run` executes a single combination: the first entry of each grid.
        config.bandwidth_sq.resize(1);
        config.C.resize(1);
        config.beta_scale.resize(1);
        config.epsilon_a.resize(1);
        config.epsilon_b.resize(1);
    }
    const int workers = flags.workers > 0
                            ? flags.workers
                            : static_cast<int>(std::thread::hardware_concurrency());
    const minigp::Manifest manifest = minigp::run_experiment(config, std::max(1, workers));
    std::cout << "wrote " << manifest.runs.size() << " run CSVs, "
              << manifest.summary_paths.size() << " summaries\n"
              << "report: " << manifest.report_path.string() << '\n'
              << "manifest: " << manifest.manifest_path.string() << '\n';
    if (manifest.best_combination >= 0) {
        std::cout << "best combination: " << manifest.best_combination << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GP black-box optimization benchmark harness (low-switching epoch loop)"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path;
    std::vector<std::string> summary_files;
    bool emit_default = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed-count", flags.seed_count, "replace seeds with 0..n-1");
        cmd->add_option("--workers", flags.workers, "worker threads (default: hardware)");
        cmd->add_option("--out-dir", flags.out_dir, "override the output directory");
        cmd->add_option("--lambda", flags.lambda, "explicit regularization lambda")
            ->each([&](const std::string&) { flags.lambda_set = true; });
        cmd->add_option("--xi", flags.xi, "noise standard deviation");
    };

    CLI::App* run = app.add_subcommand("run", "execute one hyperparameter combination");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_flag("--print-default-config", emit_default,
                  "print the built-in synthetic protocol config and exit");
    add_common(run);

    CLI::App* grid = app.add_subcommand("grid", "execute the full hyperparameter sweep");
    grid->add_option("config", config_path, "experiment config (JSON)")->required();
    add_common(grid);

    CLI::App* plot = app.add_subcommand("plot", "render SVG panels from summary JSONs");
    plot->add_option("summaries", summary_files, "per-combination summary.json files")
        ->required();
    plot->add_option("--out-dir", flags.out_dir, "plot output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (emit_default) {
                std::cout << minigp::default_config_json() << '\n';
                return 0;
            }
            return run_command(config_path, flags, false);
        }
        if (grid->parsed()) {
            return run_command(config_path, flags, true);
        }
        if (plot->parsed()) {
            std::vector<std::filesystem::path> paths(summary_files.begin(),
                                                     summary_files.end());
            const auto out =
                minigp::plot_summaries(paths, flags.out_dir.empty() ? "plots" : flags.out_dir);
            for (const auto& p : out) std::cout << "wrote " << p.string() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

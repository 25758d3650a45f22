#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "minigp/baselines.hpp"
#include "minigp/environment.hpp"
#include "minigp/metrics.hpp"
#include "minigp/mini_meta.hpp"

namespace minigp {

enum class Algorithm { MiniGpUcb, MiniGpEi, GpUcb, EpsilonGreedy, Uniform };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

enum class ScheduleKind { BayesUcb, FreqUcb, FreqEi };

// One experiment: a single algorithm on a single environment, swept over the
// hyperparameter grid and the seed list.
struct ExperimentConfig {
    // environment
    ObjectiveFamily objective = ObjectiveFamily::Ellipsoid;
    int dim = 3;
    int points_per_dim = 22;
    double lower = -5.0;
    double upper = 5.0;
    std::optional<double> noise_std;    // absent: 1% of the raw-value range
    bool scale_rewards = true;

    // algorithm
    Algorithm algorithm = Algorithm::MiniGpUcb;
    ScheduleKind schedule = ScheduleKind::BayesUcb;
    long T = 2000;
    std::vector<std::uint64_t> seeds;
    std::optional<double> lambda;       // absent: oracle rule (xi^2)

    // hyperparameter grids
    std::vector<double> bandwidth_sq{455.56};
    std::vector<double> C{1.1};
    std::vector<double> beta_scale{1.0};
    double delta = 0.1;
    double norm_bound = 1.0;            // F for freq-ucb
    std::vector<double> epsilon_a{1.0};
    std::vector<double> epsilon_b{0.5};

    std::string output_dir = "out";
    std::string name = "experiment";
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const std::string& text);
void validate_config(const ExperimentConfig& config);

/// The Appendix-style synthetic protocol (full bandwidth/C grids, 40 seeds).
std::string default_config_json();

// One point of the hyperparameter grid.
struct Combination {
    int id = 0;
    double bandwidth_sq = 0.0;
    double C = 0.0;
    double beta_scale = 1.0;
    double epsilon_a = 0.0;
    double epsilon_b = 0.0;
    std::string label;
};

std::vector<Combination> enumerate_combinations(const ExperimentConfig& config);

/// lambda = xi^2: under homoscedastic noise the per-candidate reward standard
/// deviation is constant, so its 90th percentile is xi itself.
double oracle_lambda(const Objective& objective, const CandidateGrid& grid, double xi);

struct RunRecord {
    int combination = 0;
    std::uint64_t seed = 0;
    std::filesystem::path csv_path;
    double final_average_regret = 0.0;
    double final_normalized_regret = 0.0;
    int unique_count = 0;
    long switches = 0; // epochs for GP loops, switch segments otherwise
    double wall_clock_seconds = 0.0;
    SwitchBoundCheck bound_check; // meaningful for mini variants only
};

struct Manifest {
    std::vector<RunRecord> runs;
    std::vector<std::filesystem::path> summary_paths;
    std::filesystem::path report_path;
    std::filesystem::path manifest_path;
    int best_combination = -1;
};

/// Executes every (combination, seed) pair, writes per-run step CSVs,
/// per-combination summary JSONs, and a best-combination report.
Manifest run_experiment(const ExperimentConfig& config, int workers = 1);

/// Single run with explicit parameters; the unit the harness dispatches.
RunResult execute_run(const ExperimentConfig& config, const Environment& env,
                      const Combination& combo, double lambda, std::uint64_t seed);

void write_step_csv(const std::filesystem::path& path, const RunResult& result,
                    const RegretTrace& regret);

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);

} // namespace minigp

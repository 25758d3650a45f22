// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier than the unit tests; expect a few minutes of wall time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "minigp/baselines.hpp"
#include "minigp/harness.hpp"
#include "minigp/metrics.hpp"
#include "minigp/mini_meta.hpp"
#include "minigp/posterior.hpp"
#include "support/oracles.hpp"

using namespace minigp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& details) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << details
              << std::endl;
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// criterion 1: exact reformulation + info gain vs dense oracles

void criterion_1() {
    const auto start = Clock::now();
    RngStream rng(20240817);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    const double lambdas[] = {0.1, 1.0, 10.0};

    double worst_mean = 0.0, worst_var = 0.0, worst_gain = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto rh = minigp::testing::random_history(rng, 12, 60);
        const double lambda = lambdas[rep % 3];
        const PosteriorModel model = PosteriorModel::fit(kernel, rh.history, lambda);
        for (int p = 0; p < 20; ++p) {
            Eigen::VectorXd x(3);
            for (int k = 0; k < 3; ++k) x[k] = -5.0 + 10.0 * rng.uniform01();
            const auto [m, v] =
                naive_posterior(rh.expanded_points, rh.expanded_feedback, lambda, x, kernel);
            worst_mean = std::max(worst_mean, minigp::testing::rel_err(model.mean(x), m));
            worst_var = std::max(worst_var, std::abs(model.variance(x) - v) / v);
        }
        const double xi = std::sqrt(lambda);
        const double gain = info_gain(kernel, rh.history, xi);
        const double dense =
            0.5 * minigp::testing::expanded_log_det(kernel, rh.expanded_points, xi);
        worst_gain = std::max(worst_gain, std::abs(gain - dense) / std::max(1e-12, dense));
    }
    const double elapsed = seconds_since(start);
    const bool ok =
        worst_mean <= 1e-8 && worst_var <= 1e-8 && worst_gain <= 1e-8 && elapsed < 10.0;
    std::ostringstream os;
    os << "exact reformulation over 200 duplicated histories: max rel err mean="
       << worst_mean << " var=" << worst_var << " info_gain=" << worst_gain << " ("
       << elapsed << " s)";
    report(1, ok, os.str());
}

// ---------------------------------------------------------------------------
// criteria 2 + 3: within-batch ratio and switch bound on Ellipsoid runs

void criteria_2_3() {
    const auto start = Clock::now();
    const CandidateGrid grid = build_grid(3, 22, -5.0, 5.0);
    const double xi = default_noise_std(ObjectiveFamily::Ellipsoid, grid);
    const Environment env = make_environment(ObjectiveFamily::Ellipsoid, grid, xi);
    const KernelSpec kernel{KernelFamily::Gaussian, std::sqrt(455.56)};
    const double C = 1.1;
    const double lambda = oracle_lambda(env.objective, grid, env.scaled_noise_std());
    const BetaSchedule schedule =
        BetaSchedule::bayesian_ucb(static_cast<double>(grid.size()), 0.1);
    const long T = 2000;

    RngStream probe_rng(4242);
    std::vector<Eigen::VectorXd> probes;
    for (int p = 0; p < 50; ++p) {
        probes.push_back(grid.point(probe_rng.uniform_index(grid.size())));
    }

    double worst_ratio = 0.0;
    long checked_epochs = 0;
    bool bound_ok = true, unique_ok = true;
    std::ostringstream bound_detail;

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RunResult run = run_mini(env, kernel, schedule, lambda, C, T, seed);

        // post hoc oracle: refit on truncated prefixes inside each batch
        UniqueHistory prefix;
        long t = 0;
        for (const auto& epoch : run.epochs) {
            const PosteriorModel at_start = PosteriorModel::fit(kernel, prefix, lambda);
            std::vector<double> start_std(probes.size());
            for (std::size_t p = 0; p < probes.size(); ++p) {
                start_std[p] = std::sqrt(at_start.variance(probes[p]));
            }
            for (long s = 0; s < epoch.batch_length; ++s) {
                const double y =
                    env.scaling.apply(run.reward[static_cast<std::size_t>(t + s)]);
                prefix.add(grid.candidate(epoch.candidate_index),
                           std::span<const double>(&y, 1));
                if (epoch.clamped) continue;
                const PosteriorModel truncated = PosteriorModel::fit(kernel, prefix, lambda);
                for (std::size_t p = 0; p < probes.size(); ++p) {
                    const double ratio =
                        start_std[p] / std::sqrt(truncated.variance(probes[p]));
                    worst_ratio = std::max(worst_ratio, ratio);
                }
            }
            if (!epoch.clamped) ++checked_epochs;
            t += epoch.batch_length;
        }

        const SwitchBoundCheck check =
            check_switch_bound(run, kernel, C, lambda, env.scaled_noise_std());
        if (!check.ok) bound_ok = false;
        if (run.unique_count.back() > check.switches) unique_ok = false;
        if (seed == 0) {
            bound_detail << "h=" << check.switches << " gamma_T=" << check.gamma
                         << " bound=" << check.bound << " q_T=" << run.unique_count.back();
        }
    }
    const double elapsed = seconds_since(start);

    {
        std::ostringstream os;
        os << "within-batch ratio over 5 Ellipsoid runs (" << checked_epochs
           << " non-clamped epochs, 50 probes): max sigma ratio = " << worst_ratio
           << " <= C + 1e-6 = " << C + 1e-6 << " (" << elapsed << " s)";
        report(2, worst_ratio <= C + 1e-6 && elapsed < 300.0, os.str());
    }
    {
        std::ostringstream os;
        os << "switch bound h <= (4C^2/(C^2-1))(1+kappa^2/lambda) gamma_T and q_T <= h; "
           << bound_detail.str();
        report(3, bound_ok && unique_ok, os.str());
    }
}

// ---------------------------------------------------------------------------
// criteria 4-6: regret sanity, unique-candidate economy, computational scaling

struct AlgSummary {
    double mean_norm_regret = 0.0;
    double mean_avg_regret = 0.0;
    double mean_unique = 0.0;
    double mean_wall = 0.0;
    std::string combo_label;
};

AlgSummary best_combo_summary(const ExperimentConfig& base, Algorithm alg,
                              const fs::path& out_dir) {
    ExperimentConfig config = base;
    config.algorithm = alg;
    // published schedule per algorithm: the mini variants take the
    // logdet-based forms (Theta constant exposed as beta_scale and tuned by
    // the grid search), the sequential baseline the closed-form Bayesian one
    switch (alg) {
        case Algorithm::MiniGpUcb: config.schedule = ScheduleKind::FreqUcb; break;
        case Algorithm::MiniGpEi: config.schedule = ScheduleKind::FreqEi; break;
        default:
            config.schedule = ScheduleKind::BayesUcb;
            config.beta_scale = {1.0}; // the Bayesian beta has no free constant
            break;
    }
    config.name =
        std::string(algorithm_name(alg)) + "-" + objective_name(config.objective);
    config.output_dir = (out_dir / config.name).string();
    const Manifest manifest = run_experiment(config, 2);

    std::map<int, std::vector<const RunRecord*>> by_combo;
    for (const auto& rec : manifest.runs) by_combo[rec.combination].push_back(&rec);
    const auto& best = by_combo.at(manifest.best_combination);

    AlgSummary s;
    for (const auto* rec : best) {
        s.mean_norm_regret += rec->final_normalized_regret;
        s.mean_avg_regret += rec->final_average_regret;
        s.mean_unique += rec->unique_count;
        s.mean_wall += rec->wall_clock_seconds;
    }
    const auto n = static_cast<double>(best.size());
    s.mean_norm_regret /= n;
    s.mean_avg_regret /= n;
    s.mean_unique /= n;
    s.mean_wall /= n;
    for (const auto& combo : enumerate_combinations(config)) {
        if (combo.id == manifest.best_combination) s.combo_label = combo.label;
    }
    return s;
}

void criteria_4_5_6(const fs::path& out_dir) {
    ExperimentConfig base;
    base.dim = 3;
    base.points_per_dim = 22;
    base.lower = -5.0;
    base.upper = 5.0;
    base.T = 2000;
    base.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    base.bandwidth_sq = {455.56, 500.0}; // the region the grid search selects
    base.C = {1.1, 1.2};
    base.beta_scale = {0.25, 0.5, 1.0};
    base.norm_bound = 1.0;

    std::map<std::string, std::map<std::string, AlgSummary>> table;
    for (const ObjectiveFamily objective :
         {ObjectiveFamily::Ellipsoid, ObjectiveFamily::Rastrigin}) {
        base.objective = objective;
        for (const Algorithm alg : {Algorithm::MiniGpUcb, Algorithm::MiniGpEi,
                                    Algorithm::GpUcb, Algorithm::Uniform}) {
            table[objective_name(objective)][algorithm_name(alg)] =
                best_combo_summary(base, alg, out_dir);
        }
    }

    // criterion 4
    bool regret_ok = true;
    std::ostringstream os4;
    for (const auto& [objective, algs] : table) {
        const AlgSummary& mu = algs.at("mini-gp-ucb");
        const AlgSummary& me = algs.at("mini-gp-ei");
        const AlgSummary& gu = algs.at("gp-ucb");
        regret_ok = regret_ok && mu.mean_norm_regret <= 0.5 && me.mean_norm_regret <= 0.5 &&
                    mu.mean_avg_regret <= 1.5 * gu.mean_avg_regret;
        os4 << objective << "{mini-ucb=" << mu.mean_norm_regret
            << " mini-ei=" << me.mean_norm_regret << " gp-ucb=" << gu.mean_norm_regret
            << " ratio=" << mu.mean_avg_regret / gu.mean_avg_regret << "} ";
    }
    report(4, regret_ok,
           "best-combo mean normalized R_T/T <= 0.5 and mini-ucb within 1.5x of gp-ucb: " +
               os4.str());

    // criterion 5
    bool unique_ok = true;
    std::ostringstream os5;
    for (const auto& [objective, algs] : table) {
        const double cap = 0.1 * static_cast<double>(base.T);
        const AlgSummary& mu = algs.at("mini-gp-ucb");
        const AlgSummary& me = algs.at("mini-gp-ei");
        const AlgSummary& gu = algs.at("gp-ucb");
        unique_ok = unique_ok && mu.mean_unique <= cap && me.mean_unique <= cap &&
                    mu.mean_unique <= gu.mean_unique && me.mean_unique <= gu.mean_unique;
        os5 << objective << "{q: mini-ucb=" << mu.mean_unique
            << " mini-ei=" << me.mean_unique << " gp-ucb=" << gu.mean_unique << "} ";
    }
    report(5, unique_ok, "mean q_T <= 0.1 T and mini q_T <= gp-ucb q_T: " + os5.str());

    // criterion 6a: wall-clock on the 10648-candidate grid
    const AlgSummary& mini_e = table.at("ellipsoid").at("mini-gp-ucb");
    const AlgSummary& ucb_e = table.at("ellipsoid").at("gp-ucb");
    const double ratio = mini_e.mean_wall / ucb_e.mean_wall;

    // criterion 6b: refit cost regression exponent over synthetic histories
    RngStream rng(31337);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    std::vector<double> log_q, log_t;
    for (const int q : {25, 50, 100, 200}) {
        UniqueHistory history;
        for (int i = 0; i < q; ++i) {
            Eigen::VectorXd x(3);
            for (int k = 0; k < 3; ++k) x[k] = -5.0 + 10.0 * rng.uniform01();
            std::vector<double> ys(1 + rng.uniform_index(20));
            for (auto& y : ys) y = rng.normal();
            history.add(Candidate{i, x}, ys);
        }
        const Eigen::MatrixXd gram = kernel_gram(kernel, history.unique_points());

        // calibrate repetitions to ~30 ms per sample, then take the best of 5
        auto time_fits = [&](int reps) {
            const auto t0 = Clock::now();
            for (int r = 0; r < reps; ++r) {
                const PosteriorModel m =
                    PosteriorModel::fit_from_gram(kernel, history, gram, 1e-3);
                (void)m;
            }
            return seconds_since(t0) / reps;
        };
        const double estimate = time_fits(3);
        const int reps = std::max(3, static_cast<int>(0.03 / std::max(estimate, 1e-7)));
        double best = 1e300;
        for (int sample = 0; sample < 5; ++sample) best = std::min(best, time_fits(reps));
        log_q.push_back(std::log(static_cast<double>(q)));
        log_t.push_back(std::log(best));
    }
    const auto n = static_cast<double>(log_q.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_q.size(); ++i) {
        sx += log_q[i];
        sy += log_t[i];
        sxx += log_q[i] * log_q[i];
        sxy += log_q[i] * log_t[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    std::ostringstream os6;
    os6 << "wall-clock mini/gp-ucb = " << mini_e.mean_wall << "/" << ucb_e.mean_wall
        << " = " << ratio << " (<= 0.25); refit exponent over q in {25,50,100,200} = "
        << slope << " (in [2.5, 3.5])";
    report(6, ratio <= 0.25 && slope >= 2.5 && slope <= 3.5, os6.str());
}

// ---------------------------------------------------------------------------
// criterion 7: byte-identical step CSVs on rerun (timing column excluded)

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_last_column(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
}

void criterion_7(const fs::path& out_dir) {
    bool ok = true;
    std::string note;
    for (const char* algorithm : {"uniform", "mini-gp-ucb"}) {
        const std::string text = std::string(R"({
  "name": "determinism",
  "environment": {"objective": "rastrigin", "dim": 3, "points_per_dim": 22,
                  "lower": -5.0, "upper": 5.0},
  "algorithm": ")") + algorithm + R"(",
  "T": 400,
  "seeds": [0, 1],
  "hyperparameters": {"bandwidth_sq": [455.56], "C": [1.1]},
  "output_dir": ""
})";
        ExperimentConfig config = parse_config_json(text);
        config.output_dir = (out_dir / (std::string("det-a-") + algorithm)).string();
        const Manifest first = run_experiment(config, 2);
        config.output_dir = (out_dir / (std::string("det-b-") + algorithm)).string();
        const Manifest second = run_experiment(config, 1);
        for (std::size_t i = 0; i < first.runs.size(); ++i) {
            const std::string a = strip_last_column(read_file(first.runs[i].csv_path));
            const std::string b = strip_last_column(read_file(second.runs[i].csv_path));
            if (a != b) {
                ok = false;
                note = " mismatch in " + first.runs[i].csv_path.filename().string();
            }
        }
    }
    report(7, ok,
           "rerun with identical config/seed reproduces step CSVs byte-for-byte "
           "(elapsed_seconds column excluded; wall-clock is not replayable)" +
               note);
}

// ---------------------------------------------------------------------------
// criterion 8: all-clamped run_mini reproduces run_gp_ucb exactly

void criterion_8() {
    const CandidateGrid grid = build_grid(2, 10, -5.0, 5.0);
    const double xi = default_noise_std(ObjectiveFamily::Ellipsoid, grid);
    const Environment env = make_environment(ObjectiveFamily::Ellipsoid, grid, xi);
    const KernelSpec kernel{KernelFamily::Gaussian, 4.0};
    const BetaSchedule schedule =
        BetaSchedule::bayesian_ucb(static_cast<double>(grid.size()), 0.1);
    const double lambda = 1.0; // keeps sigma^2/lambda >= 1/(T+1) >> C^2 - 1
    const double C = 1.0 + 1e-9;
    const long T = 300;

    bool ok = true;
    for (const std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
        const RunResult mini = run_mini(env, kernel, schedule, lambda, C, T, seed);
        const RunResult ucb = run_gp_ucb(env, kernel, schedule, lambda, T, seed);
        ok = ok && mini.chosen_index == ucb.chosen_index && mini.reward == ucb.reward &&
             mini.unique_count == ucb.unique_count &&
             mini.epochs.size() == static_cast<std::size_t>(T);
        for (const auto& epoch : mini.epochs) ok = ok && epoch.batch_length == 1;
    }
    report(8, ok,
           "run_mini with every batch clamped to 1 reproduces run_gp_ucb traces exactly "
           "(3 seeds, T=300)");
}

} // namespace

int main() {
    const auto start = Clock::now();
    const fs::path out_dir = fs::temp_directory_path() / "minigp-acceptance";
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);

    criterion_1();
    criteria_2_3();
    criteria_4_5_6(out_dir);
    criterion_7(out_dir);
    criterion_8();

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << failures << " failures, " << seconds_since(start) << " s total)"
              << std::endl;
    return failures;
}

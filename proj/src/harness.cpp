#include "minigp/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "minigp/errors.hpp"

namespace minigp {

using nlohmann::json;

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::MiniGpUcb: return "mini-gp-ucb";
        case Algorithm::MiniGpEi: return "mini-gp-ei";
        case Algorithm::GpUcb: return "gp-ucb";
        case Algorithm::EpsilonGreedy: return "epsilon-greedy";
        case Algorithm::Uniform: return "uniform";
    }
    return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "mini-gp-ucb") return Algorithm::MiniGpUcb;
    if (name == "mini-gp-ei") return Algorithm::MiniGpEi;
    if (name == "gp-ucb") return Algorithm::GpUcb;
    if (name == "epsilon-greedy") return Algorithm::EpsilonGreedy;
    if (name == "uniform") return Algorithm::Uniform;
    throw ConfigError("unknown algorithm: " + name);
}

namespace {

const char* schedule_name(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::BayesUcb: return "bayes-ucb";
        case ScheduleKind::FreqUcb: return "freq-ucb";
        case ScheduleKind::FreqEi: return "freq-ei";
    }
    return "unknown";
}

ScheduleKind schedule_from_name(const std::string& name) {
    if (name == "bayes-ucb") return ScheduleKind::BayesUcb;
    if (name == "freq-ucb") return ScheduleKind::FreqUcb;
    if (name == "freq-ei") return ScheduleKind::FreqEi;
    throw ConfigError("unknown schedule: " + name);
}

std::vector<double> as_list(const json& j) {
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(v.get<double>());
    } else {
        out.push_back(j.get<double>());
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

ExperimentConfig parse_config_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig config;

    if (j.contains("name")) config.name = j.at("name").get<std::string>();
    const json& env = j.at("environment");
    config.objective = objective_from_name(env.at("objective").get<std::string>());
    config.dim = env.value("dim", 3);
    config.points_per_dim = env.value("points_per_dim", 22);
    config.lower = env.value("lower", -5.0);
    config.upper = env.value("upper", 5.0);
    if (env.contains("noise_std") && env.at("noise_std").is_number()) {
        config.noise_std = env.at("noise_std").get<double>();
    }
    if (j.contains("reward_scaling")) {
        const auto mode = j.at("reward_scaling").get<std::string>();
        if (mode == "none") {
            config.scale_rewards = false;
        } else if (mode != "oracle-range") {
            throw ConfigError("unknown reward_scaling: " + mode);
        }
    }

    config.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    switch (config.algorithm) {
        case Algorithm::MiniGpUcb: config.schedule = ScheduleKind::FreqUcb; break;
        case Algorithm::MiniGpEi: config.schedule = ScheduleKind::FreqEi; break;
        case Algorithm::GpUcb: config.schedule = ScheduleKind::BayesUcb; break;
        default: break;
    }
    if (j.contains("schedule")) {
        config.schedule = schedule_from_name(j.at("schedule").get<std::string>());
    }
    config.T = j.at("T").get<long>();
    if (j.contains("seeds")) {
        for (const auto& s : j.at("seeds")) config.seeds.push_back(s.get<std::uint64_t>());
    } else if (j.contains("seed_count")) {
        for (std::uint64_t s = 0; s < j.at("seed_count").get<std::uint64_t>(); ++s) {
            config.seeds.push_back(s);
        }
    }
    if (j.contains("lambda") && j.at("lambda").is_number()) {
        config.lambda = j.at("lambda").get<double>();
    }

    if (j.contains("hyperparameters")) {
        const json& hp = j.at("hyperparameters");
        if (hp.contains("bandwidth_sq")) config.bandwidth_sq = as_list(hp.at("bandwidth_sq"));
        if (hp.contains("C")) config.C = as_list(hp.at("C"));
        if (hp.contains("beta_scale")) config.beta_scale = as_list(hp.at("beta_scale"));
        if (hp.contains("delta")) config.delta = hp.at("delta").get<double>();
        if (hp.contains("F")) config.norm_bound = hp.at("F").get<double>();
        if (hp.contains("epsilon_a")) config.epsilon_a = as_list(hp.at("epsilon_a"));
        if (hp.contains("epsilon_b")) config.epsilon_b = as_list(hp.at("epsilon_b"));
    }
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();

    validate_config(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

void validate_config(const ExperimentConfig& config) {
    if (config.T < 1) throw ConfigError("config: T must be >= 1");
    if (config.seeds.empty()) throw ConfigError("config: seed list is empty");
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
        for (std::size_t k = i + 1; k < config.seeds.size(); ++k) {
            if (config.seeds[i] == config.seeds[k]) {
                throw ConfigError("config: seeds must be distinct");
            }
        }
    }
    if (config.bandwidth_sq.empty() || config.C.empty() || config.beta_scale.empty() ||
        config.epsilon_a.empty() || config.epsilon_b.empty()) {
        throw ConfigError("config: hyperparameter grids must be non-empty");
    }
    for (const double b : config.bandwidth_sq) {
        if (!(b > 0.0)) throw ConfigError("config: bandwidth_sq entries must be positive");
    }
    for (const double c : config.C) {
        if (!(c > 1.0)) throw ConfigError("config: C entries must be > 1");
    }
    if (config.noise_std && *config.noise_std < 0.0) {
        throw ConfigError("config: noise_std must be non-negative");
    }
    if (config.lambda && !(*config.lambda > 0.0)) {
        throw ConfigError("config: lambda must be positive");
    }
}

std::string default_config_json() {
    // Appendix-scale synthetic protocol: full bandwidth and C grids, 40 seeds.
    return R"({
  "name": "synthetic-ellipsoid",
  "environment": {
    "objective": "ellipsoid",
    "dim": 3,
    "points_per_dim": 22,
    "lower": -5.0,
    "upper": 5.0
  },
  "algorithm": "mini-gp-ucb",
  "schedule": "freq-ucb",
  "T": 2000,
  "seed_count": 40,
  "hyperparameters": {
    "bandwidth_sq": [100.00, 144.45, 188.89, 233.33, 277.78,
                     322.22, 366.67, 411.11, 455.56, 500.00],
    "C": [1.1, 1.2],
    "beta_scale": [0.5],
    "F": 1.0,
    "delta": 0.1,
    "epsilon_a": [0.1, 1.0, 10.0],
    "epsilon_b": [0.3333333333333333, 0.5, 1.0, 2.0]
  },
  "output_dir": "out"
})";
}

std::vector<Combination> enumerate_combinations(const ExperimentConfig& config) {
    std::vector<Combination> combos;
    int id = 0;
    auto push = [&](Combination c) {
        c.id = id++;
        combos.push_back(std::move(c));
    };

    switch (config.algorithm) {
        case Algorithm::MiniGpUcb:
        case Algorithm::MiniGpEi:
            for (const double bw : config.bandwidth_sq) {
                for (const double c : config.C) {
                    for (const double s : config.beta_scale) {
                        Combination combo;
                        combo.bandwidth_sq = bw;
                        combo.C = c;
                        combo.beta_scale = s;
                        combo.label = "bw2=" + format_double(bw) + ",C=" + format_double(c) +
                                      ",scale=" + format_double(s);
                        push(std::move(combo));
                    }
                }
            }
            break;
        case Algorithm::GpUcb:
            for (const double bw : config.bandwidth_sq) {
                for (const double s : config.beta_scale) {
                    Combination combo;
                    combo.bandwidth_sq = bw;
                    combo.beta_scale = s;
                    combo.label = "bw2=" + format_double(bw) + ",scale=" + format_double(s);
                    push(std::move(combo));
                }
            }
            break;
        case Algorithm::EpsilonGreedy:
            for (const double a : config.epsilon_a) {
                for (const double b : config.epsilon_b) {
                    Combination combo;
                    combo.epsilon_a = a;
                    combo.epsilon_b = b;
                    combo.label = "a=" + format_double(a) + ",b=" + format_double(b);
                    push(std::move(combo));
                }
            }
            break;
        case Algorithm::Uniform: {
            Combination combo;
            combo.label = "uniform";
            push(std::move(combo));
            break;
        }
    }
    return combos;
}

double oracle_lambda(const Objective& objective, const CandidateGrid& grid, double xi) {
    (void)objective;
    (void)grid;
    if (!(xi > 0.0)) {
        throw ConfigError("oracle lambda needs xi > 0; pass an explicit lambda instead");
    }
    return xi * xi;
}

namespace {

BetaSchedule make_schedule(const ExperimentConfig& config, const Combination& combo,
                           Eigen::Index card) {
    switch (config.schedule) {
        case ScheduleKind::BayesUcb:
            return BetaSchedule::bayesian_ucb(static_cast<double>(card), config.delta);
        case ScheduleKind::FreqUcb:
            return BetaSchedule::frequentist_ucb(config.norm_bound, config.delta,
                                                 combo.beta_scale);
        case ScheduleKind::FreqEi:
            return BetaSchedule::frequentist_ei(config.delta, combo.beta_scale);
    }
    throw std::logic_error("make_schedule: unhandled kind");
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const std::size_t count = std::min(static_cast<std::size_t>(workers), n);
    threads.reserve(count);
    for (std::size_t w = 0; w < count; ++w) threads.emplace_back(body);
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

RunResult execute_run(const ExperimentConfig& config, const Environment& env,
                      const Combination& combo, double lambda, std::uint64_t seed) {
    switch (config.algorithm) {
        case Algorithm::MiniGpUcb:
        case Algorithm::MiniGpEi: {
            const KernelSpec kernel{KernelFamily::Gaussian, std::sqrt(combo.bandwidth_sq)};
            const BetaSchedule schedule = make_schedule(config, combo, env.grid.size());
            return run_mini(env, kernel, schedule, lambda, combo.C, config.T, seed);
        }
        case Algorithm::GpUcb: {
            const KernelSpec kernel{KernelFamily::Gaussian, std::sqrt(combo.bandwidth_sq)};
            const BetaSchedule schedule = make_schedule(config, combo, env.grid.size());
            return run_gp_ucb(env, kernel, schedule, lambda, config.T, seed);
        }
        case Algorithm::EpsilonGreedy:
            return run_epsilon_greedy(env, EpsilonSchedule{combo.epsilon_a, combo.epsilon_b},
                                      config.T, seed);
        case Algorithm::Uniform:
            return run_uniform(env, config.T, seed);
    }
    throw std::logic_error("execute_run: unhandled algorithm");
}

void write_step_csv(const std::filesystem::path& path, const RunResult& result,
                    const RegretTrace& regret) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write CSV: " + path.string());
    out << "step,epoch,candidate_index,reward,instantaneous_regret,"
           "cumulative_regret,q_t,h_t,elapsed_seconds\n";

    const long T = result.total_steps();
    std::vector<int> epoch_of_step(static_cast<std::size_t>(T), 0);
    for (const auto& epoch : result.epochs) {
        for (long s = 0; s < epoch.batch_length; ++s) {
            const long step = epoch.start_step - 1 + s;
            if (step < T) epoch_of_step[static_cast<std::size_t>(step)] = epoch.epoch_index;
        }
    }
    if (result.epochs.empty()) {
        for (long t = 0; t < T; ++t) epoch_of_step[static_cast<std::size_t>(t)] =
            static_cast<int>(t + 1);
    }

    for (long t = 0; t < T; ++t) {
        const auto i = static_cast<std::size_t>(t);
        out << (t + 1) << ',' << epoch_of_step[i] << ',' << result.chosen_index[i] << ','
            << format_double(result.reward[i]) << ',' << format_double(regret.instantaneous[t])
            << ',' << format_double(regret.cumulative[t]) << ',' << result.unique_count[i]
            << ',' << result.segment_count[i] << ','
            << format_double(result.elapsed_seconds[i]) << '\n';
    }
}

namespace {

json curve_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd int_curve(const std::vector<int>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

Eigen::VectorXd double_curve(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

json summary_curves(const std::vector<Eigen::VectorXd>& curves) {
    json out;
    if (curves.size() >= 2) {
        const CurveSummary s = summarize_curves(curves);
        out["mean"] = curve_to_json(s.mean);
        out["halfwidth"] = curve_to_json(s.halfwidth);
    } else {
        out["mean"] = curve_to_json(curves.front());
        out["halfwidth"] = curve_to_json(Eigen::VectorXd::Zero(curves.front().size()));
    }
    return out;
}

} // namespace

Manifest run_experiment(const ExperimentConfig& config, int workers) {
    validate_config(config);
    namespace fs = std::filesystem;
    const fs::path out_dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        throw ConfigError("cannot create output directory: " + out_dir.string());
    }

    const CandidateGrid grid =
        build_grid(config.dim, config.points_per_dim, config.lower, config.upper);
    const double xi = config.noise_std ? *config.noise_std
                                       : default_noise_std(config.objective, grid);
    const Environment env = make_environment(config.objective, grid, xi, config.scale_rewards);
    const bool gp_based = config.algorithm == Algorithm::MiniGpUcb ||
                          config.algorithm == Algorithm::MiniGpEi ||
                          config.algorithm == Algorithm::GpUcb;
    double lambda = 1.0;
    if (gp_based) {
        lambda = config.lambda ? *config.lambda
                               : oracle_lambda(env.objective, grid, env.scaled_noise_std());
    }

    // Uniform reference for regret normalization, same seeds and budget.
    std::vector<Eigen::VectorXd> uniform_avg(config.seeds.size());
    parallel_for(config.seeds.size(), workers, [&](std::size_t i) {
        const RunResult r = run_uniform(env, config.T, config.seeds[i]);
        uniform_avg[i] = compute_regret(r, env.objective, grid).average;
    });
    Eigen::VectorXd uniform_mean = Eigen::VectorXd::Zero(config.T);
    for (const auto& c : uniform_avg) uniform_mean += c;
    uniform_mean /= static_cast<double>(uniform_avg.size());

    const std::vector<Combination> combos = enumerate_combinations(config);
    const std::size_t n_tasks = combos.size() * config.seeds.size();
    std::vector<RunRecord> records(n_tasks);
    std::vector<RunResult> results(n_tasks);
    std::vector<RegretTrace> regrets(n_tasks);

    parallel_for(n_tasks, workers, [&](std::size_t task) {
        const auto ci = task / config.seeds.size();
        const auto si = task % config.seeds.size();
        const Combination& combo = combos[ci];
        const std::uint64_t seed = config.seeds[si];

        RunResult result = execute_run(config, env, combo, lambda, seed);
        RegretTrace regret = compute_regret(result, env.objective, grid);

        RunRecord rec;
        rec.combination = combo.id;
        rec.seed = seed;
        rec.final_average_regret = regret.average[config.T - 1];
        rec.final_normalized_regret = regret.average[config.T - 1] / uniform_mean[config.T - 1];
        rec.unique_count = result.unique_count.back();
        rec.switches = result.epochs.empty()
                           ? static_cast<long>(result.segment_count.back())
                           : static_cast<long>(result.epochs.size());
        rec.wall_clock_seconds = result.elapsed_seconds.back();
        if (config.algorithm == Algorithm::MiniGpUcb || config.algorithm == Algorithm::MiniGpEi) {
            const KernelSpec kernel{KernelFamily::Gaussian, std::sqrt(combo.bandwidth_sq)};
            rec.bound_check = check_switch_bound(result, kernel, combo.C, lambda,
                                                 env.scaled_noise_std());
        }
        records[task] = std::move(rec);
        results[task] = std::move(result);
        regrets[task] = std::move(regret);
    });

    // Serial write pass, manifest order.
    Manifest manifest;
    manifest.runs.reserve(n_tasks);
    json summaries_index = json::array();
    double best_value = std::numeric_limits<double>::infinity();

    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        const Combination& combo = combos[ci];
        std::vector<Eigen::VectorXd> normalized, qt, ht, wall;
        json per_seed = json::array();
        double mean_final = 0.0;

        for (std::size_t si = 0; si < config.seeds.size(); ++si) {
            const std::size_t task = ci * config.seeds.size() + si;
            RunRecord& rec = records[task];
            const RunResult& result = results[task];
            const RegretTrace& regret = regrets[task];

            std::ostringstream name;
            name << config.name << "-c" << combo.id << "-seed" << config.seeds[si] << ".csv";
            rec.csv_path = out_dir / name.str();
            write_step_csv(rec.csv_path, result, regret);

            normalized.push_back(regret.average.cwiseQuotient(uniform_mean));
            qt.push_back(int_curve(result.unique_count));
            ht.push_back(int_curve(result.segment_count));
            wall.push_back(double_curve(result.elapsed_seconds));
            mean_final += rec.final_average_regret;

            json seed_entry;
            seed_entry["seed"] = rec.seed;
            seed_entry["csv"] = rec.csv_path.filename().string();
            seed_entry["final_average_regret"] = rec.final_average_regret;
            seed_entry["final_normalized_regret"] = rec.final_normalized_regret;
            seed_entry["unique_count"] = rec.unique_count;
            seed_entry["switches"] = rec.switches;
            seed_entry["wall_clock_seconds"] = rec.wall_clock_seconds;
            if (rec.bound_check.bound > 0.0) {
                seed_entry["switch_bound"] = {{"switches", rec.bound_check.switches},
                                              {"gamma", rec.bound_check.gamma},
                                              {"bound", rec.bound_check.bound},
                                              {"ok", rec.bound_check.ok}};
                if (!rec.bound_check.ok) {
                    seed_entry["switch_bound_warning"] =
                        "switch count exceeds the Lemma-style bound";
                }
            }
            per_seed.push_back(std::move(seed_entry));
            manifest.runs.push_back(rec);
        }
        mean_final /= static_cast<double>(config.seeds.size());

        json summary;
        summary["schema_version"] = 1;
        summary["experiment"] = config.name;
        summary["algorithm"] = algorithm_name(config.algorithm);
        summary["schedule"] = schedule_name(config.schedule);
        summary["objective"] = objective_name(config.objective);
        summary["T"] = config.T;
        summary["noise_std"] = xi;
        summary["lambda"] = gp_based ? json(lambda) : json(nullptr);
        summary["reward_scaling"] = config.scale_rewards ? "oracle-range" : "none";
        summary["combination"] = {{"id", combo.id},
                                  {"label", combo.label},
                                  {"bandwidth_sq", combo.bandwidth_sq},
                                  {"C", combo.C},
                                  {"beta_scale", combo.beta_scale},
                                  {"epsilon_a", combo.epsilon_a},
                                  {"epsilon_b", combo.epsilon_b}};
        summary["confidence_interval"] = "normal approximation, 1.96*sd/sqrt(n)";
        summary["mean_final_average_regret"] = mean_final;
        summary["uniform_mean_average_regret"] = curve_to_json(uniform_mean);
        summary["curves"] = {{"normalized_average_regret", summary_curves(normalized)},
                             {"unique_count", summary_curves(qt)},
                             {"switch_count", summary_curves(ht)},
                             {"wall_clock_seconds", summary_curves(wall)}};
        summary["seeds"] = std::move(per_seed);

        std::ostringstream sname;
        sname << config.name << "-c" << combo.id << "-summary.json";
        const fs::path spath = out_dir / sname.str();
        std::ofstream sout(spath, std::ios::binary);
        sout << summary.dump(2) << '\n';
        manifest.summary_paths.push_back(spath);

        summaries_index.push_back({{"combination", combo.id},
                                   {"label", combo.label},
                                   {"summary", spath.filename().string()},
                                   {"mean_final_average_regret", mean_final}});
        if (mean_final < best_value) {
            best_value = mean_final;
            manifest.best_combination = combo.id;
        }
    }

    json report;
    report["schema_version"] = 1;
    report["experiment"] = config.name;
    report["algorithm"] = algorithm_name(config.algorithm);
    report["selection_rule"] = "lowest mean final average regret R_T/T";
    report["best_combination"] = manifest.best_combination;
    report["combinations"] = std::move(summaries_index);
    manifest.report_path = out_dir / (config.name + "-report.json");
    {
        std::ofstream rout(manifest.report_path, std::ios::binary);
        rout << report.dump(2) << '\n';
    }

    json mf;
    mf["schema_version"] = 1;
    mf["experiment"] = config.name;
    mf["report"] = manifest.report_path.filename().string();
    json run_list = json::array();
    for (const auto& rec : manifest.runs) {
        run_list.push_back({{"combination", rec.combination},
                            {"seed", rec.seed},
                            {"csv", rec.csv_path.filename().string()}});
    }
    mf["runs"] = std::move(run_list);
    manifest.manifest_path = out_dir / (config.name + "-manifest.json");
    {
        std::ofstream mout(manifest.manifest_path, std::ios::binary);
        mout << mf.dump(2) << '\n';
    }
    return manifest;
}

} // namespace minigp

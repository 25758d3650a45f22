#include "minigp/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "minigp/errors.hpp"

namespace minigp {

double EpsilonSchedule::value(long t) const {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("epsilon schedule: a, b must be positive");
    if (t < 1) throw std::invalid_argument("epsilon schedule: t must be >= 1");
    return std::min(1.0, a / std::pow(static_cast<double>(t), b));
}

namespace {

struct TraceRecorder {
    explicit TraceRecorder(RunResult& result, long T) : result_(result) {
        result_.chosen_index.reserve(static_cast<std::size_t>(T));
        result_.reward.reserve(static_cast<std::size_t>(T));
        result_.unique_count.reserve(static_cast<std::size_t>(T));
        result_.segment_count.reserve(static_cast<std::size_t>(T));
        result_.elapsed_seconds.reserve(static_cast<std::size_t>(T));
        start_ = std::chrono::steady_clock::now();
    }

    void record(Eigen::Index index, double reward, int unique_count) {
        if (index != previous_) {
            ++segments_;
            previous_ = index;
        }
        result_.chosen_index.push_back(index);
        result_.reward.push_back(reward);
        result_.unique_count.push_back(unique_count);
        result_.segment_count.push_back(segments_);
        result_.elapsed_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
    }

private:
    RunResult& result_;
    Eigen::Index previous_ = -1;
    int segments_ = 0;
    std::chrono::steady_clock::time_point start_;
};

} // namespace

RunResult run_gp_ucb(const Environment& env, const KernelSpec& kernel,
                     const BetaSchedule& schedule, double lambda, long T, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("run_gp_ucb: T must be >= 1");

    RunResult result;
    result.lambda = lambda;
    TraceRecorder recorder(result, T);

    RngStream rng(seed);
    UniqueHistory history;
    Eigen::MatrixXd gram(0, 0);
    Eigen::MatrixXd cross(env.grid.size(), 0);

    for (long t = 0; t < T; ++t) {
        const PosteriorModel model =
            PosteriorModel::fit_from_gram(kernel, history, gram, lambda);
        const Selection sel = select_from_cross(cross, model, schedule, t + 1);

        EpochTrace epoch;
        epoch.epoch_index = static_cast<int>(t + 1);
        epoch.candidate_index = sel.index;
        epoch.batch_length = 1;
        epoch.start_step = t + 1;
        epoch.variance_at_selection = sel.variance;
        epoch.beta_used = sel.beta;
        epoch.logdet_at_fit = model.log_det_weighted();
        result.epochs.push_back(epoch);

        const double y = env.evaluate_raw(sel.index, rng);
        const double scaled = env.scaling.apply(y);
        const int before = history.size();
        history.add(env.grid.candidate(sel.index), std::span<const double>(&scaled, 1));
        if (history.size() > before) {
            const Eigen::VectorXd col =
                kernel_column(kernel, history.unique_points(), env.grid.point(sel.index));
            const int q = history.size();
            gram.conservativeResize(q, q);
            gram.col(q - 1).head(q) = col;
            gram.row(q - 1).head(q) = col.transpose();
            cross.conservativeResize(Eigen::NoChange, q);
            cross.col(q - 1) = kernel_column(kernel, env.grid.coordinates(),
                                             env.grid.point(sel.index));
        }
        recorder.record(sel.index, y, history.size());
    }

    result.final_history = std::move(history);
    return result;
}

RunResult run_epsilon_greedy(const Environment& env, const EpsilonSchedule& eps, long T,
                             std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("run_epsilon_greedy: T must be >= 1");

    RunResult result;
    TraceRecorder recorder(result, T);

    RngStream rng(seed);
    const Eigen::Index n = env.grid.size();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
    int unique = 0;
    long evaluated = 0;

    for (long t = 1; t <= T; ++t) {
        const double epsilon = eps.value(t);
        Eigen::Index choice;
        if (rng.uniform01() < epsilon || evaluated == 0) {
            choice = rng.uniform_index(n);
        } else {
            choice = -1;
            double best = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (counts[i] == 0.0) continue;
                const double mean = sums[i] / counts[i];
                if (mean > best) {
                    best = mean;
                    choice = i;
                }
            }
        }
        const double y = env.evaluate_raw(choice, rng);
        if (counts[choice] == 0.0) ++unique;
        sums[choice] += y;
        counts[choice] += 1.0;
        ++evaluated;
        recorder.record(choice, y, unique);
    }
    return result;
}

RunResult run_uniform(const Environment& env, long T, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("run_uniform: T must be >= 1");

    RunResult result;
    TraceRecorder recorder(result, T);

    RngStream rng(seed);
    const Eigen::Index n = env.grid.size();
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
    int unique = 0;

    for (long t = 0; t < T; ++t) {
        const Eigen::Index choice = rng.uniform_index(n);
        const double y = env.evaluate_raw(choice, rng);
        if (counts[choice] == 0.0) ++unique;
        counts[choice] += 1.0;
        recorder.record(choice, y, unique);
    }
    return result;
}

} // namespace minigp

#include "minigp/mini_meta.hpp"

#include <chrono>
#include <cmath>

#include "minigp/errors.hpp"

namespace minigp {

long batch_length(double variance, double C, long remaining_budget) {
    if (!(C > 1.0)) throw ConfigError("batch_length: C must be > 1");
    if (!(variance > 0.0)) throw std::invalid_argument("batch_length: variance must be > 0");
    if (remaining_budget < 1) throw std::invalid_argument("batch_length: empty budget");
    const double value = (C * C - 1.0) / variance;
    if (value >= static_cast<double>(remaining_budget)) return remaining_budget;
    const long b = static_cast<long>(std::floor(value));
    return b < 1 ? 1 : b;
}

RunResult run_mini(const Environment& env, const KernelSpec& kernel,
                   const BetaSchedule& schedule, double lambda, double C, long T,
                   std::uint64_t seed) {
    if (!(C > 1.0)) throw ConfigError("run_mini: C must be > 1");
    if (T < 1) throw std::invalid_argument("run_mini: T must be >= 1");

    RunResult result;
    result.lambda = lambda;
    result.chosen_index.reserve(static_cast<std::size_t>(T));
    result.reward.reserve(static_cast<std::size_t>(T));
    result.unique_count.reserve(static_cast<std::size_t>(T));
    result.segment_count.reserve(static_cast<std::size_t>(T));
    result.elapsed_seconds.assign(static_cast<std::size_t>(T), 0.0);

    RngStream rng(seed);
    UniqueHistory history;
    Eigen::MatrixXd gram(0, 0);                       // k(X_h, X_h), grown per unique
    Eigen::MatrixXd cross(env.grid.size(), 0);        // k(A, X_h), grown per unique
    std::vector<double> feedback_buffer;

    long t = 0;
    int h = 0;
    int segments = 0;
    Eigen::Index previous_choice = -1;
    const auto start = std::chrono::steady_clock::now();

    while (t < T) {
        ++h;
        const PosteriorModel model =
            PosteriorModel::fit_from_gram(kernel, history, gram, lambda);
        const Selection sel = select_from_cross(cross, model, schedule, t + 1);

        // Switching rule operates on the lambda-scaled variance (the form the
        // within-batch ratio guarantee is stated in).
        const double scaled_variance = sel.variance / lambda;
        const long remaining = T - t;
        const long B = batch_length(scaled_variance, C, remaining);
        const double unclamped = std::floor((C * C - 1.0) / scaled_variance);

        EpochTrace epoch;
        epoch.epoch_index = h;
        epoch.candidate_index = sel.index;
        epoch.batch_length = B;
        epoch.start_step = t + 1;
        epoch.variance_at_selection = sel.variance;
        epoch.beta_used = sel.beta;
        epoch.logdet_at_fit = model.log_det_weighted();
        epoch.clamped = unclamped < 1.0;
        epoch.truncated = !epoch.clamped && unclamped > static_cast<double>(B);

        if (sel.index != previous_choice) {
            ++segments;
            previous_choice = sel.index;
        }

        feedback_buffer.clear();
        for (long s = 0; s < B; ++s) {
            const double y = env.evaluate_raw(sel.index, rng);
            result.chosen_index.push_back(sel.index);
            result.reward.push_back(y);
            feedback_buffer.push_back(env.scaling.apply(y));
        }
        const int before = history.size();
        history.add(env.grid.candidate(sel.index), feedback_buffer);
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

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (long s = 0; s < B; ++s) {
            result.unique_count.push_back(history.size());
            result.segment_count.push_back(segments);
            result.elapsed_seconds[static_cast<std::size_t>(t + s)] = elapsed;
        }
        result.epochs.push_back(epoch);
        t += B;
    }

    result.final_history = std::move(history);
    return result;
}

} // namespace minigp

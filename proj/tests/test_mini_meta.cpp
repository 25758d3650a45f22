#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "minigp/errors.hpp"
#include "minigp/mini_meta.hpp"
#include "minigp/posterior.hpp"
#include "support/oracles.hpp"

using namespace minigp;

TEST_CASE("batch_length arithmetic") {
    CHECK(batch_length(0.07, 1.1, 1000000000) == 3);
    CHECK(batch_length(1.0, 1.1, 1000000000) == 1); // floor(0.21) = 0, clamped
    CHECK(batch_length(0.11, 1.2, 2) == 2);         // budget truncation
    CHECK_THROWS_AS(batch_length(0.5, 1.0, 10), ConfigError);
    CHECK_THROWS_AS(batch_length(0.0, 1.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(batch_length(0.5, 1.1, 0), std::invalid_argument);
}

namespace {

Environment random_coordinate_env(int n, ObjectiveFamily family, double noise,
                                  std::uint64_t coord_seed = 91) {
    Eigen::MatrixXd coords(n, 3);
    RngStream rng(coord_seed);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) coords(i, k) = -5.0 + 10.0 * rng.uniform01();
    }
    const CandidateGrid grid(3, n, -5.0, 5.0, coords);
    return make_environment(family, grid, noise);
}

// Full-history reference driver: expanded naive posterior, dense logdet,
// exhaustive scoring. Replicates the epoch loop without the weighted
// reformulation; feedback is delivered only at epoch boundaries.
RunResult naive_mini_driver(const Environment& env, const KernelSpec& kernel,
                            const BetaSchedule& schedule, double lambda, double C, long T,
                            std::uint64_t seed) {
    RunResult result;
    RngStream rng(seed);
    Eigen::MatrixXd expanded(0, env.grid.dim());
    Eigen::VectorXd feedback(0);
    long t = 0;
    int h = 0;
    while (t < T) {
        ++h;
        const double logdet =
            minigp::testing::expanded_log_det(kernel, expanded, std::sqrt(lambda));
        const double beta = beta_value(schedule, logdet, t + 1);

        Eigen::VectorXd means(env.grid.size()), stds(env.grid.size()),
            vars(env.grid.size());
        for (Eigen::Index i = 0; i < env.grid.size(); ++i) {
            const auto [m, v] =
                naive_posterior(expanded, feedback, lambda, env.grid.point(i), kernel);
            means[i] = m;
            vars[i] = v;
            stds[i] = std::sqrt(std::max(0.0, v));
        }
        Eigen::Index best = 0;
        double best_score = -1e300;
        const double incumbent = means.maxCoeff();
        for (Eigen::Index i = 0; i < env.grid.size(); ++i) {
            const double score = schedule.uses_ei()
                                     ? ei_score(means[i], stds[i], beta, incumbent)
                                     : ucb_score(means[i], stds[i], beta);
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }

        const double scaled_variance = vars[best] / lambda;
        const long B = batch_length(scaled_variance, C, T - t);
        for (long s = 0; s < B; ++s) {
            const double y = env.evaluate_raw(best, rng);
            result.chosen_index.push_back(best);
            result.reward.push_back(y);
            expanded.conservativeResize(expanded.rows() + 1, Eigen::NoChange);
            expanded.row(expanded.rows() - 1) = env.grid.point(best).transpose();
            feedback.conservativeResize(feedback.size() + 1);
            feedback[feedback.size() - 1] = env.scaling.apply(y);
        }
        EpochTrace epoch;
        epoch.epoch_index = h;
        epoch.candidate_index = best;
        epoch.batch_length = B;
        epoch.start_step = t + 1;
        epoch.variance_at_selection = vars[best];
        result.epochs.push_back(epoch);
        t += B;
    }
    return result;
}

} // namespace

TEST_CASE("T = 1 runs exactly one clamped epoch") {
    const Environment env = random_coordinate_env(10, ObjectiveFamily::Rastrigin, 0.3);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    const RunResult r = run_mini(env, kernel, BetaSchedule::bayesian_ucb(10, 0.1), 1.0,
                                 1.1, 1, 7);
    CHECK(r.total_steps() == 1);
    CHECK(r.epochs.size() == 1);
    CHECK(r.epochs[0].batch_length == 1);
    CHECK(r.epochs[0].clamped);
    CHECK(r.unique_count.back() == 1);
}

TEST_CASE("constant noiseless objective: first epoch ties to index 0 with B = 1") {
    // Schaffer in one dimension is identically zero
    const CandidateGrid grid = build_grid(1, 5, -5.0, 5.0);
    const Environment env = make_environment(ObjectiveFamily::Schaffer, grid, 0.0);
    const KernelSpec kernel{KernelFamily::Gaussian, 1.0};
    const RunResult r = run_mini(env, kernel, BetaSchedule::bayesian_ucb(5, 0.1), 1.0,
                                 1.1, 10, 3);
    CHECK(r.epochs[0].candidate_index == 0);
    CHECK(r.epochs[0].batch_length == 1); // prior variance 1 clamps the rule
    CHECK(r.epochs[0].variance_at_selection == 1.0);
    CHECK(r.reward[0] == 0.0);
}

TEST_CASE("identical seeds give identical runs") {
    const Environment env = random_coordinate_env(20, ObjectiveFamily::Ellipsoid, 0.1);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    const BetaSchedule schedule = BetaSchedule::bayesian_ucb(20, 0.1);
    const RunResult a = run_mini(env, kernel, schedule, 0.25, 1.2, 60, 11);
    const RunResult b = run_mini(env, kernel, schedule, 0.25, 1.2, 60, 11);
    CHECK(a.chosen_index == b.chosen_index);
    CHECK(a.reward == b.reward);
    CHECK(a.unique_count == b.unique_count);
    CHECK(a.epochs.size() == b.epochs.size());
}

TEST_CASE("epoch loop matches the expanded-history reference driver") {
    const Environment env = random_coordinate_env(27, ObjectiveFamily::Rosenbrock, 0.2);
    const double lambda = 0.25;
    const KernelSpec kernel{KernelFamily::Gaussian, 2.5};
    for (const bool use_ei : {false, true}) {
        const BetaSchedule schedule = use_ei
                                          ? BetaSchedule::frequentist_ei(0.1)
                                          : BetaSchedule::bayesian_ucb(27, 0.1);
        const RunResult got = run_mini(env, kernel, schedule, lambda, 1.3, 40, 5);
        const RunResult want = naive_mini_driver(env, kernel, schedule, lambda, 1.3, 40, 5);
        REQUIRE(got.chosen_index == want.chosen_index);
        CHECK(got.reward == want.reward);
        REQUIRE(got.epochs.size() == want.epochs.size());
        for (std::size_t e = 0; e < got.epochs.size(); ++e) {
            CHECK(got.epochs[e].candidate_index == want.epochs[e].candidate_index);
            CHECK(got.epochs[e].batch_length == want.epochs[e].batch_length);
            CHECK(got.epochs[e].start_step == want.epochs[e].start_step);
            CHECK(std::abs(got.epochs[e].variance_at_selection -
                           want.epochs[e].variance_at_selection) <= 1e-9);
        }
    }
}

TEST_CASE("trace bookkeeping invariants") {
    const Environment env = random_coordinate_env(30, ObjectiveFamily::Rastrigin, 0.15);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    const RunResult r = run_mini(env, kernel, BetaSchedule::bayesian_ucb(30, 0.1), 0.1,
                                 1.2, 120, 9);

    long total = 0;
    for (const auto& epoch : r.epochs) total += epoch.batch_length;
    CHECK(total == 120);
    CHECK(r.total_steps() == 120);

    for (std::size_t t = 1; t < r.unique_count.size(); ++t) {
        CHECK(r.unique_count[t] >= r.unique_count[t - 1]);
    }
    CHECK(r.unique_count.back() == r.final_history.size());
    CHECK(r.unique_count.back() <= static_cast<int>(r.epochs.size()));
    CHECK(r.final_history.total_steps() == 120);

    // batch rule consistency: B_h = min(budget, max(1, floor((C^2-1) lambda / var)))
    long consumed = 0;
    for (const auto& epoch : r.epochs) {
        const double scaled = epoch.variance_at_selection / 0.1;
        const long expected = batch_length(scaled, 1.2, 120 - consumed);
        CHECK(epoch.batch_length == expected);
        consumed += epoch.batch_length;
    }
}

TEST_CASE("within-batch variance ratio stays under C") {
    const Environment env = random_coordinate_env(25, ObjectiveFamily::Ellipsoid, 0.1);
    const KernelSpec kernel{KernelFamily::Gaussian, 2.0};
    const double lambda = 0.2;
    const double C = 1.3;
    const RunResult r = run_mini(env, kernel, BetaSchedule::bayesian_ucb(25, 0.1), lambda,
                                 C, 80, 13);

    RngStream probe_rng(555);
    std::vector<Eigen::VectorXd> probes;
    for (int p = 0; p < 10; ++p) {
        Eigen::VectorXd x(3);
        for (int k = 0; k < 3; ++k) x[k] = -5.0 + 10.0 * probe_rng.uniform01();
        probes.push_back(x);
    }

    // replay the history epoch by epoch, refit on truncated prefixes
    UniqueHistory prefix;
    long t = 0;
    for (const auto& epoch : r.epochs) {
        const PosteriorModel at_start = PosteriorModel::fit(kernel, prefix, lambda);
        for (long s = 0; s < epoch.batch_length; ++s) {
            const double y = r.reward[static_cast<std::size_t>(t + s)];
            const double scaled = env.scaling.apply(y);
            prefix.add(env.grid.candidate(epoch.candidate_index),
                       std::span<const double>(&scaled, 1));
            if (epoch.clamped) continue;
            const PosteriorModel truncated = PosteriorModel::fit(kernel, prefix, lambda);
            for (const auto& x : probes) {
                const double ratio = std::sqrt(at_start.variance(x)) /
                                     std::sqrt(truncated.variance(x));
                CHECK(ratio <= C + 1e-6);
            }
        }
        t += epoch.batch_length;
    }
}

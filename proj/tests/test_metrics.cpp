#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minigp/baselines.hpp"
#include "minigp/errors.hpp"
#include "minigp/metrics.hpp"
#include "support/oracles.hpp"

using namespace minigp;
using minigp::testing::random_history;

namespace {

Environment small_env(std::uint64_t coord_seed = 91) {
    const CandidateGrid grid = build_grid(2, 4, -5.0, 5.0);
    return make_environment(ObjectiveFamily::Rastrigin, grid, 0.1);
}

RunResult fixed_trace(const Environment& env, const std::vector<Eigen::Index>& picks) {
    RunResult r;
    RngStream rng(0);
    for (const auto idx : picks) {
        r.chosen_index.push_back(idx);
        r.reward.push_back(env.evaluate_raw(idx, rng));
        r.unique_count.push_back(1);
        r.segment_count.push_back(1);
        r.elapsed_seconds.push_back(0.0);
    }
    return r;
}

} // namespace

TEST_CASE("regret of the always-optimal and constant policies") {
    const Environment env = small_env();
    const auto [best, best_value] = true_optimum(env.objective, env.grid);

    const RunResult at_best = fixed_trace(env, std::vector<Eigen::Index>(8, best));
    const RegretTrace zero = compute_regret(at_best, env.objective, env.grid);
    CHECK(zero.cumulative.maxCoeff() == 0.0);

    const Eigen::Index sub = best == 0 ? 1 : 0;
    const double gap = best_value - (-raw_value(env.objective, env.grid.point(sub)));
    const RunResult at_sub = fixed_trace(env, std::vector<Eigen::Index>(6, sub));
    const RegretTrace linear = compute_regret(at_sub, env.objective, env.grid);
    for (int t = 0; t < 6; ++t) {
        CHECK(linear.instantaneous[t] == doctest::Approx(gap).epsilon(1e-12));
        CHECK(linear.cumulative[t] == doctest::Approx(gap * (t + 1)).epsilon(1e-12));
        CHECK(linear.average[t] == doctest::Approx(gap).epsilon(1e-12));
    }
    CHECK(linear.instantaneous.minCoeff() >= 0.0);
}

TEST_CASE("regret matches a per-step oracle on a random trace") {
    const Environment env = small_env();
    RngStream rng(77);
    std::vector<Eigen::Index> picks;
    for (int t = 0; t < 40; ++t) picks.push_back(rng.uniform_index(env.grid.size()));
    const RunResult r = fixed_trace(env, picks);
    const RegretTrace trace = compute_regret(r, env.objective, env.grid);

    const double best = true_optimum(env.objective, env.grid).second;
    double running = 0.0;
    for (int t = 0; t < 40; ++t) {
        const double inst = best - (-raw_value(env.objective, env.grid.point(picks[t])));
        running += inst;
        CHECK(trace.instantaneous[t] == doctest::Approx(inst).epsilon(1e-12));
        CHECK(trace.cumulative[t] == doctest::Approx(running).epsilon(1e-12));
    }
}

TEST_CASE("info gain closed forms and expanded oracle") {
    const KernelSpec kernel{KernelFamily::Gaussian, 1.5};
    const UniqueHistory empty;
    CHECK(info_gain(kernel, empty, 0.7) == 0.0);

    UniqueHistory single;
    std::vector<double> ys(5, 0.3);
    single.add(Candidate{0, Eigen::Vector3d(0.5, -1.0, 2.0)}, ys);
    const double xi = 0.8;
    CHECK(info_gain(kernel, single, xi) ==
          doctest::Approx(0.5 * std::log(1.0 + 5.0 / (xi * xi))).epsilon(1e-12));

    RngStream rng(404);
    for (int rep = 0; rep < 25; ++rep) {
        const auto rh = random_history(rng, 10, 50);
        for (const double x : {0.5, 1.0, 2.0}) {
            const double got = info_gain(kernel, rh.history, x);
            const double want =
                0.5 * minigp::testing::expanded_log_det(kernel, rh.expanded_points, x);
            CHECK(std::abs(got - want) / std::max(1e-12, std::abs(want)) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(info_gain(kernel, empty, 0.0), ConfigError);
}

TEST_CASE("summaries over seeds") {
    std::vector<Eigen::VectorXd> identical(5, Eigen::VectorXd::Constant(4, 2.5));
    const CurveSummary same = summarize_curves(identical);
    CHECK(same.mean.isApprox(Eigen::VectorXd::Constant(4, 2.5), 0.0));
    CHECK(same.halfwidth.maxCoeff() == 0.0);

    std::vector<Eigen::VectorXd> two;
    two.push_back(Eigen::VectorXd::Constant(1, 0.4));
    two.push_back(Eigen::VectorXd::Constant(1, 0.6));
    const CurveSummary pair = summarize_curves(two);
    CHECK(pair.mean[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pair.halfwidth[0] == doctest::Approx(0.196).epsilon(1e-9));

    std::vector<Eigen::VectorXd> forty(40, Eigen::VectorXd::Zero(100));
    CHECK(summarize_curves(forty).mean.size() == 100);

    CHECK_THROWS_AS(summarize_curves({Eigen::VectorXd::Zero(3)}), std::invalid_argument);
}

TEST_CASE("switch bound check on a mini run") {
    const CandidateGrid grid = build_grid(2, 6, -5.0, 5.0);
    const Environment env = make_environment(ObjectiveFamily::Ellipsoid, grid, 0.1);
    const KernelSpec kernel{KernelFamily::Gaussian, 3.0};
    const double lambda = 0.3;
    const double C = 1.2;
    const RunResult r = run_mini(env, kernel, BetaSchedule::bayesian_ucb(36, 0.1), lambda,
                                 C, 150, 5);
    const SwitchBoundCheck check =
        check_switch_bound(r, kernel, C, lambda, env.scaled_noise_std());
    CHECK(check.ok);
    CHECK(check.switches == static_cast<long>(r.epochs.size()));
    CHECK(check.gamma > 0.0);
    CHECK(r.unique_count.back() <= check.switches);
}

#include "minigp/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "minigp/errors.hpp"
#include "minigp/posterior.hpp"

namespace minigp {

RegretTrace compute_regret(const RunResult& result, const Objective& objective,
                           const CandidateGrid& grid) {
    const auto T = static_cast<Eigen::Index>(result.chosen_index.size());
    const double best = true_optimum(objective, grid).second;

    RegretTrace trace;
    trace.instantaneous.resize(T);
    trace.cumulative.resize(T);
    trace.average.resize(T);
    double running = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const double f = -raw_value(objective, grid.point(result.chosen_index[t]));
        trace.instantaneous[t] = best - f;
        running += trace.instantaneous[t];
        trace.cumulative[t] = running;
        trace.average[t] = running / static_cast<double>(t + 1);
    }
    return trace;
}

double info_gain(const KernelSpec& kernel, const UniqueHistory& history, double xi) {
    if (!(xi > 0.0)) throw ConfigError("info_gain: xi must be positive");
    if (history.size() == 0) return 0.0;
    const PosteriorModel model = PosteriorModel::fit(kernel, history, xi * xi);
    return 0.5 * model.log_det_weighted();
}

CurveSummary summarize_curves(const std::vector<Eigen::VectorXd>& curves) {
    if (curves.size() < 2) {
        throw std::invalid_argument("summarize_curves: need at least 2 seeds");
    }
    const Eigen::Index T = curves.front().size();
    for (const auto& c : curves) {
        if (c.size() != T) {
            throw std::invalid_argument("summarize_curves: curve lengths differ");
        }
    }
    const auto n = static_cast<double>(curves.size());

    CurveSummary summary;
    summary.mean = Eigen::VectorXd::Zero(T);
    summary.halfwidth = Eigen::VectorXd::Zero(T);
    for (const auto& c : curves) summary.mean += c;
    summary.mean /= n;
    for (const auto& c : curves) {
        summary.halfwidth += (c - summary.mean).cwiseAbs2();
    }
    summary.halfwidth =
        1.96 * (summary.halfwidth / (n - 1.0)).cwiseSqrt() / std::sqrt(n);
    return summary;
}

SwitchBoundCheck check_switch_bound(const RunResult& result, const KernelSpec& kernel,
                                    double C, double lambda, double xi) {
    SwitchBoundCheck check;
    check.switches = static_cast<long>(result.epochs.size());
    check.gamma = info_gain(kernel, result.final_history, xi);
    check.bound = 4.0 * C * C / (C * C - 1.0) * (1.0 + kKappaSq / lambda) * check.gamma;
    check.ok = static_cast<double>(check.switches) <= check.bound;
    return check;
}

} // namespace minigp

#include "minigp/acquisition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "minigp/errors.hpp"

namespace minigp {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

void validate(const BetaSchedule& s) {
    if (!(s.delta > 0.0 && s.delta < 1.0)) throw ConfigError("beta schedule: delta in (0,1)");
    if (s.norm_bound < 0.0) throw ConfigError("beta schedule: F must be >= 0");
    if (s.card < 1.0) throw ConfigError("beta schedule: |A| must be >= 1");
    if (!(s.scale > 0.0)) throw ConfigError("beta schedule: scale must be positive");
}

} // namespace

BetaSchedule BetaSchedule::frequentist_ucb(double norm_bound, double delta, double scale) {
    BetaSchedule s;
    s.kind = Kind::FrequentistUCB;
    s.norm_bound = norm_bound;
    s.delta = delta;
    s.scale = scale;
    validate(s);
    return s;
}

BetaSchedule BetaSchedule::bayesian_ucb(double card, double delta) {
    BetaSchedule s;
    s.kind = Kind::BayesianUCB;
    s.card = card;
    s.delta = delta;
    validate(s);
    return s;
}

BetaSchedule BetaSchedule::frequentist_ei(double delta, double scale) {
    BetaSchedule s;
    s.kind = Kind::FrequentistEI;
    s.delta = delta;
    s.scale = scale;
    validate(s);
    return s;
}

double beta_value(const BetaSchedule& schedule, double logdet, long t) {
    validate(schedule);
    if (logdet < 0.0) throw std::invalid_argument("beta_value: logdet must be >= 0");
    if (t < 1) throw std::invalid_argument("beta_value: t must be >= 1");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    switch (schedule.kind) {
        case BetaSchedule::Kind::FrequentistUCB:
            return schedule.scale *
                   (std::sqrt(logdet + std::log(1.0 / schedule.delta)) + schedule.norm_bound);
        case BetaSchedule::Kind::BayesianUCB: {
            const double td = static_cast<double>(t);
            return std::sqrt(2.0 * std::log(schedule.card * td * td * pi2 /
                                            (6.0 * schedule.delta)));
        }
        case BetaSchedule::Kind::FrequentistEI: {
            const double lt = std::log(static_cast<double>(t) / schedule.delta);
            return schedule.scale * std::sqrt(logdet + std::sqrt(logdet * lt) + lt);
        }
    }
    throw std::logic_error("beta_value: unhandled schedule kind");
}

double ucb_score(double mean, double std, double beta) { return mean + beta * std; }

double ei_score(double mean, double std, double beta, double incumbent_mean) {
    if (!(beta > 0.0)) throw std::invalid_argument("ei_score: beta must be positive");
    const double improvement = mean - incumbent_mean;
    if (std <= 0.0) return std::max(improvement, 0.0);
    const double u = improvement / (std * beta);
    const double value = beta * std * (u * normal_cdf(u) + normal_pdf(u));
    return std::max(value, 0.0);
}

Selection select_from_cross(const Eigen::MatrixXd& cross, const PosteriorModel& model,
                            const BetaSchedule& schedule, long t) {
    const Eigen::Index n = cross.rows();
    if (n == 0) throw std::invalid_argument("select: candidate set is empty");

    const double beta = beta_value(schedule, model.log_det_weighted(), t);
    const Eigen::VectorXd means = model.mean_all(cross);
    const Eigen::VectorXd vars = model.variance_all(cross);

    Eigen::Index best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    if (schedule.uses_ei()) {
        const double incumbent = means.maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double score = ei_score(means[i], std::sqrt(vars[i]), beta, incumbent);
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double score = ucb_score(means[i], std::sqrt(vars[i]), beta);
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
    }
    return Selection{best, vars[best], beta};
}

Selection select_candidate(const CandidateGrid& grid, const PosteriorModel& model,
                           const BetaSchedule& schedule, long t) {
    Eigen::MatrixXd cross;
    if (model.size() > 0) {
        cross = kernel_matrix(model.kernel(), grid.coordinates(), model.points());
    } else {
        cross.resize(grid.size(), 0);
    }
    return select_from_cross(cross, model, schedule, t);
}

} // namespace minigp

#pragma once

#include <Eigen/Dense>

#include "minigp/environment.hpp"
#include "minigp/posterior.hpp"

namespace minigp {

double normal_cdf(double z);
double normal_pdf(double z);

// Exploration-multiplier schedule. The frequentist variants consume the
// logdet of the weighted system at the most recent fit; the Bayesian one
// only needs |A| and the step index. `scale` absorbs the Theta(.) constant.
struct BetaSchedule {
    enum class Kind { FrequentistUCB, BayesianUCB, FrequentistEI };

    Kind kind = Kind::BayesianUCB;
    double delta = 0.1;
    double norm_bound = 0.0; // F, frequentist UCB only
    double card = 1.0;       // |A|, Bayesian only
    double scale = 1.0;

    static BetaSchedule frequentist_ucb(double norm_bound, double delta, double scale = 1.0);
    static BetaSchedule bayesian_ucb(double card, double delta);
    static BetaSchedule frequentist_ei(double delta, double scale = 1.0);

    /// True when selection scores with expected improvement instead of UCB.
    bool uses_ei() const { return kind == Kind::FrequentistEI; }
};

/// Evaluate the schedule at step t (1-based) given the logdet at the last fit.
double beta_value(const BetaSchedule& schedule, double logdet, long t);

/// mean + beta * std.
double ucb_score(double mean, double std, double beta);

/// beta * std * [(z/beta) CDF(z/beta) + PDF(z/beta)] with
/// z = (mean - incumbent_mean) / std; positive part of the improvement when
/// std = 0. Always >= 0.
double ei_score(double mean, double std, double beta, double incumbent_mean);

struct Selection {
    Eigen::Index index = 0;        // grid index of the chosen candidate
    double variance = 0.0;         // sigma^2 at the chosen candidate
    double beta = 0.0;             // multiplier used for scoring
};

/// Exact maximization over a precomputed cross-kernel block k(A, X_h); rows
/// of `cross` follow the grid index order. Ties break toward the lowest
/// index. For EI the incumbent mean is the maximum posterior mean over the
/// same candidate set.
Selection select_from_cross(const Eigen::MatrixXd& cross, const PosteriorModel& model,
                            const BetaSchedule& schedule, long t);

/// Scores every grid candidate (assembles the cross-kernel block first).
Selection select_candidate(const CandidateGrid& grid, const PosteriorModel& model,
                           const BetaSchedule& schedule, long t);

} // namespace minigp

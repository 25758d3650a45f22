#pragma once

#include <span>
#include <unordered_map>
#include <utility>

#include <Eigen/Dense>

#include "minigp/environment.hpp"
#include "minigp/kernel.hpp"

namespace minigp {

// Evaluation history collapsed onto unique candidates: X_h with per-candidate
// multiplicities (the diagonal of W_h) and summed feedback. Repeated
// evaluations of a candidate merge into its row instead of growing the state.
class UniqueHistory {
public:
    int size() const { return static_cast<int>(counts_.size()); } // q
    long total_steps() const { return total_steps_; }             // t
    const Eigen::MatrixXd& unique_points() const { return unique_points_; }
    const Eigen::VectorXd& counts() const { return counts_; }
    const Eigen::VectorXd& feedback_sum() const { return feedback_sum_; }
    const std::unordered_map<Eigen::Index, int>& index_of() const { return index_of_; }

    /// Row of the candidate, or -1 when unseen.
    int row_of(Eigen::Index grid_index) const;

    /// Merge feedbacks into the candidate's row, appending a row when new.
    /// Returns the row index.
    int add(const Candidate& candidate, std::span<const double> feedbacks);

    /// Expanded t x d / t-vector form (one row per evaluation, epoch order);
    /// reference representation for oracle checks.
    std::pair<Eigen::MatrixXd, Eigen::VectorXd> expanded() const;

private:
    Eigen::MatrixXd unique_points_; // q x d
    Eigen::VectorXd counts_;        // q, positive integers stored as doubles
    Eigen::VectorXd feedback_sum_;  // q
    long total_steps_ = 0;
    std::unordered_map<Eigen::Index, int> index_of_;
    std::vector<std::pair<int, double>> log_; // (row, feedback) per evaluation
};

// Factorized weighted kernel system W^{1/2} K_h W^{1/2} + lambda I. Queries
// reproduce the standard GP posterior on the expanded t-row history exactly;
// cost is O(q^3) to fit and O(q^2) per variance query.
class PosteriorModel {
public:
    /// Assembles the Gram matrix from the history and factorizes.
    static PosteriorModel fit(const KernelSpec& kernel, const UniqueHistory& history,
                              double lambda);

    /// Same as fit() but with the q x q Gram matrix supplied by the caller
    /// (the epoch loop maintains it incrementally).
    static PosteriorModel fit_from_gram(const KernelSpec& kernel, const UniqueHistory& history,
                                        const Eigen::MatrixXd& gram, double lambda);

    double mean(const Eigen::VectorXd& x) const;
    double variance(const Eigen::VectorXd& x) const;

    /// Batched queries over a precomputed cross-kernel block k(X_query, X_h)
    /// of shape n x q.
    Eigen::VectorXd mean_all(const Eigen::MatrixXd& cross) const;
    Eigen::VectorXd variance_all(const Eigen::MatrixXd& cross) const;

    /// logdet(W^{1/2} K_h W^{1/2} / lambda + I); zero for an empty history.
    double log_det_weighted() const { return log_det_; }

    int size() const { return q_; }
    double lambda() const { return lambda_; }
    const KernelSpec& kernel() const { return kernel_; }
    const Eigen::MatrixXd& points() const { return points_; }
    /// Lower Cholesky factor of W^{1/2} K_h W^{1/2} + lambda I.
    const Eigen::MatrixXd& chol_lower() const { return chol_; }

private:
    KernelSpec kernel_;
    double lambda_ = 1.0;
    int q_ = 0;
    Eigen::MatrixXd points_;     // q x d
    Eigen::VectorXd sqrt_counts_; // W^{1/2} diagonal
    Eigen::MatrixXd chol_;       // L, lower
    Eigen::VectorXd mean_weights_; // alpha with mean(x) = k(x, X_h) . alpha
    double log_det_ = 0.0;
};

/// Standard O(t^3) GP posterior on the expanded history; test-suite oracle,
/// never called by the optimizer loop.
std::pair<double, double> naive_posterior(const Eigen::MatrixXd& full_points,
                                          const Eigen::VectorXd& full_feedback, double lambda,
                                          const Eigen::VectorXd& x,
                                          const KernelSpec& kernel);

} // namespace minigp

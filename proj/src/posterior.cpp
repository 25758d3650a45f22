#include "minigp/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "minigp/errors.hpp"

namespace minigp {

int UniqueHistory::row_of(Eigen::Index grid_index) const {
    const auto it = index_of_.find(grid_index);
    return it == index_of_.end() ? -1 : it->second;
}

int UniqueHistory::add(const Candidate& candidate, std::span<const double> feedbacks) {
    if (feedbacks.empty()) {
        throw std::invalid_argument("UniqueHistory::add: feedbacks must be non-empty");
    }
    if (size() > 0 && candidate.coords.size() != unique_points_.cols()) {
        throw std::invalid_argument("UniqueHistory::add: coordinate dimension mismatch");
    }
    int row = row_of(candidate.grid_index);
    if (row < 0) {
        row = size();
        unique_points_.conservativeResize(row + 1, candidate.coords.size());
        unique_points_.row(row) = candidate.coords.transpose();
        counts_.conservativeResize(row + 1);
        counts_[row] = 0.0;
        feedback_sum_.conservativeResize(row + 1);
        feedback_sum_[row] = 0.0;
        index_of_.emplace(candidate.grid_index, row);
    }
    double sum = 0.0;
    for (const double y : feedbacks) {
        sum += y;
        log_.emplace_back(row, y);
    }
    counts_[row] += static_cast<double>(feedbacks.size());
    feedback_sum_[row] += sum;
    total_steps_ += static_cast<long>(feedbacks.size());
    return row;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> UniqueHistory::expanded() const {
    Eigen::MatrixXd points(total_steps_, unique_points_.cols());
    Eigen::VectorXd feedback(total_steps_);
    for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(log_.size()); ++s) {
        const auto& [row, y] = log_[static_cast<std::size_t>(s)];
        points.row(s) = unique_points_.row(row);
        feedback[s] = y;
    }
    return {std::move(points), std::move(feedback)};
}

namespace {

// Unblocked right-looking Cholesky on the lower triangle, in place. Uniform
// per-entry cost across sizes, so refit timings scale as q^3 without the
// small-q efficiency cliff of blocked kernels. Returns the failing pivot
// index, -1 on success.
int cholesky_in_place(Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = m(j, j);
        if (!(d > 0.0)) return static_cast<int>(j);
        const double root = std::sqrt(d);
        m(j, j) = root;
        const Eigen::Index rest = n - j - 1;
        if (rest == 0) continue;
        m.col(j).tail(rest) /= root;
        for (Eigen::Index k = j + 1; k < n; ++k) {
            m.col(k).tail(n - k) -= m(k, j) * m.col(j).tail(n - k);
        }
    }
    return -1;
}

// Failing-pivot scan for the Eigen-factorized oracle path.
int find_failing_pivot(Eigen::MatrixXd m) {
    return cholesky_in_place(m);
}

} // namespace

PosteriorModel PosteriorModel::fit(const KernelSpec& kernel, const UniqueHistory& history,
                                   double lambda) {
    return fit_from_gram(kernel, history, kernel_gram(kernel, history.unique_points()), lambda);
}

PosteriorModel PosteriorModel::fit_from_gram(const KernelSpec& kernel,
                                             const UniqueHistory& history,
                                             const Eigen::MatrixXd& gram, double lambda) {
    if (!(lambda > 0.0)) {
        throw ConfigError("posterior fit: lambda must be positive");
    }
    const int q = history.size();
    if (gram.rows() != q || gram.cols() != q) {
        throw std::invalid_argument("posterior fit: gram matrix shape mismatch");
    }

    PosteriorModel model;
    model.kernel_ = kernel;
    model.lambda_ = lambda;
    model.q_ = q;
    model.points_ = history.unique_points();
    model.sqrt_counts_ = history.counts().cwiseSqrt();
    if (q == 0) {
        return model; // prior model: mean 0, variance k(x, x)
    }

    // lower triangle of W^{1/2} K W^{1/2} + lambda I, factorized in place
    const auto& w = model.sqrt_counts_;
    Eigen::MatrixXd system(q, q);
    for (int j = 0; j < q; ++j) {
        system(j, j) = gram(j, j) * w[j] * w[j] + lambda;
        for (int i = j + 1; i < q; ++i) system(i, j) = gram(i, j) * w[i] * w[j];
    }
    const int pivot = cholesky_in_place(system);
    if (pivot >= 0) {
        throw NumericalError("posterior fit: Cholesky factorization failed", pivot);
    }

    model.log_det_ = std::max(
        0.0, 2.0 * system.diagonal().array().log().sum() - q * std::log(lambda));
    model.chol_ = std::move(system);
    model.chol_.triangularView<Eigen::StrictlyUpper>().setZero();

    // mean(x) = k(x, X_h) W^{1/2} (W^{1/2} K W^{1/2} + lambda I)^{-1} W^{-1/2} y
    model.mean_weights_ = history.feedback_sum().cwiseQuotient(w);
    model.chol_.triangularView<Eigen::Lower>().solveInPlace(model.mean_weights_);
    model.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(
        model.mean_weights_);
    model.mean_weights_.array() *= w.array();
    return model;
}

double PosteriorModel::mean(const Eigen::VectorXd& x) const {
    if (q_ == 0) return 0.0;
    return kernel_column(kernel_, points_, x).dot(mean_weights_);
}

double PosteriorModel::variance(const Eigen::VectorXd& x) const {
    const double prior = kernel_eval(kernel_, x, x);
    if (q_ == 0) return prior;
    const Eigen::VectorXd k = kernel_column(kernel_, points_, x);
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(
        sqrt_counts_.cwiseProduct(k));
    double var = prior - v.squaredNorm();
    if (var < 0.0) {
        if (var < -1e-12) {
            throw NumericalError("posterior variance: negative beyond tolerance");
        }
        var = 0.0;
    }
    return var;
}

Eigen::VectorXd PosteriorModel::mean_all(const Eigen::MatrixXd& cross) const {
    if (q_ == 0) return Eigen::VectorXd::Zero(cross.rows());
    if (cross.cols() != q_) {
        throw std::invalid_argument("mean_all: cross-kernel width mismatch");
    }
    return cross * mean_weights_;
}

Eigen::VectorXd PosteriorModel::variance_all(const Eigen::MatrixXd& cross) const {
    if (q_ == 0) return Eigen::VectorXd::Ones(cross.rows());
    if (cross.cols() != q_) {
        throw std::invalid_argument("variance_all: cross-kernel width mismatch");
    }
    Eigen::MatrixXd v = sqrt_counts_.asDiagonal() * cross.transpose();
    chol_.triangularView<Eigen::Lower>().solveInPlace(v);
    Eigen::VectorXd vars =
        (1.0 - v.colwise().squaredNorm().transpose().array()).matrix();
    for (Eigen::Index i = 0; i < vars.size(); ++i) {
        if (vars[i] < 0.0) {
            if (vars[i] < -1e-12) {
                throw NumericalError("posterior variance: negative beyond tolerance");
            }
            vars[i] = 0.0;
        }
    }
    return vars;
}

std::pair<double, double> naive_posterior(const Eigen::MatrixXd& full_points,
                                          const Eigen::VectorXd& full_feedback, double lambda,
                                          const Eigen::VectorXd& x,
                                          const KernelSpec& kernel) {
    if (!(lambda > 0.0)) {
        throw ConfigError("naive_posterior: lambda must be positive");
    }
    const Eigen::Index t = full_points.rows();
    const double prior = kernel_eval(kernel, x, x);
    if (t == 0) return {0.0, prior};

    Eigen::MatrixXd system = kernel_gram(kernel, full_points);
    system.diagonal().array() += lambda;
    const Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("naive_posterior: Cholesky factorization failed",
                             find_failing_pivot(system));
    }
    const Eigen::VectorXd k = kernel_matrix(kernel, full_points, x.transpose()).col(0);
    const double mean = k.dot(llt.solve(full_feedback));
    const double var = prior - k.dot(llt.solve(k));
    return {mean, var};
}

} // namespace minigp

#include "minigp/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "minigp/errors.hpp"

namespace minigp {

namespace {

void check_bandwidth(const KernelSpec& spec) {
    if (!(spec.bandwidth > 0.0)) {
        throw ConfigError("kernel bandwidth must be positive");
    }
}

} // namespace

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_bandwidth(spec);
    if (x.size() != y.size()) {
        throw std::invalid_argument("kernel_eval: point dimensions differ");
    }
    const double d2 = (x - y).squaredNorm();
    return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
}

Eigen::VectorXd kernel_column(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y) {
    check_bandwidth(spec);
    if (X.cols() != y.size()) {
        throw std::invalid_argument("kernel_column: point dimensions differ");
    }
    const double denom = 2.0 * spec.bandwidth * spec.bandwidth;
    Eigen::VectorXd col(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        col[i] = std::exp(-(X.row(i).transpose() - y).squaredNorm() / denom);
    }
    return col;
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Y) {
    check_bandwidth(spec);
    if (X.cols() != Y.cols()) {
        throw std::invalid_argument("kernel_matrix: column counts differ");
    }
    Eigen::MatrixXd out(X.rows(), Y.rows());
    for (Eigen::Index j = 0; j < Y.rows(); ++j) {
        out.col(j) = kernel_column(spec, X, Y.row(j).transpose());
    }
    return out;
}

Eigen::MatrixXd kernel_gram(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    return kernel_matrix(spec, X, X);
}

} // namespace minigp

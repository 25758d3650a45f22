#pragma once

#include <Eigen/Dense>

namespace minigp {

/// Upper bound on k(x, x); the Gaussian family is normalized so kappa^2 = 1.
inline constexpr double kKappaSq = 1.0;

enum class KernelFamily { Gaussian };

// k(x, y) = exp(-||x - y||^2 / (2 sigma^2)), sigma = bandwidth.
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double bandwidth = 1.0;
};

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Cross-kernel matrix; entry (i, j) = k(row i of X, row j of Y).
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Y);

/// Gram matrix k(X, X); exactly symmetric by construction.
Eigen::MatrixXd kernel_gram(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// One column k(X, y), bit-identical to the corresponding column of
/// kernel_matrix/kernel_gram so incremental caches match fresh assembly.
Eigen::VectorXd kernel_column(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y);

} // namespace minigp

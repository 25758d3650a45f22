#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minigp/environment.hpp"
#include "minigp/kernel.hpp"
#include "minigp/mini_meta.hpp"

namespace minigp {

// Per-step regret against the best grid candidate, on true (noiseless)
// values.
struct RegretTrace {
    Eigen::VectorXd instantaneous; // r_t = f* - f(x_t)
    Eigen::VectorXd cumulative;    // R_t
    Eigen::VectorXd average;       // R_t / t
};

RegretTrace compute_regret(const RunResult& result, const Objective& objective,
                           const CandidateGrid& grid);

/// Information gain (1/2) logdet(I + xi^-2 W^{1/2} K_h W^{1/2}) on the
/// unique-candidate form; equals the expanded t x t value.
double info_gain(const KernelSpec& kernel, const UniqueHistory& history, double xi);

// Pointwise mean and 95% normal-approximation half-width over seeds.
struct CurveSummary {
    Eigen::VectorXd mean;
    Eigen::VectorXd halfwidth; // 1.96 * sd / sqrt(n), sd with n-1 denominator
};

/// Requires >= 2 curves of equal length.
CurveSummary summarize_curves(const std::vector<Eigen::VectorXd>& curves);

// Empirical check of the switch bound
// h <= (4 C^2 / (C^2 - 1)) (1 + kappa^2 / lambda) gamma_T.
struct SwitchBoundCheck {
    long switches = 0; // number of epochs
    double gamma = 0.0;
    double bound = 0.0;
    bool ok = false;
};

SwitchBoundCheck check_switch_bound(const RunResult& result, const KernelSpec& kernel,
                                    double C, double lambda, double xi);

} // namespace minigp

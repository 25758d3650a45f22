#pragma once

#include <cstdint>
#include <vector>

#include "minigp/acquisition.hpp"
#include "minigp/environment.hpp"
#include "minigp/posterior.hpp"

namespace minigp {

// One epoch of the low-switching loop: candidate, batch length and the
// posterior state it was derived from.
struct EpochTrace {
    int epoch_index = 0;                // h, 1-based
    Eigen::Index candidate_index = -1;
    long batch_length = 0;              // B_h actually executed
    long start_step = 0;                // t_h + 1, 1-based
    double variance_at_selection = 0.0; // sigma^2_{t_h}(x_{t_h+1}), prior units
    double beta_used = 0.0;
    double logdet_at_fit = 0.0;
    bool clamped = false;               // batch rule yielded 0, forced to 1
    bool truncated = false;             // cut short by the step budget
};

struct RunResult {
    std::vector<Eigen::Index> chosen_index; // per step, length T
    std::vector<double> reward;             // per step, raw environment reward
    std::vector<EpochTrace> epochs;
    std::vector<int> unique_count;          // q_t per step
    std::vector<int> segment_count;         // h_t per step (switch-delimited runs)
    std::vector<double> elapsed_seconds;    // cumulative wall-clock per step
    UniqueHistory final_history;            // scaled-feedback history at step T
    double lambda = 0.0;

    long total_steps() const { return static_cast<long>(chosen_index.size()); }
};

/// Batch length min(remaining_budget, max(1, floor((C^2 - 1) / variance))).
/// `variance` is the lambda-scaled posterior variance sigma^2 / lambda used
/// by the switching rule. Throws ConfigError when C <= 1.
long batch_length(double variance, double C, long remaining_budget);

/// Low-switching epoch loop: fit the weighted posterior on the unique
/// history, maximize the acquisition once, evaluate the chosen candidate
/// B_h times, merge the feedback, refit. Feedback is never consulted inside
/// an epoch, so the B_h evaluations are batchable.
RunResult run_mini(const Environment& env, const KernelSpec& kernel,
                   const BetaSchedule& schedule, double lambda, double C, long T,
                   std::uint64_t seed);

} // namespace minigp

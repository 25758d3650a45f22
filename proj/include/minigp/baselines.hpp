#pragma once

#include <cstdint>

#include "minigp/mini_meta.hpp"

namespace minigp {

// Exploration rate eps_t = min(1, a / t^b), non-increasing in t.
struct EpsilonSchedule {
    double a = 1.0;
    double b = 0.5;
    double value(long t) const;
};

/// Sequential GP-UCB / GP-EI (one refit and one exact acquisition
/// maximization per step). Shares the unique-candidate posterior, so repeats
/// still merge and the refit costs O(q_t^3).
RunResult run_gp_ucb(const Environment& env, const KernelSpec& kernel,
                     const BetaSchedule& schedule, double lambda, long T, std::uint64_t seed);

/// Epsilon-greedy over empirical means: explore uniformly with probability
/// eps_t, otherwise pick the best empirical mean among evaluated candidates
/// (lowest index on ties; uniform before any evaluation).
RunResult run_epsilon_greedy(const Environment& env, const EpsilonSchedule& eps, long T,
                             std::uint64_t seed);

/// Uniform i.i.d. candidate selection; the regret-normalization baseline.
RunResult run_uniform(const Environment& env, long T, std::uint64_t seed);

} // namespace minigp

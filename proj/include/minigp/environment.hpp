#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "minigp/rng.hpp"

namespace minigp {

/// A point of the finite decision set: grid index plus coordinates.
struct Candidate {
    Eigen::Index grid_index = -1;
    Eigen::VectorXd coords;
};

// Evenly spaced p^d grid over [lower, upper]^d, row-major index layout
// (last coordinate varies fastest).
class CandidateGrid {
public:
    CandidateGrid() = default;
    CandidateGrid(int dim, int points_per_dim, double lower, double upper,
                  Eigen::MatrixXd coordinates)
        : dim_(dim), points_per_dim_(points_per_dim), lower_(lower), upper_(upper),
          coordinates_(std::move(coordinates)) {}

    Eigen::Index size() const { return coordinates_.rows(); }
    int dim() const { return dim_; }
    int points_per_dim() const { return points_per_dim_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    const Eigen::MatrixXd& coordinates() const { return coordinates_; }
    Eigen::VectorXd point(Eigen::Index i) const { return coordinates_.row(i).transpose(); }
    Candidate candidate(Eigen::Index i) const { return Candidate{i, point(i)}; }

    std::vector<int> multi_index(Eigen::Index flat) const;
    Eigen::Index flat_index(const std::vector<int>& multi) const;

private:
    int dim_ = 0;
    int points_per_dim_ = 0;
    double lower_ = 0.0;
    double upper_ = 0.0;
    Eigen::MatrixXd coordinates_;
};

/// Throws ConfigError when p^d exceeds the cap (default 10^6 points).
CandidateGrid build_grid(int dim, int points_per_dim, double lower, double upper,
                         Eigen::Index max_points = 1000000);

enum class ObjectiveFamily { Ellipsoid, Rastrigin, Rosenbrock, Schaffer };

const char* objective_name(ObjectiveFamily family);
ObjectiveFamily objective_from_name(const std::string& name);

// The learner maximizes f = -raw_value; evaluations add N(0, xi^2) noise.
struct Objective {
    ObjectiveFamily family = ObjectiveFamily::Ellipsoid;
    double noise_std = 0.0;
};

double raw_value(const Objective& objective, const Eigen::VectorXd& x);

/// Noisy reward -raw_value(x_index) + xi * z; consumes exactly one normal draw.
double evaluate(const Objective& objective, const CandidateGrid& grid, Eigen::Index index,
                RngStream& rng);

/// Exhaustive scan for argmax of f = -raw_value over the grid (lowest index wins ties).
std::pair<Eigen::Index, double> true_optimum(const Objective& objective,
                                             const CandidateGrid& grid);

/// Default experiment noise level: 1% of the raw-value range over the grid.
double default_noise_std(ObjectiveFamily family, const CandidateGrid& grid);

// Affine map y -> (y - offset) / scale applied to rewards before they reach
// a GP policy, so targets live on the prior's unit scale.
struct RewardScaling {
    double offset = 0.0;
    double scale = 1.0;
    double apply(double y) const { return (y - offset) / scale; }
};

/// Centers f = -raw_value to [-1, 1] over the grid via an exhaustive scan.
RewardScaling oracle_reward_scaling(const Objective& objective, const CandidateGrid& grid);

// Everything a policy needs to interact with the problem.
struct Environment {
    CandidateGrid grid;
    Objective objective;
    RewardScaling scaling;

    double evaluate_raw(Eigen::Index index, RngStream& rng) const {
        return evaluate(objective, grid, index, rng);
    }
    /// Noise level on the scaled-reward axis.
    double scaled_noise_std() const { return objective.noise_std / scaling.scale; }
};

Environment make_environment(ObjectiveFamily family, const CandidateGrid& grid,
                             double noise_std, bool scale_rewards = true);

} // namespace minigp

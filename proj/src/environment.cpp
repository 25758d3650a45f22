#include "minigp/environment.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "minigp/errors.hpp"

namespace minigp {

std::vector<int> CandidateGrid::multi_index(Eigen::Index flat) const {
    if (flat < 0 || flat >= size()) {
        throw std::invalid_argument("CandidateGrid: index out of range");
    }
    std::vector<int> multi(static_cast<std::size_t>(dim_));
    for (int k = dim_ - 1; k >= 0; --k) {
        multi[static_cast<std::size_t>(k)] = static_cast<int>(flat % points_per_dim_);
        flat /= points_per_dim_;
    }
    return multi;
}

Eigen::Index CandidateGrid::flat_index(const std::vector<int>& multi) const {
    if (static_cast<int>(multi.size()) != dim_) {
        throw std::invalid_argument("CandidateGrid: multi-index dimension mismatch");
    }
    Eigen::Index flat = 0;
    for (int k = 0; k < dim_; ++k) {
        const int m = multi[static_cast<std::size_t>(k)];
        if (m < 0 || m >= points_per_dim_) {
            throw std::invalid_argument("CandidateGrid: multi-index out of range");
        }
        flat = flat * points_per_dim_ + m;
    }
    return flat;
}

CandidateGrid build_grid(int dim, int points_per_dim, double lower, double upper,
                         Eigen::Index max_points) {
    if (dim < 1 || points_per_dim < 2) {
        throw ConfigError("build_grid: need dim >= 1 and points_per_dim >= 2");
    }
    if (!(lower < upper)) {
        throw ConfigError("build_grid: need lower < upper");
    }
    double total = 1.0;
    for (int k = 0; k < dim; ++k) total *= points_per_dim;
    if (total > static_cast<double>(max_points)) {
        throw ConfigError("build_grid: grid size exceeds the configured cap");
    }

    const auto n = static_cast<Eigen::Index>(total);
    Eigen::MatrixXd coords(n, dim);
    const double step = (upper - lower) / (points_per_dim - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index rest = i;
        for (int k = dim - 1; k >= 0; --k) {
            const auto m = static_cast<double>(rest % points_per_dim);
            coords(i, k) = lower + step * m;
            rest /= points_per_dim;
        }
    }
    return CandidateGrid(dim, points_per_dim, lower, upper, std::move(coords));
}

const char* objective_name(ObjectiveFamily family) {
    switch (family) {
        case ObjectiveFamily::Ellipsoid: return "ellipsoid";
        case ObjectiveFamily::Rastrigin: return "rastrigin";
        case ObjectiveFamily::Rosenbrock: return "rosenbrock";
        case ObjectiveFamily::Schaffer: return "schaffer";
    }
    return "unknown";
}

ObjectiveFamily objective_from_name(const std::string& name) {
    if (name == "ellipsoid") return ObjectiveFamily::Ellipsoid;
    if (name == "rastrigin") return ObjectiveFamily::Rastrigin;
    if (name == "rosenbrock") return ObjectiveFamily::Rosenbrock;
    if (name == "schaffer") return ObjectiveFamily::Schaffer;
    throw ConfigError("unknown objective: " + name);
}

double raw_value(const Objective& objective, const Eigen::VectorXd& x) {
    const auto d = static_cast<int>(x.size());
    switch (objective.family) {
        case ObjectiveFamily::Ellipsoid: {
            double sum = 0.0;
            for (int k = 0; k < d; ++k) {
                const double w = d > 1 ? std::pow(10.0, 6.0 * k / (d - 1)) : 1.0;
                sum += w * x[k] * x[k];
            }
            return sum;
        }
        case ObjectiveFamily::Rastrigin: {
            double sum = 10.0 * d;
            for (int k = 0; k < d; ++k) {
                sum += x[k] * x[k] - 10.0 * std::cos(2.0 * std::numbers::pi * x[k]);
            }
            return sum;
        }
        case ObjectiveFamily::Rosenbrock: {
            double sum = 0.0;
            for (int k = 0; k + 1 < d; ++k) {
                const double a = x[k + 1] - x[k] * x[k];
                const double b = 1.0 - x[k];
                sum += 100.0 * a * a + b * b;
            }
            return sum;
        }
        case ObjectiveFamily::Schaffer: {
            double sum = 0.0;
            for (int k = 0; k + 1 < d; ++k) {
                const double s = std::sqrt(x[k] * x[k] + x[k + 1] * x[k + 1]);
                const double si = std::sin(50.0 * std::pow(s, 0.1));
                sum += std::pow(s, 0.25) * (si * si + 1.0);
            }
            return sum;
        }
    }
    throw std::logic_error("raw_value: unhandled objective family");
}

double evaluate(const Objective& objective, const CandidateGrid& grid, Eigen::Index index,
                RngStream& rng) {
    const double f = -raw_value(objective, grid.point(index));
    return f + objective.noise_std * rng.normal();
}

std::pair<Eigen::Index, double> true_optimum(const Objective& objective,
                                             const CandidateGrid& grid) {
    Eigen::Index best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double f = -raw_value(objective, grid.point(i));
        if (f > best_value) {
            best_value = f;
            best = i;
        }
    }
    return {best, best_value};
}

namespace {

std::pair<double, double> value_range(const Objective& objective, const CandidateGrid& grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double f = -raw_value(objective, grid.point(i));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    return {lo, hi};
}

} // namespace

double default_noise_std(ObjectiveFamily family, const CandidateGrid& grid) {
    const auto [lo, hi] = value_range(Objective{family, 0.0}, grid);
    return 0.01 * (hi - lo);
}

RewardScaling oracle_reward_scaling(const Objective& objective, const CandidateGrid& grid) {
    const auto [lo, hi] = value_range(objective, grid);
    RewardScaling scaling;
    scaling.offset = 0.5 * (hi + lo);
    scaling.scale = hi > lo ? 0.5 * (hi - lo) : 1.0;
    return scaling;
}

Environment make_environment(ObjectiveFamily family, const CandidateGrid& grid,
                             double noise_std, bool scale_rewards) {
    Environment env;
    env.grid = grid;
    env.objective = Objective{family, noise_std};
    env.scaling = scale_rewards ? oracle_reward_scaling(env.objective, grid) : RewardScaling{};
    return env;
}

} // namespace minigp

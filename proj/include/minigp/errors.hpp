#pragma once

#include <stdexcept>
#include <string>

namespace minigp {

/// Bad configuration values (non-positive bandwidth, C <= 1, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure that cannot occur for well-formed inputs; carries the
/// failing pivot index when the source is a Cholesky factorization.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg, int pivot = -1)
        : std::runtime_error(msg), pivot_(pivot) {}
    int pivot() const { return pivot_; }

private:
    int pivot_;
};

} // namespace minigp

#pragma once

#include <stdexcept>
#include <string>

namespace ionsplit {

// Invalid user-supplied configuration (unknown species, bad field, malformed file).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A physical quantity left its valid domain (Omega+^2 <= Omega-^2, rho <= 0,
// unstable configuration, lost well, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver ran out of its budget.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ionsplit

#pragma once

#include <stdexcept>
#include <string>

namespace gsd {

// Raised for malformed run configurations (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an eigensolve fails to converge (CLI exit code 3).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gsd

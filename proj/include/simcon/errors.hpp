#pragma once

#include <stdexcept>
#include <string>

namespace simcon {

/// Bad input: dimensions, domains, file contents, config values.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during a solve: integrator overflow, CG breakdown,
/// eigensolver non-convergence, optimizer divergence.
/// The CLI maps this to exit code 2.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace simcon

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace imc {

/// Malformed or inconsistent configuration / input file. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver produced a non-finite objective. Carries the objective
/// values recorded up to the failing iteration.
class SolverDiverged : public std::runtime_error {
public:
    SolverDiverged(const std::string& msg, std::vector<double> trace)
        : std::runtime_error(msg), objective_trace(std::move(trace)) {}

    std::vector<double> objective_trace;
};

} // namespace imc

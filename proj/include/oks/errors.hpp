#pragma once

#include <stdexcept>
#include <string>

namespace oks {

/// Bad configuration input: unknown unit tag, malformed scenario file,
/// invalid CLI sweep syntax. Maps to exit code 1 in the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A quantity violated a physical precondition (negative waist, zero
/// repetition rate, z outside the crystal).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical routine failed to converge. Carries the partial estimate so a
/// caller can report how far the computation got. Exit code 2 in the CLI.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double partial, double error_estimate)
        : std::runtime_error(what), partial_value(partial), error_estimate(error_estimate) {}

    double partial_value;
    double error_estimate;
};

/// Post-processing failure on computed data (e.g. no half-maximum crossing).
class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oks

// qsb -- benchmarking toolkit for quantum-cryptographic figures of merit.
// Error hierarchy shared by all modules.  The CLI maps these onto exit codes:
// ConfigError -> 2, AssumptionError -> 3, SolverError -> 4.
#pragma once

#include <stdexcept>
#include <string>

namespace qsb {

// Malformed or inconsistent user input (bad populations, bad sweep bounds, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates a security assumption of the analysis (e.g. a coherent source
// fed into a protocol whose proof requires phase randomization).  The message
// names the violated assumption.
class AssumptionError : public std::runtime_error {
public:
    explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical solver did not reach the requested certificate quality.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qsb

#pragma once

#include <stdexcept>
#include <string>

namespace bellchain {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape/size disagreement between operands.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Input violates a documented precondition (non-Hermitian H, odd chain length, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Iterative eigensolver failed to converge; carries the best residual reached.
struct SolverError : Error {
    double residual;
    SolverError(const std::string& msg, double res) : Error(msg), residual(res) {}
};

// An internal consistency check failed (e.g. a measurement residual that is not
// a Weyl element, which would falsify the correction construction itself).
struct IntegrityError : Error {
    explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

// Malformed command-line input.
struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

} // namespace bellchain

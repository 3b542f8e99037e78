#pragma once

#include <stdexcept>
#include <string>

namespace randao {

// Raised when a probability computation leaves its tolerance envelope
// (negative point mass, row drift, base > 1, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a linear solve fails or leaves residuals above tolerance.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when policy iteration exceeds its iteration budget.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by appendix bounds when the stability condition q < 1 fails.
struct StabilityError : std::runtime_error {
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace randao

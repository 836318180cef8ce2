#pragma once

#include <stdexcept>
#include <string>

namespace ybx {

// Numerical guard failures (CLI exit code 3).
struct NumericalGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleProximity : NumericalGuard {
    explicit PoleProximity(const std::string& m) : NumericalGuard("PoleProximity: " + m) {}
};

struct IllConditioned : NumericalGuard {
    explicit IllConditioned(const std::string& m) : NumericalGuard("IllConditioned: " + m) {}
};

struct InvarianceViolation : NumericalGuard {
    explicit InvarianceViolation(const std::string& m) : NumericalGuard("InvarianceViolation: " + m) {}
};

struct BranchGuard : NumericalGuard {
    explicit BranchGuard(const std::string& m) : NumericalGuard("BranchGuard: " + m) {}
};

struct ZeroMatrix : NumericalGuard {
    explicit ZeroMatrix(const std::string& m) : NumericalGuard("ZeroMatrix: " + m) {}
};

// Contract violations (CLI exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::logic_error {
    explicit DimensionMismatch(const std::string& m) : std::logic_error("dimension mismatch: " + m) {}
};

}  // namespace ybx

#pragma once

#include <stdexcept>
#include <string>

namespace fracbvp {

/// A function left the closed-form term algebra (e.g. differentiating an
/// interior jump, or a one-sided integral of a non-convertible term).
struct UnsupportedRepresentation : std::runtime_error {
    explicit UnsupportedRepresentation(const std::string& what)
        : std::runtime_error(what) {}
};

/// Linear solve failed or is numerically untrustworthy.
struct SolverError : std::runtime_error {
    double condition_estimate;
    explicit SolverError(const std::string& what, double cond = 0.0)
        : std::runtime_error(what), condition_estimate(cond) {}
};

/// A constructive search did not terminate within its step budget.
struct SearchFailure : std::runtime_error {
    explicit SearchFailure(const std::string& what) : std::runtime_error(what) {}
};

/// The reference (oracle) quadrature path failed to converge.
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

/// Config file rejected; `where` is a JSON-pointer-ish location.
struct ConfigError : std::runtime_error {
    std::string where;
    ConfigError(const std::string& where_, const std::string& what)
        : std::runtime_error(where_ + ": " + what), where(where_) {}
};

/// The bordered characterization system is singular, which signals a
/// violated (or nearly violated) wellposedness condition.
struct WellposednessViolation : std::runtime_error {
    explicit WellposednessViolation(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace fracbvp

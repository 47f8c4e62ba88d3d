#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lassodist {

// Matrix or vector shapes that do not fit the operation (non-power-of-two
// Hadamard order, length mismatches, out-of-range indices).
class InvalidDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An exhaustive enumeration would exceed its configured cap.
class TooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

class InvalidLaw : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateHyperplane : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExclusionBudgetExceeded : public std::runtime_error {
public:
    ExclusionBudgetExceeded(std::size_t excluded, std::size_t total)
        : std::runtime_error("solver failures excluded " + std::to_string(excluded) + " of " +
                             std::to_string(total) + " replicates, above the 0.1% budget"),
          excluded_(excluded), total_(total) {}

    std::size_t excluded() const noexcept { return excluded_; }
    std::size_t total() const noexcept { return total_; }

private:
    std::size_t excluded_;
    std::size_t total_;
};

// Coordinate descent ran out of sweeps. Carries the last iterate so callers
// can inspect how far from optimal it was.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(Eigen::VectorXd last_iterate, double residual, int sweeps)
        : std::runtime_error("coordinate descent did not converge after " + std::to_string(sweeps) +
                             " sweeps (KKT residual " + std::to_string(residual) + ")"),
          last_iterate_(std::move(last_iterate)), residual_(residual), sweeps_(sweeps) {}

    const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }
    int sweeps() const noexcept { return sweeps_; }

private:
    Eigen::VectorXd last_iterate_;
    double residual_;
    int sweeps_;
};

}  // namespace lassodist

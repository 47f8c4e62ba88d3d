#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lassodist/linmodel.hpp"

namespace lassodist {

/// sign(z) * max(|z| - t, 0).
inline double soft_threshold(double z, double t) noexcept {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

/// Subgradient tolerance for classifying |gamma_k| = 1.
inline constexpr double kActiveSetTolerance = 1e-6;

struct SolverOptions {
    double tol = 1e-10;
    /// Sweep cap; a value <= 0 means 100 * N.
    int max_iter = 0;
    /// Starting point; zero when empty.
    std::optional<Eigen::VectorXd> start;
    /// Record the objective after every sweep (tests only; costs one O(N^2) pass per sweep).
    bool record_objective = false;
};

/// Minimizer of tau*||x||_1 + 0.5*||b - A x||^2 with its KKT certificate.
struct LassoSolution {
    Eigen::VectorXd x_hat;
    /// gamma = (A^T b - W x_hat) / tau; zero vector when tau = 0.
    Eigen::VectorXd gamma;
    /// Indices with |gamma_k| = 1 within kActiveSetTolerance.
    std::vector<Eigen::Index> active_set;
    double kkt_residual = 0.0;
    int iterations = 0;
    std::vector<double> objective_trace;
};

struct KktCheck {
    Eigen::VectorXd gamma;
    double residual = 0.0;
};

double lasso_objective(const MeasurementModel& model, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x);

/// Cyclic coordinate descent on the Gram form of the problem.
///
/// Stops once the largest coordinate move in a sweep is below
/// tol * (1 + ||x||_max) and the KKT residual is at most 10 * tol.
/// Throws NonConvergence when the sweep cap is reached first.
LassoSolution solve_lasso(const MeasurementModel& model, const Eigen::VectorXd& b,
                          const SolverOptions& options = {});

/// Subgradient implied by x_hat and how far it is from satisfying the
/// optimality conditions: max(0, max|gamma| - 1, max over the support of
/// |gamma_k - sign(x_k)|). With tau = 0 the residual is ||A^T b - W x||_max.
KktCheck kkt_check(const MeasurementModel& model, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& x_hat);

}  // namespace lassodist

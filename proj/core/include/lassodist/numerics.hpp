#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace lassodist {

inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Physicists' Gauss-Hermite rule: sum_i w_i f(t_i) ~ int f(t) exp(-t^2) dt.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Golub-Welsch construction from the Jacobi matrix of the Hermite recurrence.
/// Results are cached per node count.
const GaussHermiteRule& gauss_hermite(int nodes);

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix; eigenvalues below
/// 1e-12 * (largest) are treated as zero.
Eigen::MatrixXd psd_pseudoinverse(const Eigen::MatrixXd& R);

}  // namespace lassodist

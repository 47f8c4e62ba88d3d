#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lassodist/linmodel.hpp"

namespace lassodist {

/// Value of a characteristic function at one frequency.
using CfValue = std::complex<double>;

/// Sample sets are stored one replicate per column (N x L).
using SampleMatrix = Eigen::MatrixXd;

/// How the sign of a coordinate that is exactly zero is resolved.
///
/// Zero: S(0) = 0, which is what the density-based expansion assumes.
/// FromGamma: the KKT subgradient gamma_k stands in for the sign, so the
/// expansion reproduces W x_hat + tau * gamma = A^T b sample by sample.
enum class SignAtZero { Zero, FromGamma };

/// Evaluation route for the 2^N expansion.
enum class ExpansionForm { Product, SubsetSum };

/// Frequency u, its image c = W u, and the coordinates carrying a sign weight.
struct CfQuery {
    Eigen::VectorXd u;
    Eigen::VectorXd c;
    std::vector<Eigen::Index> subset;

    static CfQuery make(const Eigen::VectorXd& u, const Eigen::MatrixXd& W,
                        std::vector<Eigen::Index> subset = {});
};

/// exp(i u^T W x - sigma^2/2 u^T W u): the CF of A^T b.
CfValue gram_gaussian_cf(const Eigen::VectorXd& u, const MeasurementModel& model);

/// Sample mean of exp(i u^T y).
CfValue empirical_cf(const SampleMatrix& samples, const Eigen::VectorXd& u);
CfValue empirical_cf(std::span<const double> samples, double u);

/// Sample-domain form of the Hilbert-convolved CF:
///   mean over samples of prod_{k in subset} (i S(x_k)) * exp(i c^T x).
/// `gamma` must be supplied (same shape as `x_hat`) for FromGamma.
CfValue sign_weighted_cf(const SampleMatrix& x_hat, const CfQuery& query, SignAtZero policy,
                         const SampleMatrix* gamma = nullptr);

inline constexpr Eigen::Index kMaxExpansionDimension = 20;

/// One term of the subset expansion: prod_{k in subset} sin(tau u_k) *
/// prod_{j not in subset} cos(tau u_j).
struct ExpansionTerm {
    std::vector<Eigen::Index> subset;
    double weight = 0.0;
};

/// All 2^N terms, subsets enumerated by bitmask (bit k <-> coordinate k).
std::vector<ExpansionTerm> expansion_terms(const Eigen::VectorXd& u, double tau);

/// CF of W x_hat + tau S(x_hat) at u, estimated from LASSO samples through
/// the subset expansion (sum over all subsets of sign-weighted CFs at c = W u).
///
/// The Product form evaluates mean_l prod_j w_j(l) exp(i c^T x_l) with
/// w_j = cos(tau u_j) + i S(x_j) sin(tau u_j), which is algebraically the
/// same sum. Under FromGamma the weight becomes exp(i tau u_j gamma_j); that
/// is only available in Product form.
CfValue kkt_image_cf(const SampleMatrix& x_hat, const Eigen::VectorXd& u,
                     const MeasurementModel& model, SignAtZero policy,
                     const SampleMatrix* gamma = nullptr,
                     ExpansionForm form = ExpansionForm::Product);

/// One-dimensional sliced form: mean of exp(i u (z + tau S(z))) with S(0) = 0.
CfValue slice_image_cf(std::span<const double> z_k, double u, double tau);

/// Gaussian stand-in for the law of z_hat = W x_hat, with the hyperplane
/// normal h (a column of W^-1 or W^+) whose sign weights the slice term.
struct GaussianSurrogate {
    Eigen::VectorXd m;
    Eigen::MatrixXd R;
    Eigen::VectorXd h;

    /// Throws on shape mismatch, asymmetric R, or R with a negative eigenvalue.
    void validate() const;

    /// Sample mean and covariance of the columns of `z_hat`.
    static GaussianSurrogate from_samples(const SampleMatrix& z_hat, Eigen::VectorXd h);
};

/// Outcome of integrating out every coordinate except k. The slice term is
///   i * orientation * int N(z; mean, variance) [1 - 2 Phi(beta z + alpha)] e^{iuz} dz
/// or, when `step` is set, the same with Phi replaced by its zero-variance
/// limit, the indicator 1{beta z + alpha > 0}.
struct SliceReduction {
    double mean = 0.0;
    double variance = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double orientation = 1.0;
    bool step = false;
    Eigen::Index pivot = 0;
};

inline constexpr double kHyperplanePivotFloor = 1e-12;

/// Conditioning recursion on the surrogate: eliminate the pivot coordinate
/// first (largest |h_j| over j != k), then the remaining coordinates one at a
/// time, keeping a linear form and an accumulated variance inside Phi.
SliceReduction reduce_gaussian_slice(const GaussianSurrogate& surrogate, Eigen::Index k);

/// i * E[S(h^T z) exp(i u z_k)] for z ~ N(m, R). The final one-dimensional
/// Fourier integral uses Gauss-Hermite with `quadrature_nodes` nodes
/// (at least 32) while Phi is smooth on the scale of z_k; steeper cases and
/// the step limit use adaptive quadrature split where the weight changes sign.
CfValue gaussian_slice_term(const GaussianSurrogate& surrogate, Eigen::Index k, double u,
                            int quadrature_nodes = 128);

}  // namespace lassodist

#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "lassodist/random.hpp"

namespace lassodist {

enum class ModelKind { Orthogonal, FullRank, Singular };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

/// Linear measurement model b = A x + v, v ~ N(0, sigma^2 I), together with
/// the LASSO threshold tau used to estimate x from b.
///
/// Columns of A must have unit Euclidean norm. The Gram matrix W = A^T A,
/// its numerical rank and the sparsity K of x are computed once at
/// construction; the object is immutable afterwards.
class MeasurementModel {
public:
    MeasurementModel(Eigen::MatrixXd A, Eigen::VectorXd x, double sigma, double tau);

    const Eigen::MatrixXd& A() const noexcept { return A_; }
    const Eigen::VectorXd& x() const noexcept { return x_; }
    const Eigen::MatrixXd& W() const noexcept { return W_; }
    double sigma() const noexcept { return sigma_; }
    double tau() const noexcept { return tau_; }

    Eigen::Index M() const noexcept { return A_.rows(); }
    Eigen::Index N() const noexcept { return A_.cols(); }
    /// Number of nonzero entries of x.
    Eigen::Index K() const noexcept { return K_; }
    Eigen::Index rank() const noexcept { return rank_; }
    ModelKind kind() const noexcept { return kind_; }

    /// Mean of A^T b, i.e. W x.
    Eigen::VectorXd gram_mean() const { return W_ * x_; }

    /// Copy with a different noise level or threshold.
    MeasurementModel with_noise(double sigma, double tau) const;

private:
    Eigen::MatrixXd A_;
    Eigen::VectorXd x_;
    Eigen::MatrixXd W_;
    double sigma_;
    double tau_;
    Eigen::Index K_ = 0;
    Eigen::Index rank_ = 0;
    ModelKind kind_ = ModelKind::Singular;
};

/// Unscaled Sylvester Hadamard matrix of order M (entries +-1).
Eigen::MatrixXd sylvester_hadamard(Eigen::Index M);

/// Orthogonal model: A = H_M / sqrt(M), so W = I.
MeasurementModel build_hadamard_model(Eigen::Index M, const Eigen::VectorXd& x, double sigma,
                                      double tau);

/// Rademacher (+-1) entries from a seeded stream, columns scaled to unit norm.
MeasurementModel build_bernoulli_model(Eigen::Index M, Eigen::Index N, const Eigen::VectorXd& x,
                                       double sigma, double tau, std::uint64_t seed);

/// One draw of b = A x + v using the supplied stream.
Eigen::VectorXd sample_measurement(const MeasurementModel& model, RandomStream& stream);

/// Numerical rank: singular values below 1e-10 * (largest) count as zero.
Eigen::Index numerical_rank(const Eigen::MatrixXd& M);

ModelKind classify_gram(const Eigen::MatrixXd& W);

inline constexpr double kDefaultRipEnumerationCap = 1e6;

/// Restricted isometry constant delta_K by exhaustive enumeration of all
/// size-K supports. Throws TooLarge when C(N, K) exceeds `cap`.
double rip_constant(const Eigen::MatrixXd& A, Eigen::Index K,
                    double cap = kDefaultRipEnumerationCap);

}  // namespace lassodist

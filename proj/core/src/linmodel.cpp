#include "lassodist/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lassodist/errors.hpp"

namespace lassodist {

namespace {

constexpr double kUnitNormTolerance = 1e-12;
constexpr double kRankThreshold = 1e-10;

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

double binomial(Eigen::Index n, Eigen::Index k) {
    double c = 1.0;
    for (Eigen::Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Orthogonal: return "orthogonal";
        case ModelKind::FullRank: return "full_rank";
        case ModelKind::Singular: return "singular";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "orthogonal") return ModelKind::Orthogonal;
    if (name == "full_rank") return ModelKind::FullRank;
    if (name == "singular") return ModelKind::Singular;
    throw ConfigError("unknown model kind '" + std::string(name) +
                      "' (expected orthogonal, full_rank or singular)");
}

MeasurementModel::MeasurementModel(Eigen::MatrixXd A, Eigen::VectorXd x, double sigma, double tau)
    : A_(std::move(A)), x_(std::move(x)), sigma_(sigma), tau_(tau) {
    if (A_.rows() < 1 || A_.cols() < 1) throw InvalidDimension("model matrix must be non-empty");
    if (x_.size() != A_.cols())
        throw InvalidDimension("parameter length " + std::to_string(x_.size()) +
                               " does not match N = " + std::to_string(A_.cols()));
    if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw std::invalid_argument("sigma must be >= 0");
    if (!(tau_ >= 0.0) || !std::isfinite(tau_)) throw std::invalid_argument("tau must be >= 0");
    for (Eigen::Index j = 0; j < A_.cols(); ++j) {
        if (std::abs(A_.col(j).norm() - 1.0) > kUnitNormTolerance)
            throw InvalidDimension("column " + std::to_string(j) + " of A does not have unit norm");
    }
    W_ = A_.transpose() * A_;
    // Symmetrize exactly; the product is symmetric up to rounding only.
    W_ = 0.5 * (W_ + W_.transpose()).eval();
    K_ = (x_.array() != 0.0).count();
    rank_ = numerical_rank(W_);
    kind_ = classify_gram(W_);
}

MeasurementModel MeasurementModel::with_noise(double sigma, double tau) const {
    return MeasurementModel(A_, x_, sigma, tau);
}

Eigen::MatrixXd sylvester_hadamard(Eigen::Index M) {
    if (!is_power_of_two(M))
        throw InvalidDimension("Hadamard order must be a power of two, got " + std::to_string(M));
    Eigen::MatrixXd H = Eigen::MatrixXd::Ones(1, 1);
    while (H.rows() < M) {
        const Eigen::Index n = H.rows();
        Eigen::MatrixXd next(2 * n, 2 * n);
        next << H, H, H, -H;
        H = std::move(next);
    }
    return H;
}

MeasurementModel build_hadamard_model(Eigen::Index M, const Eigen::VectorXd& x, double sigma,
                                      double tau) {
    Eigen::MatrixXd A = sylvester_hadamard(M) / std::sqrt(static_cast<double>(M));
    return MeasurementModel(std::move(A), x, sigma, tau);
}

MeasurementModel build_bernoulli_model(Eigen::Index M, Eigen::Index N, const Eigen::VectorXd& x,
                                       double sigma, double tau, std::uint64_t seed) {
    if (M < 1 || N < 1) throw InvalidDimension("Bernoulli model needs M >= 1 and N >= 1");
    if (x.size() != N) throw InvalidDimension("parameter length does not match N");
    RandomStream stream(seed);
    Eigen::MatrixXd A(M, N);
    // Column-major fill keeps the draw order independent of M for the first columns.
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = 0; i < M; ++i) A(i, j) = stream.rademacher();
    A /= std::sqrt(static_cast<double>(M));
    return MeasurementModel(std::move(A), x, sigma, tau);
}

Eigen::VectorXd sample_measurement(const MeasurementModel& model, RandomStream& stream) {
    Eigen::VectorXd b = model.A() * model.x();
    if (model.sigma() == 0.0) return b;
    return b + stream.normal_vector(model.M(), model.sigma());
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    return (s.array() > kRankThreshold * s[0]).count();
}

ModelKind classify_gram(const Eigen::MatrixXd& W) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(W.rows(), W.cols());
    if ((W - I).cwiseAbs().maxCoeff() < 1e-10) return ModelKind::Orthogonal;
    return numerical_rank(W) == W.rows() ? ModelKind::FullRank : ModelKind::Singular;
}

double rip_constant(const Eigen::MatrixXd& A, Eigen::Index K, double cap) {
    const Eigen::Index N = A.cols();
    if (K < 1 || K > N)
        throw InvalidDimension("RIP order K must satisfy 1 <= K <= N (K = " + std::to_string(K) +
                               ", N = " + std::to_string(N) + ")");
    const double supports = binomial(N, K);
    if (supports > cap)
        throw TooLarge("RIP enumeration needs C(" + std::to_string(N) + ", " + std::to_string(K) +
                       ") = " + std::to_string(supports) + " supports, above the cap of " +
                       std::to_string(cap));

    const Eigen::MatrixXd W = A.transpose() * A;
    std::vector<Eigen::Index> support(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < K; ++i) support[static_cast<std::size_t>(i)] = i;

    Eigen::MatrixXd sub(K, K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    double delta = 0.0;
    while (true) {
        for (Eigen::Index r = 0; r < K; ++r)
            for (Eigen::Index c = 0; c < K; ++c)
                sub(r, c) = W(support[static_cast<std::size_t>(r)], support[static_cast<std::size_t>(c)]);
        eig.compute(sub, Eigen::EigenvaluesOnly);
        const auto& ev = eig.eigenvalues();
        delta = std::max({delta, ev[K - 1] - 1.0, 1.0 - ev[0]});

        // Advance to the next K-combination in lexicographic order.
        Eigen::Index i = K - 1;
        while (i >= 0 && support[static_cast<std::size_t>(i)] == N - K + i) --i;
        if (i < 0) break;
        ++support[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < K; ++j)
            support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
    }
    return delta;
}

}  // namespace lassodist

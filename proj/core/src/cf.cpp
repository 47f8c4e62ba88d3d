#include "lassodist/cf.hpp"

#include <cmath>
#include <string>

#include "lassodist/errors.hpp"

namespace lassodist {

namespace {

constexpr CfValue kI{0.0, 1.0};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

CfValue unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

void require_samples(const SampleMatrix& samples, Eigen::Index n, const char* what) {
    if (samples.cols() == 0) throw std::invalid_argument(std::string(what) + ": empty sample set");
    if (samples.rows() != n)
        throw InvalidDimension(std::string(what) + ": sample dimension " +
                               std::to_string(samples.rows()) + " does not match " +
                               std::to_string(n));
}

const SampleMatrix& require_gamma(const SampleMatrix& x_hat, const SampleMatrix* gamma) {
    if (gamma == nullptr)
        throw std::invalid_argument("FromGamma sign policy needs the KKT subgradient samples");
    if (gamma->rows() != x_hat.rows() || gamma->cols() != x_hat.cols())
        throw InvalidDimension("subgradient samples do not match the estimate samples");
    return *gamma;
}

// Resolved S(x_hat(k, l)) under the policy.
double resolved_sign(const SampleMatrix& x_hat, const SampleMatrix* gamma, SignAtZero policy,
                     Eigen::Index k, Eigen::Index l) {
    const double v = x_hat(k, l);
    if (v != 0.0 || policy == SignAtZero::Zero) return sign(v);
    return (*gamma)(k, l);
}

}  // namespace

CfQuery CfQuery::make(const Eigen::VectorXd& u, const Eigen::MatrixXd& W,
                      std::vector<Eigen::Index> subset) {
    if (W.rows() != u.size() || W.cols() != u.size())
        throw InvalidDimension("frequency length does not match the Gram matrix");
    for (Eigen::Index k : subset)
        if (k < 0 || k >= u.size()) throw InvalidDimension("subset index out of range");
    return CfQuery{u, W * u, std::move(subset)};
}

CfValue gram_gaussian_cf(const Eigen::VectorXd& u, const MeasurementModel& model) {
    if (u.size() != model.N()) throw InvalidDimension("frequency length does not match N");
    const Eigen::VectorXd Wu = model.W() * u;
    const double mean_phase = Wu.dot(model.x());
    const double quad = u.dot(Wu);
    const double s2 = model.sigma() * model.sigma();
    return std::exp(-0.5 * s2 * quad) * unit_phase(mean_phase);
}

CfValue empirical_cf(const SampleMatrix& samples, const Eigen::VectorXd& u) {
    require_samples(samples, u.size(), "empirical_cf");
    const Eigen::RowVectorXd phases = u.transpose() * samples;
    CfValue acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < phases.size(); ++l) acc += unit_phase(phases[l]);
    return acc / static_cast<double>(phases.size());
}

CfValue empirical_cf(std::span<const double> samples, double u) {
    if (samples.empty()) throw std::invalid_argument("empirical_cf: empty sample set");
    CfValue acc{0.0, 0.0};
    for (double y : samples) acc += unit_phase(u * y);
    return acc / static_cast<double>(samples.size());
}

CfValue sign_weighted_cf(const SampleMatrix& x_hat, const CfQuery& query, SignAtZero policy,
                         const SampleMatrix* gamma) {
    require_samples(x_hat, query.c.size(), "sign_weighted_cf");
    if (policy == SignAtZero::FromGamma) require_gamma(x_hat, gamma);
    for (Eigen::Index k : query.subset)
        if (k < 0 || k >= x_hat.rows()) throw InvalidDimension("subset index out of range");

    const Eigen::RowVectorXd phases = query.c.transpose() * x_hat;
    CfValue acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < x_hat.cols(); ++l) {
        CfValue weight{1.0, 0.0};
        for (Eigen::Index k : query.subset) weight *= kI * resolved_sign(x_hat, gamma, policy, k, l);
        acc += weight * unit_phase(phases[l]);
    }
    return acc / static_cast<double>(x_hat.cols());
}

std::vector<ExpansionTerm> expansion_terms(const Eigen::VectorXd& u, double tau) {
    const Eigen::Index N = u.size();
    if (N > kMaxExpansionDimension)
        throw TooLarge("subset expansion over N = " + std::to_string(N) + " coordinates has 2^" +
                       std::to_string(N) + " terms, above the cap of 2^" +
                       std::to_string(kMaxExpansionDimension));
    const std::uint64_t count = std::uint64_t{1} << N;
    std::vector<ExpansionTerm> terms;
    terms.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        ExpansionTerm term;
        term.weight = 1.0;
        for (Eigen::Index k = 0; k < N; ++k) {
            if (mask & (std::uint64_t{1} << k)) {
                term.subset.push_back(k);
                term.weight *= std::sin(tau * u[k]);
            } else {
                term.weight *= std::cos(tau * u[k]);
            }
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

CfValue kkt_image_cf(const SampleMatrix& x_hat, const Eigen::VectorXd& u,
                     const MeasurementModel& model, SignAtZero policy, const SampleMatrix* gamma,
                     ExpansionForm form) {
    const Eigen::Index N = model.N();
    if (u.size() != N) throw InvalidDimension("frequency length does not match N");
    require_samples(x_hat, N, "kkt_image_cf");
    if (N > kMaxExpansionDimension)
        throw TooLarge("subset expansion over N = " + std::to_string(N) + " coordinates has 2^" +
                       std::to_string(N) + " terms, above the cap of 2^" +
                       std::to_string(kMaxExpansionDimension));
    if (policy == SignAtZero::FromGamma) require_gamma(x_hat, gamma);
    const double tau = model.tau();

    if (form == ExpansionForm::SubsetSum) {
        if (policy == SignAtZero::FromGamma)
            throw std::invalid_argument(
                "the subset-sum form needs sign-valued weights; use the product form with FromGamma");
        const Eigen::MatrixXd& W = model.W();
        CfValue acc{0.0, 0.0};
        for (const ExpansionTerm& term : expansion_terms(u, tau)) {
            if (term.weight == 0.0) continue;
            acc += term.weight * sign_weighted_cf(x_hat, CfQuery::make(u, W, term.subset), policy);
        }
        return acc;
    }

    const Eigen::VectorXd c = model.W() * u;
    const Eigen::RowVectorXd phases = c.transpose() * x_hat;
    Eigen::VectorXd cos_tu(N), sin_tu(N);
    for (Eigen::Index j = 0; j < N; ++j) {
        cos_tu[j] = std::cos(tau * u[j]);
        sin_tu[j] = std::sin(tau * u[j]);
    }

    CfValue acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < x_hat.cols(); ++l) {
        CfValue weight{1.0, 0.0};
        if (policy == SignAtZero::FromGamma) {
            double angle = 0.0;
            for (Eigen::Index j = 0; j < N; ++j) angle += tau * u[j] * (*gamma)(j, l);
            weight = unit_phase(angle);
        } else {
            for (Eigen::Index j = 0; j < N; ++j)
                weight *= CfValue{cos_tu[j], sign(x_hat(j, l)) * sin_tu[j]};
        }
        acc += weight * unit_phase(phases[l]);
    }
    return acc / static_cast<double>(x_hat.cols());
}

CfValue slice_image_cf(std::span<const double> z_k, double u, double tau) {
    if (z_k.empty()) throw std::invalid_argument("slice_image_cf: empty sample set");
    CfValue acc{0.0, 0.0};
    for (double z : z_k) acc += unit_phase(u * (z + tau * sign(z)));
    return acc / static_cast<double>(z_k.size());
}

}  // namespace lassodist

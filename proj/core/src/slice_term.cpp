#include <algorithm>
#include <cmath>
#include <utility>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lassodist/cf.hpp"
#include "lassodist/errors.hpp"
#include "lassodist/numerics.hpp"

namespace lassodist {

namespace {

constexpr CfValue kI{0.0, 1.0};
// A standardized slope above this is indistinguishable from a step at double precision.
constexpr double kStepSlope = 1e8;
// Above this slope (per standard deviation of z_k) Phi changes too fast for Gauss-Hermite.
constexpr double kHermiteSlope = 1.0;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// int N(z; mean, sd^2) weight(z) e^{iuz} dz over mean +- 12 sd, split at `cut`
// so that each adaptive Gauss-Kronrod piece sees a smooth integrand.
template <typename Weight>
CfValue split_fourier(double mean, double sd, double u, double cut, Weight weight) {
    using boost::math::quadrature::gauss_kronrod;
    const double lo = mean - 12.0 * sd;
    const double hi = mean + 12.0 * sd;
    cut = std::clamp(cut, lo, hi);
    auto density = [&](double z) {
        const double t = (z - mean) / sd;
        return std::exp(-0.5 * t * t) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    auto re = [&](double z) { return density(z) * weight(z) * std::cos(u * z); };
    auto im = [&](double z) { return density(z) * weight(z) * std::sin(u * z); };
    CfValue acc{0.0, 0.0};
    for (auto [a, b] : {std::pair{lo, cut}, std::pair{cut, hi}}) {
        if (!(b > a)) continue;
        acc += CfValue{gauss_kronrod<double, 31>::integrate(re, a, b, 15, 1e-14),
                       gauss_kronrod<double, 31>::integrate(im, a, b, 15, 1e-14)};
    }
    return acc;
}

// int N(z; mean, variance) [1 - 2 * 1{beta z + alpha > 0}] e^{iuz} dz.
CfValue step_fourier(double mean, double variance, double beta, double alpha, double u) {
    auto weight = [&](double z) { return beta * z + alpha > 0.0 ? -1.0 : 1.0; };
    if (variance <= 0.0) return weight(mean) * CfValue{std::cos(u * mean), std::sin(u * mean)};
    if (beta == 0.0) {
        const double phase = u * mean;
        return weight(0.0) * std::exp(-0.5 * u * u * variance) *
               CfValue{std::cos(phase), std::sin(phase)};
    }
    return split_fourier(mean, std::sqrt(variance), u, -alpha / beta, weight);
}

}  // namespace

void GaussianSurrogate::validate() const {
    const Eigen::Index n = m.size();
    if (n < 1) throw InvalidDimension("Gaussian surrogate needs at least one dimension");
    if (R.rows() != n || R.cols() != n || h.size() != n)
        throw InvalidDimension("Gaussian surrogate: mean, covariance and normal disagree in size");
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Gaussian surrogate covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues()[0] < -1e-10)
        throw std::invalid_argument("Gaussian surrogate covariance is not positive semidefinite");
}

GaussianSurrogate GaussianSurrogate::from_samples(const SampleMatrix& z_hat, Eigen::VectorXd h) {
    if (z_hat.cols() < 2) throw std::invalid_argument("surrogate estimation needs >= 2 samples");
    GaussianSurrogate s;
    s.m = z_hat.rowwise().mean();
    const Eigen::MatrixXd centered = z_hat.colwise() - s.m;
    s.R = centered * centered.transpose() / static_cast<double>(z_hat.cols() - 1);
    s.R = 0.5 * (s.R + s.R.transpose()).eval();
    s.h = std::move(h);
    return s;
}

SliceReduction reduce_gaussian_slice(const GaussianSurrogate& surrogate, Eigen::Index k) {
    surrogate.validate();
    const Eigen::Index N = surrogate.m.size();
    if (k < 0 || k >= N) throw InvalidDimension("slice component out of range");
    const Eigen::VectorXd& h = surrogate.h;

    SliceReduction red;
    red.mean = surrogate.m[k];
    red.variance = std::max(surrogate.R(k, k), 0.0);

    Eigen::Index pivot = -1;
    double largest = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        if (j != k && std::abs(h[j]) > largest) {
            largest = std::abs(h[j]);
            pivot = j;
        }
    }
    if (pivot < 0 || largest < kHyperplanePivotFloor) {
        // Hyperplane is z_k = 0: S(h^T z) = S(h_k) S(z_k).
        if (std::abs(h[k]) < kHyperplanePivotFloor)
            throw DegenerateHyperplane("hyperplane normal has no entry above " +
                                       std::to_string(kHyperplanePivotFloor));
        red.step = true;
        red.beta = -1.0;
        red.alpha = 0.0;
        red.orientation = sign(h[k]);
        red.pivot = k;
        return red;
    }

    // Reorder so the slice component comes first and the pivot last.
    std::vector<Eigen::Index> order{k};
    for (Eigen::Index j = 0; j < N; ++j)
        if (j != k && j != pivot) order.push_back(j);
    order.push_back(pivot);
    Eigen::VectorXd m(N), hp(N);
    Eigen::MatrixXd R(N, N);
    for (Eigen::Index a = 0; a < N; ++a) {
        m[a] = surrogate.m[order[static_cast<std::size_t>(a)]];
        hp[a] = h[order[static_cast<std::size_t>(a)]];
        for (Eigen::Index b = 0; b < N; ++b)
            R(a, b) = surrogate.R(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
    }

    // S(h^T z) = S(h_pivot) * S(z_pivot - s^T z_rest).
    const Eigen::Index last = N - 1;
    const Eigen::VectorXd s = -hp.head(last) / hp[last];

    // P(z_pivot < s^T z_rest | z_rest) = Phi((g^T z_rest + kappa) / sqrt(v)).
    Eigen::VectorXd coef = psd_pseudoinverse(R.topLeftCorner(last, last)) * R.col(last).head(last);
    Eigen::VectorXd g = s - coef;
    double kappa = coef.dot(m.head(last)) - m[last];
    double v = std::max(R(last, last) - R.col(last).head(last).dot(coef), 0.0);

    // Integrate out coordinates last-1, ..., 1 against their conditionals.
    for (Eigen::Index d = last - 1; d >= 1; --d) {
        coef = psd_pseudoinverse(R.topLeftCorner(d, d)) * R.col(d).head(d);
        const double q = std::max(R(d, d) - R.col(d).head(d).dot(coef), 0.0);
        const double gd = g[d];
        g.head(d) += gd * coef;
        kappa += gd * (m[d] - coef.dot(m.head(d)));
        v += gd * gd * q;
        g.conservativeResize(d);
    }

    red.orientation = sign(hp[last]);
    red.pivot = pivot;
    const double slope = std::abs(g[0]) * std::sqrt(red.variance);
    if (v <= 0.0 || slope > kStepSlope * std::sqrt(v)) {
        red.step = true;
        red.beta = g[0];
        red.alpha = kappa;
    } else {
        red.beta = g[0] / std::sqrt(v);
        red.alpha = kappa / std::sqrt(v);
    }
    return red;
}

CfValue gaussian_slice_term(const GaussianSurrogate& surrogate, Eigen::Index k, double u,
                            int quadrature_nodes) {
    if (quadrature_nodes < 32)
        throw std::invalid_argument("gaussian_slice_term needs at least 32 quadrature nodes");
    const SliceReduction red = reduce_gaussian_slice(surrogate, k);

    CfValue integral;
    const double sd = std::sqrt(red.variance);
    if (red.step) {
        integral = step_fourier(red.mean, red.variance, red.beta, red.alpha, u);
    } else if (std::abs(red.beta) * sd > kHermiteSlope) {
        integral = split_fourier(red.mean, sd, u, -red.alpha / red.beta, [&](double z) {
            return 1.0 - 2.0 * normal_cdf(red.beta * z + red.alpha);
        });
    } else {
        const GaussHermiteRule& rule = gauss_hermite(quadrature_nodes);
        const double spread = std::sqrt(2.0 * red.variance);
        CfValue acc{0.0, 0.0};
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
            const double z = red.mean + spread * rule.nodes[i];
            const double factor = 1.0 - 2.0 * normal_cdf(red.beta * z + red.alpha);
            acc += rule.weights[i] * factor * CfValue{std::cos(u * z), std::sin(u * z)};
        }
        integral = acc / std::sqrt(std::numbers::pi);
    }
    return kI * red.orientation * integral;
}

}  // namespace lassodist

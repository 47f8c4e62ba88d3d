#include "lassodist/numerics.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace lassodist {

namespace {

GaussHermiteRule build_rule(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int i = 1; i < n; ++i) sub[i - 1] = std::sqrt(0.5 * i);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

    GaussHermiteRule rule;
    rule.nodes = eig.eigenvalues();
    rule.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v = eig.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v * v;
    }
    // Symmetrize; the rule is exactly symmetric about zero.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double t = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -t;
        rule.nodes[j] = t;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int nodes) {
    if (nodes < 1) throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
    static std::mutex mutex;
    static std::map<int, GaussHermiteRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(nodes);
    if (it == cache.end()) it = cache.emplace(nodes, build_rule(nodes)).first;
    return it->second;
}

Eigen::MatrixXd psd_pseudoinverse(const Eigen::MatrixXd& R) {
    if (R.size() == 0) return R;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) inv[i] = ev[i] > cutoff ? 1.0 / ev[i] : 0.0;
    return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace lassodist

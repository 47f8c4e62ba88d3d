#include "lassodist/solver.hpp"

#include <cmath>

#include "lassodist/errors.hpp"

namespace lassodist {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

KktCheck kkt_from_correlation(const Eigen::VectorXd& correlation, const Eigen::VectorXd& x,
                              double tau) {
    KktCheck out;
    if (tau == 0.0) {
        out.gamma = Eigen::VectorXd::Zero(x.size());
        out.residual = correlation.size() ? correlation.cwiseAbs().maxCoeff() : 0.0;
        return out;
    }
    out.gamma = correlation / tau;
    double residual = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        residual = std::max(residual, std::abs(out.gamma[k]) - 1.0);
        if (x[k] != 0.0) residual = std::max(residual, std::abs(out.gamma[k] - sign(x[k])));
    }
    out.residual = residual;
    return out;
}

}  // namespace

double lasso_objective(const MeasurementModel& model, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x) {
    return model.tau() * x.lpNorm<1>() + 0.5 * (b - model.A() * x).squaredNorm();
}

KktCheck kkt_check(const MeasurementModel& model, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& x_hat) {
    if (b.size() != model.M() || x_hat.size() != model.N())
        throw InvalidDimension("kkt_check: dimension mismatch");
    const Eigen::VectorXd correlation = model.A().transpose() * b - model.W() * x_hat;
    return kkt_from_correlation(correlation, x_hat, model.tau());
}

LassoSolution solve_lasso(const MeasurementModel& model, const Eigen::VectorXd& b,
                          const SolverOptions& options) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (b.size() != model.M()) throw InvalidDimension("measurement length does not match M");

    const Eigen::Index N = model.N();
    const Eigen::MatrixXd& W = model.W();
    const double tau = model.tau();
    const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(100 * N);
    const Eigen::VectorXd atb = model.A().transpose() * b;

    LassoSolution sol;
    sol.x_hat = options.start ? *options.start : Eigen::VectorXd::Zero(N);
    if (sol.x_hat.size() != N) throw InvalidDimension("starting point length does not match N");

    // Residual correlation A^T (b - A x), updated incrementally.
    Eigen::VectorXd correlation = atb - W * sol.x_hat;
    Eigen::VectorXd& x = sol.x_hat;

    if (options.record_objective) sol.objective_trace.push_back(lasso_objective(model, b, x));

    KktCheck kkt;
    for (int sweep = 1; sweep <= max_iter; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index k = 0; k < N; ++k) {
            const double wkk = W(k, k);
            const double updated = soft_threshold(correlation[k] + wkk * x[k], tau) / wkk;
            const double delta = updated - x[k];
            if (delta != 0.0) {
                correlation.noalias() -= delta * W.col(k);
                x[k] = updated;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        sol.iterations = sweep;
        if (options.record_objective) sol.objective_trace.push_back(lasso_objective(model, b, x));

        const double scale = 1.0 + (N ? x.cwiseAbs().maxCoeff() : 0.0);
        if (max_change < options.tol * scale) {
            // Recompute from scratch so drift in the running update cannot hide a violation.
            correlation = atb - W * x;
            kkt = kkt_from_correlation(correlation, x, tau);
            if (kkt.residual <= 10.0 * options.tol) {
                sol.gamma = std::move(kkt.gamma);
                sol.kkt_residual = kkt.residual;
                for (Eigen::Index k = 0; k < N; ++k)
                    if (tau > 0.0 && std::abs(std::abs(sol.gamma[k]) - 1.0) <= kActiveSetTolerance)
                        sol.active_set.push_back(k);
                return sol;
            }
        }
    }
    kkt = kkt_from_correlation(atb - W * x, x, tau);
    throw NonConvergence(x, kkt.residual, max_iter);
}

}  // namespace lassodist

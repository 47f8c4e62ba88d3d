#include <gtest/gtest.h>

#include "lassodist/errors.hpp"
#include "lassodist/solver.hpp"
#include "oracles.hpp"

using namespace lassodist;

namespace {

MeasurementModel full_rank_model(double tau = 1.0) {
    return build_bernoulli_model(6, 4, Eigen::Vector4d(0.0, 2.0, -3.0, 0.0), 1.0, tau, 5);
}

void expect_solution_invariants(const LassoSolution& sol) {
    for (Eigen::Index k = 0; k < sol.x_hat.size(); ++k) {
        EXPECT_LE(std::abs(sol.gamma[k]), 1.0 + 1e-6);
        if (sol.x_hat[k] != 0.0) EXPECT_NEAR(sol.gamma[k], oracle::sgn(sol.x_hat[k]), 1e-6);
    }
}

}  // namespace

TEST(SoftThreshold, Definition) {
    EXPECT_DOUBLE_EQ(soft_threshold(2.5, 1.0), 1.5);
    EXPECT_DOUBLE_EQ(soft_threshold(-2.5, 1.0), -1.5);
    EXPECT_DOUBLE_EQ(soft_threshold(-0.5, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(soft_threshold(1.0, 1.0), 0.0);
    for (double z : {-3.25, -1e-9, 0.0, 0.7, 42.0}) EXPECT_DOUBLE_EQ(soft_threshold(z, 0.0), z);
}

TEST(SolveLasso, OrthogonalClosedForm) {
    const auto model = build_hadamard_model(4, Eigen::Vector4d(0, 0, 4, 0), 1.0, 1.0);
    for (std::uint64_t r = 0; r < 50; ++r) {
        auto stream = RandomStream::child(1, r);
        const Eigen::VectorXd b = sample_measurement(model, stream);
        const Eigen::VectorXd atb = model.A().transpose() * b;
        const auto sol = solve_lasso(model, b);
        for (Eigen::Index k = 0; k < 4; ++k)
            EXPECT_NEAR(sol.x_hat[k], soft_threshold(atb[k], 1.0), 1e-12);
        expect_solution_invariants(sol);
    }
}

TEST(SolveLasso, ZeroData) {
    const auto model = full_rank_model();
    const auto sol = solve_lasso(model, Eigen::VectorXd::Zero(6));
    EXPECT_EQ(sol.x_hat, Eigen::VectorXd::Zero(4));
    EXPECT_EQ(sol.gamma, Eigen::VectorXd::Zero(4));
    EXPECT_TRUE(sol.active_set.empty());
}

TEST(SolveLasso, MatchesIstaObjective) {
    const auto model = full_rank_model();
    for (std::uint64_t r = 0; r < 5; ++r) {
        auto stream = RandomStream::child(17, r);
        const Eigen::VectorXd b = sample_measurement(model, stream);
        const auto sol = solve_lasso(model, b);
        const Eigen::VectorXd ref = oracle::ista(model.A(), b, 1.0, 1e-13);
        const double f_cd = oracle::lasso_objective(model.A(), b, 1.0, sol.x_hat);
        const double f_ref = oracle::lasso_objective(model.A(), b, 1.0, ref);
        EXPECT_NEAR(f_cd, f_ref, 1e-8);
        EXPECT_NEAR(lasso_objective(model, b, sol.x_hat), f_cd, 1e-12);
    }
}

TEST(SolveLasso, ObjectiveNonIncreasingAcrossSweeps) {
    const auto model = build_bernoulli_model(4, 8, Eigen::VectorXd::Unit(8, 4) * 8.0, 1.0, 2.0, 7);
    SolverOptions opts;
    opts.record_objective = true;
    for (std::uint64_t r = 0; r < 20; ++r) {
        auto stream = RandomStream::child(3, r);
        const auto sol = solve_lasso(model, sample_measurement(model, stream), opts);
        ASSERT_FALSE(sol.objective_trace.empty());
        for (std::size_t i = 1; i < sol.objective_trace.size(); ++i)
            EXPECT_LE(sol.objective_trace[i], sol.objective_trace[i - 1] + 1e-12);
    }
}

TEST(SolveLasso, StartingPointDoesNotMatterForFullRank) {
    const auto model = full_rank_model();
    auto stream = RandomStream::child(5, 0);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    SolverOptions from_far;
    from_far.start = Eigen::Vector4d(10.0, -10.0, 5.0, 3.0);
    const auto a = solve_lasso(model, b);
    const auto c = solve_lasso(model, b, from_far);
    EXPECT_LT((a.x_hat - c.x_hat).cwiseAbs().maxCoeff(), 10 * 1e-10);
}

TEST(SolveLasso, KktResidualCertifiesSolution) {
    const auto model = build_bernoulli_model(4, 8, Eigen::VectorXd::Unit(8, 4) * 8.0, 1.0, 2.0, 7);
    for (std::uint64_t r = 0; r < 100; ++r) {
        auto stream = RandomStream::child(8, r);
        const Eigen::VectorXd b = sample_measurement(model, stream);
        const auto sol = solve_lasso(model, b);
        EXPECT_LE(sol.kkt_residual, 1e-9);
        expect_solution_invariants(sol);
        const Eigen::VectorXd lhs = model.W() * sol.x_hat + model.tau() * sol.gamma;
        EXPECT_LT((lhs - model.A().transpose() * b).cwiseAbs().maxCoeff(), 1e-12);
        for (Eigen::Index k : sol.active_set) EXPECT_NEAR(std::abs(sol.gamma[k]), 1.0, 1e-6);
    }
}

TEST(SolveLasso, ZeroThresholdGivesLeastSquares) {
    const auto model = full_rank_model(0.0);
    auto stream = RandomStream::child(2, 0);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    const auto sol = solve_lasso(model, b);
    const Eigen::VectorXd ls = model.A().colPivHouseholderQr().solve(b);
    EXPECT_LT((sol.x_hat - ls).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(sol.gamma, Eigen::VectorXd::Zero(4));
}

TEST(SolveLasso, ThrowsWithLastIterateWhenSweepCapHit) {
    const auto model = build_bernoulli_model(4, 8, Eigen::VectorXd::Unit(8, 4) * 8.0, 1.0, 0.01, 7);
    auto stream = RandomStream::child(4, 0);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    SolverOptions opts;
    opts.max_iter = 1;
    try {
        solve_lasso(model, b, opts);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_EQ(e.last_iterate().size(), 8);
        EXPECT_EQ(e.sweeps(), 1);
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(KktCheck, ClosedFormIsExact) {
    const auto model = build_hadamard_model(4, Eigen::Vector4d(1, 0, 4, -2), 1.0, 1.0);
    auto stream = RandomStream::child(9, 0);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    const Eigen::VectorXd atb = model.A().transpose() * b;
    Eigen::VectorXd x(4);
    for (Eigen::Index k = 0; k < 4; ++k) x[k] = soft_threshold(atb[k], 1.0);
    EXPECT_LE(kkt_check(model, b, x).residual, 1e-12);
}

TEST(KktCheck, ZeroIsOptimalForSmallCorrelation) {
    const auto model = full_rank_model(100.0);
    auto stream = RandomStream::child(9, 1);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    ASSERT_LE((model.A().transpose() * b).cwiseAbs().maxCoeff(), 100.0);
    EXPECT_EQ(kkt_check(model, b, Eigen::VectorXd::Zero(4)).residual, 0.0);
}

TEST(KktCheck, PerturbationIsDetected) {
    const auto model = full_rank_model();
    auto stream = RandomStream::child(9, 2);
    const Eigen::VectorXd b = sample_measurement(model, stream);
    const auto sol = solve_lasso(model, b);
    ASSERT_FALSE(sol.active_set.empty());
    Eigen::VectorXd moved = sol.x_hat;
    moved[sol.active_set.front()] += 0.1;
    EXPECT_GT(kkt_check(model, b, moved).residual, 0.01);
}

#include <benchmark/benchmark.h>

#include "lassodist/cf.hpp"
#include "lassodist/harness.hpp"
#include "lassodist/linmodel.hpp"
#include "lassodist/solver.hpp"

using namespace lassodist;

namespace {

MeasurementModel singular_model() {
    return build_bernoulli_model(4, 8, Eigen::VectorXd::Unit(8, 4) * 8.0, 1.0, 2.0, 7);
}

void BM_SolveLasso(benchmark::State& state) {
    const auto model = singular_model();
    std::vector<Eigen::VectorXd> bs;
    for (std::uint64_t r = 0; r < 64; ++r) {
        auto stream = RandomStream::child(1, r);
        bs.push_back(sample_measurement(model, stream));
    }
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_lasso(model, bs[i++ % bs.size()]));
}
BENCHMARK(BM_SolveLasso);

void BM_KktImageCf(benchmark::State& state) {
    const auto N = state.range(0);
    const auto form = state.range(1) == 0 ? ExpansionForm::Product : ExpansionForm::SubsetSum;
    const auto model = build_bernoulli_model(4, N, Eigen::VectorXd::Unit(N, 0) * 4.0, 1.0, 1.0, 7);
    const auto reps = simulate_replicates(model, 1000, 3, SolverOptions{}, 1);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(N, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(kkt_image_cf(reps.x_hat, u, model, SignAtZero::Zero, nullptr, form));
    state.SetLabel(form == ExpansionForm::Product ? "product" : "subset-sum");
}
BENCHMARK(BM_KktImageCf)->ArgsProduct({{4, 8}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_GaussianSliceTerm(benchmark::State& state) {
    const auto n = state.range(0);
    Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, n);
    GaussianSurrogate s{Eigen::VectorXd::LinSpaced(n, -1.0, 1.0),
                        B * B.transpose() + Eigen::MatrixXd::Identity(n, n),
                        Eigen::VectorXd::LinSpaced(n, 0.5, 1.5)};
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_slice_term(s, 0, 0.8));
}
BENCHMARK(BM_GaussianSliceTerm)->Arg(2)->Arg(4)->Arg(8);

void BM_RipConstant(benchmark::State& state) {
    const auto K = state.range(0);
    const auto model = build_bernoulli_model(8, 16, Eigen::VectorXd::Zero(16), 1.0, 1.0, 7);
    for (auto _ : state) benchmark::DoNotOptimize(rip_constant(model.A(), K));
}
BENCHMARK(BM_RipConstant)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_RunExperiment(benchmark::State& state) {
    ExperimentConfig c;
    c.model_kind = ModelKind::Orthogonal;
    c.M = c.N = 4;
    c.x_entries = {{3, 4.0}};
    c.L = 10000;
    c.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c));
}
BENCHMARK(BM_RunExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

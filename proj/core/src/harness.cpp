#include "lassodist/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <thread>

#include "lassodist/errors.hpp"
#include "lassodist/numerics.hpp"

namespace lassodist {

namespace {

constexpr CfValue kI{0.0, 1.0};
constexpr std::uint64_t kGridStreamSalt = 0x5d1a6c3e9b27f481ULL;
constexpr int kDefaultGridSize = 20;
constexpr double kDefaultGridRadius = 2.0;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

int quantile(std::vector<int> values, double q) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

std::optional<CfValue> fitted_slice_term(const SampleMatrix& z_hat, const Eigen::VectorXd& h,
                                         Eigen::Index k, double u) {
    if (z_hat.cols() < 2) return std::nullopt;
    try {
        const auto surrogate = GaussianSurrogate::from_samples(z_hat, h);
        return gaussian_slice_term(surrogate, k, u);
    } catch (const DegenerateHyperplane&) {
        return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (M < 1 || N < 1) throw ConfigError("M and N must be positive");
    if (model_kind == ModelKind::Orthogonal) {
        if (M != N) throw ConfigError("orthogonal models need M == N");
        if ((M & (M - 1)) != 0) throw ConfigError("orthogonal models need a power-of-two M");
    }
    if (model_kind == ModelKind::Singular && M >= N)
        throw ConfigError("singular models need M < N");
    if (model_kind == ModelKind::FullRank && M < N)
        throw ConfigError("full-rank models need M >= N");
    if (N > kMaxExpansionDimension)
        throw ConfigError("N above " + std::to_string(kMaxExpansionDimension) +
                          " is outside the expansion cap");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be >= 0");
    if (L < 1) throw ConfigError("L must be at least 1");
    if (bins < 10) throw ConfigError("bins must be at least 10");
    if (!(solver_tol > 0.0)) throw ConfigError("solver_tol must be positive");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    for (const auto& [index, value] : x_entries) {
        if (index < 1 || index > N)
            throw ConfigError("x index " + std::to_string(index) + " out of range 1.." +
                              std::to_string(N));
        if (!std::isfinite(value)) throw ConfigError("x values must be finite");
    }
    for (Eigen::Index c : components)
        if (c < 1 || c > N)
            throw ConfigError("component " + std::to_string(c) + " out of range 1.." +
                              std::to_string(N));
    for (const auto& u : u_grid)
        if (u.size() != N) throw ConfigError("u_grid vectors must have length N");
}

Eigen::VectorXd ExperimentConfig::x() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
    for (const auto& [index, value] : x_entries) x[index - 1] = value;
    return x;
}

MeasurementModel ExperimentConfig::build_model() const {
    validate();
    if (model_kind == ModelKind::Orthogonal) return build_hadamard_model(M, x(), sigma, tau);
    auto model = build_bernoulli_model(M, N, x(), sigma, tau, model_seed);
    if (model.kind() != model_kind)
        throw ConfigError("model_seed " + std::to_string(model_seed) + " gives a " +
                          std::string(to_string(model.kind())) + " Gram matrix (rank " +
                          std::to_string(model.rank()) + "), not " +
                          std::string(to_string(model_kind)));
    return model;
}

std::vector<Eigen::Index> ExperimentConfig::resolved_components() const {
    if (!components.empty()) return components;
    std::vector<Eigen::Index> all(static_cast<std::size_t>(N));
    for (Eigen::Index k = 0; k < N; ++k) all[static_cast<std::size_t>(k)] = k + 1;
    return all;
}

std::vector<double> ExperimentConfig::resolved_slice_grid() const {
    if (!slice_u_grid.empty()) return slice_u_grid;
    return {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
}

ReplicateSet simulate_replicates(const MeasurementModel& model, std::size_t L, std::uint64_t seed,
                                 const SolverOptions& options, int threads) {
    const Eigen::Index N = model.N();
    const auto cols = static_cast<Eigen::Index>(L);
    SampleMatrix x_hat(N, cols), gamma(N, cols), atb(N, cols);
    std::vector<double> residual(L, 0.0);
    std::vector<int> iterations(L, 0);
    std::vector<char> converged(L, 0);

    auto worker = [&](std::size_t first, std::size_t stride) {
        for (std::size_t r = first; r < L; r += stride) {
            auto stream = RandomStream::child(seed, r);
            const Eigen::VectorXd b = sample_measurement(model, stream);
            const auto col = static_cast<Eigen::Index>(r);
            atb.col(col) = model.A().transpose() * b;
            try {
                const LassoSolution sol = solve_lasso(model, b, options);
                x_hat.col(col) = sol.x_hat;
                gamma.col(col) = sol.gamma;
                residual[r] = sol.kkt_residual;
                iterations[r] = sol.iterations;
                converged[r] = 1;
            } catch (const NonConvergence&) {
                converged[r] = 0;
            }
        }
    };

    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, L);
    if (workers <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
    }

    ReplicateSet out;
    for (std::size_t r = 0; r < L; ++r) {
        if (converged[r]) out.replicate_index.push_back(r);
        else ++out.excluded;
    }
    const auto kept = static_cast<Eigen::Index>(out.replicate_index.size());
    out.x_hat.resize(N, kept);
    out.gamma.resize(N, kept);
    out.atb.resize(N, kept);
    for (Eigen::Index j = 0; j < kept; ++j) {
        const std::size_t r = out.replicate_index[static_cast<std::size_t>(j)];
        const auto col = static_cast<Eigen::Index>(r);
        out.x_hat.col(j) = x_hat.col(col);
        out.gamma.col(j) = gamma.col(col);
        out.atb.col(j) = atb.col(col);
        out.kkt_residuals.push_back(residual[r]);
        out.iterations.push_back(iterations[r]);
    }
    out.z_hat = model.W() * out.x_hat;
    return out;
}

Histogram normalized_histogram(const std::vector<double>& sorted_samples, int bins) {
    Histogram h;
    if (sorted_samples.empty() || bins < 1) return h;
    double lo = sorted_samples.front();
    double hi = sorted_samples.back();
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + width * i;
    h.edges.back() = hi;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : sorted_samples) {
        auto bin = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(bin, counts.size() - 1)]++;
    }
    const double total = static_cast<double>(sorted_samples.size());
    h.density.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        h.density[i] = static_cast<double>(counts[i]) / (total * (h.edges[i + 1] - h.edges[i]));
    return h;
}

EmpiricalDistribution EmpiricalDistribution::from_samples(Eigen::Index component,
                                                          std::vector<double> values, int bins) {
    EmpiricalDistribution d;
    d.component = component;
    std::sort(values.begin(), values.end());
    d.samples = std::move(values);
    for (double v : d.samples) {
        if (v == 0.0) ++d.zero_count;
        else d.nonzero.push_back(v);
    }
    d.zero_fraction = d.samples.empty() ? 0.0
                                        : static_cast<double>(d.zero_count) /
                                              static_cast<double>(d.samples.size());
    d.histogram = normalized_histogram(d.nonzero, bins);
    return d;
}

double EmpiricalDistribution::ecdf(double v) const {
    if (samples.empty()) return 0.0;
    const auto it = std::upper_bound(samples.begin(), samples.end(), v);
    return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

KsResult ks_distance(const EmpiricalDistribution& empirical,
                     const std::function<double(double)>& conditional_cdf) {
    KsResult result;
    const auto& xs = empirical.nonzero;
    result.samples = xs.size();
    if (xs.size() < kMinKsSamples) return result;
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const double F = conditional_cdf(xs[i]);
        d = std::max({d, std::abs(static_cast<double>(j) / n - F),
                      std::abs(F - static_cast<double>(i) / n)});
        i = j;
    }
    result.statistic = std::min(d, 1.0);
    return result;
}

std::vector<GridPoint> default_u_grid(Eigen::Index N, std::uint64_t seed) {
    std::vector<GridPoint> grid;
    RandomStream stream(seed ^ kGridStreamSalt);
    for (int i = 0; i < kDefaultGridSize; ++i) {
        Eigen::VectorXd dir = stream.normal_vector(N);
        const double norm = dir.norm();
        const double radius =
            kDefaultGridRadius * std::pow(stream.uniform(), 1.0 / static_cast<double>(N));
        grid.push_back({dir * (radius / norm), true});
    }
    grid.push_back({Eigen::VectorXd::Zero(N), false});
    for (Eigen::Index k = 0; k < N; ++k) grid.push_back({Eigen::VectorXd::Unit(N, k), false});
    return grid;
}

std::vector<CfGridRow> cf_grid_compare(const ReplicateSet& replicates,
                                       const MeasurementModel& model,
                                       const std::vector<GridPoint>& grid) {
    std::vector<CfGridRow> rows;
    rows.reserve(grid.size());
    for (const auto& point : grid) {
        CfGridRow row;
        row.point = point;
        row.expansion_zero = kkt_image_cf(replicates.x_hat, point.u, model, SignAtZero::Zero);
        row.expansion_gamma = kkt_image_cf(replicates.x_hat, point.u, model,
                                           SignAtZero::FromGamma, &replicates.gamma);
        row.gram_cf = gram_gaussian_cf(point.u, model);
        row.atb_cf = empirical_cf(replicates.atb, point.u);
        row.gap_exact = std::abs(row.expansion_gamma - row.atb_cf);
        row.gap_expansion = std::abs(row.expansion_zero - row.gram_cf);
        row.gap_mc = std::abs(row.atb_cf - row.gram_cf);
        rows.push_back(row);
    }
    return rows;
}

bool ExperimentReport::all_checks_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const MeasurementModel model = config.build_model();

    ExperimentReport report;
    report.config = config;
    report.rank = model.rank();
    report.detected_kind = model.kind();

    SolverOptions options;
    options.tol = config.solver_tol;
    options.max_iter = config.solver_max_iter;
    report.replicates = simulate_replicates(model, config.L, config.seed, options, config.threads);
    const ReplicateSet& reps = report.replicates;

    const auto budget = static_cast<std::size_t>(std::floor(kExclusionBudget *
                                                            static_cast<double>(config.L)));
    if (reps.excluded > budget || reps.size() == 0)
        throw ExclusionBudgetExceeded(reps.excluded, config.L);

    auto& stats = report.solver;
    stats.included = reps.size();
    stats.excluded = reps.excluded;
    stats.max_kkt_residual =
        *std::max_element(reps.kkt_residuals.begin(), reps.kkt_residuals.end());
    stats.iterations_min = quantile(reps.iterations, 0.0);
    stats.iterations_median = quantile(reps.iterations, 0.5);
    stats.iterations_p90 = quantile(reps.iterations, 0.9);
    stats.iterations_max = quantile(reps.iterations, 1.0);
    report.kkt_certified = stats.max_kkt_residual <= kKktCertificate;

    const bool orthogonal = model.kind() == ModelKind::Orthogonal;
    const Eigen::VectorXd x = model.x();
    const Eigen::VectorXd wx = model.W() * x;
    const Eigen::MatrixXd W_inv = model.rank() == model.N()
                                      ? Eigen::MatrixXd(model.W().inverse())
                                      : psd_pseudoinverse(model.W());
    const double L_eff = static_cast<double>(reps.size());

    for (Eigen::Index c : config.resolved_components()) {
        const Eigen::Index k = c - 1;
        ComponentReport comp;
        comp.component = c;
        comp.law = orthogonal
                       ? MarginalLaw::orthogonal(x[k], model.sigma(), model.tau())
                       : MarginalLaw::transformed(wx[k], model.W()(k, k), model.sigma(),
                                                  model.tau());
        const Eigen::RowVectorXd z_row = reps.z_hat.row(k);
        comp.empirical = EmpiricalDistribution::from_samples(
            c, std::vector<double>(z_row.data(), z_row.data() + z_row.size()), config.bins);
        comp.ks = ks_distance(comp.empirical,
                              [&law = comp.law](double v) { return conditional_cdf(v, law); });
        if (x[k] != 0.0) comp.ks_threshold = 0.05;
        else if (orthogonal && comp.empirical.nonzero.size() >= 500) comp.ks_threshold = 0.08;
        comp.point_mass = point_mass_zero(comp.law);
        comp.binomial_se = std::sqrt(comp.point_mass * (1.0 - comp.point_mass) / L_eff);

        const std::span<const double> z_span(z_row.data(), static_cast<std::size_t>(z_row.size()));
        const double s2 = comp.law.scale2;
        const Eigen::VectorXd h = W_inv.col(k);
        for (double u : config.resolved_slice_grid()) {
            SliceRow row;
            row.u = u;
            row.slice_cf = slice_image_cf(z_span, u, model.tau());
            row.target = std::exp(-0.5 * u * u * s2) * std::polar(1.0, u * wx[k]);
            row.gap = std::abs(row.slice_cf - row.target);
            CfValue exact{0.0, 0.0}, approx{0.0, 0.0};
            for (Eigen::Index l = 0; l < reps.z_hat.cols(); ++l) {
                const CfValue phase = std::polar(1.0, u * reps.z_hat(k, l));
                exact += sign(reps.x_hat(k, l)) * phase;
                approx += sign(reps.z_hat(k, l)) * phase;
            }
            row.hilbert_exact = kI * exact / L_eff;
            row.hilbert_sign = kI * approx / L_eff;
            row.hilbert_gaussian = fitted_slice_term(reps.z_hat, h, k, u);
            comp.slice.push_back(row);
        }
        report.components.push_back(std::move(comp));
    }

    std::vector<GridPoint> grid;
    if (config.u_grid.empty()) {
        grid = default_u_grid(model.N(), config.seed);
    } else {
        for (const auto& u : config.u_grid) grid.push_back({u, false});
    }
    report.cf_grid = cf_grid_compare(reps, model, grid);

    auto& checks = report.checks;
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "max residual %.3g over %zu replicates",
                      stats.max_kkt_residual, stats.included);
        checks.push_back({"kkt_certificate", report.kkt_certified, buf});
    }
    {
        double worst = 0.0;
        for (const auto& row : report.cf_grid) worst = std::max(worst, row.gap_exact);
        char buf[64];
        std::snprintf(buf, sizeof buf, "max gap %.3g", worst);
        checks.push_back({"cf_exact_identity", worst <= 1e-12, buf});
    }
    {
        const double bound = 4.0 / std::sqrt(L_eff);
        std::size_t total = 0, within = 0;
        for (const auto& row : report.cf_grid) {
            if (!row.point.from_ball) continue;
            ++total;
            if (row.gap_mc <= bound) ++within;
        }
        if (total > 0) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%zu of %zu within %.4g", within, total, bound);
            checks.push_back({"cf_monte_carlo", within >= total - total / 20, buf});
        }
    }
    for (const auto& comp : report.components) {
        const std::string suffix = "_" + std::to_string(comp.component);
        if (comp.ks_threshold && comp.ks.sufficient()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.4g vs %.3g", *comp.ks.statistic, *comp.ks_threshold);
            checks.push_back({"ks" + suffix, *comp.ks.statistic <= *comp.ks_threshold, buf});
        }
        if (orthogonal) {
            const double diff = std::abs(comp.empirical.zero_fraction - comp.point_mass);
            char buf[96];
            std::snprintf(buf, sizeof buf, "|%.5g - %.5g| vs 5 se = %.3g",
                          comp.empirical.zero_fraction, comp.point_mass, 5.0 * comp.binomial_se);
            checks.push_back({"zero_fraction" + suffix, diff <= 5.0 * comp.binomial_se + 1e-15, buf});
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace lassodist

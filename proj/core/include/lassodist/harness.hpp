#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lassodist/cf.hpp"
#include "lassodist/distributions.hpp"
#include "lassodist/linmodel.hpp"
#include "lassodist/solver.hpp"

namespace lassodist {

/// Monte-Carlo experiment description. Component indices are 1-based, as in
/// config files and reports.
struct ExperimentConfig {
    ModelKind model_kind = ModelKind::Orthogonal;
    Eigen::Index M = 4;
    Eigen::Index N = 4;
    /// (1-based index, value) pairs; unlisted entries of x are zero.
    std::vector<std::pair<Eigen::Index, double>> x_entries;
    double sigma = 1.0;
    double tau = 1.0;
    std::size_t L = 10000;
    std::uint64_t seed = 1;
    /// Seed for the Bernoulli design matrix; unused for orthogonal models.
    std::uint64_t model_seed = 7;
    /// Explicit frequency vectors; the default grid is used when empty.
    std::vector<Eigen::VectorXd> u_grid;
    /// Scalar frequencies for the per-component slice diagnostics.
    std::vector<double> slice_u_grid;
    int bins = 60;
    /// Components to analyze (1-based); all when empty.
    std::vector<Eigen::Index> components;
    double solver_tol = 1e-10;
    int solver_max_iter = 0;
    /// Worker threads for the replicate phase; 0 means hardware concurrency.
    int threads = 0;
    bool emit_samples = false;

    void validate() const;
    Eigen::VectorXd x() const;
    MeasurementModel build_model() const;
    std::vector<Eigen::Index> resolved_components() const;
    std::vector<double> resolved_slice_grid() const;
};

/// Solved replicates, one column per included replicate, in replicate order.
struct ReplicateSet {
    SampleMatrix x_hat;
    SampleMatrix gamma;
    SampleMatrix z_hat;
    /// A^T b for the same draws.
    SampleMatrix atb;
    std::vector<double> kkt_residuals;
    std::vector<int> iterations;
    std::vector<std::size_t> replicate_index;
    std::size_t excluded = 0;

    std::size_t size() const noexcept { return replicate_index.size(); }
};

/// Replicate r draws b from RandomStream::child(seed, r) and solves the LASSO.
/// Non-converged replicates are counted in `excluded` and left out.
ReplicateSet simulate_replicates(const MeasurementModel& model, std::size_t L, std::uint64_t seed,
                                 const SolverOptions& options, int threads = 0);

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;
};

/// Equal-width bins over [min, max] of the samples, normalized to unit area.
Histogram normalized_histogram(const std::vector<double>& sorted_samples, int bins);

struct EmpiricalDistribution {
    Eigen::Index component = 0;
    /// All samples, sorted.
    std::vector<double> samples;
    /// Samples different from zero, sorted.
    std::vector<double> nonzero;
    std::size_t zero_count = 0;
    double zero_fraction = 0.0;
    /// Histogram of the nonzero samples.
    Histogram histogram;

    static EmpiricalDistribution from_samples(Eigen::Index component, std::vector<double> values,
                                              int bins);
    /// Fraction of all samples <= v.
    double ecdf(double v) const;
};

inline constexpr std::size_t kMinKsSamples = 50;

struct KsResult {
    /// Empty when fewer than kMinKsSamples nonzero samples were available.
    std::optional<double> statistic;
    std::size_t samples = 0;

    bool sufficient() const noexcept { return statistic.has_value(); }
};

/// sup |ECDF - F| over the nonzero samples, both conditioned on v != 0.
/// `conditional_cdf` must already be the theoretical CDF given v != 0.
KsResult ks_distance(const EmpiricalDistribution& empirical,
                     const std::function<double(double)>& conditional_cdf);

struct GridPoint {
    Eigen::VectorXd u;
    /// Drawn from the radius-2 ball (as opposed to the origin or an axis vector).
    bool from_ball = false;
};

/// 20 points uniform in the ball ||u|| <= 2 from a sub-stream of `seed`,
/// then u = 0, then the N unit axis vectors.
std::vector<GridPoint> default_u_grid(Eigen::Index N, std::uint64_t seed);

struct CfGridRow {
    GridPoint point;
    CfValue expansion_zero;   ///< kkt_image_cf, S(0) = 0
    CfValue expansion_gamma;  ///< kkt_image_cf, S(0) from gamma
    CfValue gram_cf;          ///< analytic CF of A^T b
    CfValue atb_cf;           ///< empirical CF of A^T b
    double gap_exact = 0.0;      ///< |expansion_gamma - atb_cf|
    double gap_expansion = 0.0;  ///< |expansion_zero - gram_cf|
    double gap_mc = 0.0;         ///< |atb_cf - gram_cf|
};

std::vector<CfGridRow> cf_grid_compare(const ReplicateSet& replicates,
                                       const MeasurementModel& model,
                                       const std::vector<GridPoint>& grid);

struct SliceRow {
    double u = 0.0;
    CfValue slice_cf;  ///< slice_image_cf of z_k
    CfValue target;    ///< exp(-u^2 sigma^2 w_kk / 2 + i u w_k^T x)
    double gap = 0.0;
    CfValue hilbert_exact;     ///< mean of i S(x_k) e^{iu z_k}
    CfValue hilbert_sign;      ///< mean of i S(z_k) e^{iu z_k}
    /// gaussian_slice_term on the fitted surrogate; empty when it cannot be fitted.
    std::optional<CfValue> hilbert_gaussian;
};

struct ComponentReport {
    Eigen::Index component = 0;  ///< 1-based
    MarginalLaw law;
    EmpiricalDistribution empirical;
    KsResult ks;
    /// Pass threshold for the KS distance, when one applies.
    std::optional<double> ks_threshold;
    double point_mass = 0.0;
    double binomial_se = 0.0;
    std::vector<SliceRow> slice;
};

struct SolverStats {
    std::size_t included = 0;
    std::size_t excluded = 0;
    double max_kkt_residual = 0.0;
    int iterations_min = 0;
    int iterations_median = 0;
    int iterations_p90 = 0;
    int iterations_max = 0;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    ExperimentConfig config;
    Eigen::Index rank = 0;
    ModelKind detected_kind = ModelKind::Orthogonal;
    std::vector<ComponentReport> components;
    std::vector<CfGridRow> cf_grid;
    SolverStats solver;
    /// Acceptance-style scores; reported, enforced only on request.
    std::vector<CheckResult> checks;
    /// Hard invariants: every included replicate certified to 1e-8.
    bool kkt_certified = true;
    double wall_seconds = 0.0;
    ReplicateSet replicates;

    bool all_checks_passed() const;
};

inline constexpr double kKktCertificate = 1e-8;
inline constexpr double kExclusionBudget = 1e-3;

/// Full protocol: build the model, simulate, score. Throws ConfigError on an
/// invalid config and ExclusionBudgetExceeded when more than 0.1% of the
/// replicates fail to converge.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace lassodist

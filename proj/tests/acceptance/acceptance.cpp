// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <bit>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "lassodist/cf.hpp"
#include "lassodist/harness.hpp"
#include "lassodist/linmodel.hpp"
#include "oracles.hpp"

using namespace lassodist;

namespace {

constexpr std::uint64_t kSeed = 2024;
constexpr std::size_t kReplicates = 10000;

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [x]");
    }
};

std::string num(double v, const char* format = "%.4g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

ExperimentConfig orthogonal_config(std::vector<std::pair<Eigen::Index, double>> x) {
    ExperimentConfig c;
    c.model_kind = ModelKind::Orthogonal;
    c.M = c.N = 4;
    c.x_entries = std::move(x);
    c.sigma = 1.0;
    c.tau = 1.0;
    c.L = kReplicates;
    c.seed = kSeed;
    return c;
}

ExperimentConfig bernoulli_config(ModelKind kind, Eigen::Index N, Eigen::Index k, double value,
                                  double tau, std::uint64_t model_seed) {
    ExperimentConfig c;
    c.model_kind = kind;
    c.M = 4;
    c.N = N;
    c.x_entries = {{k, value}};
    c.sigma = 1.0;
    c.tau = tau;
    c.L = kReplicates;
    c.seed = kSeed;
    c.model_seed = model_seed;
    return c;
}

const ComponentReport& component(const ExperimentReport& r, Eigen::Index c) {
    for (const auto& comp : r.components)
        if (comp.component == c) return comp;
    throw std::out_of_range("component not analyzed");
}

void ks_requirement(Outcome& out, const ComponentReport& c, double threshold) {
    const bool ok = c.ks.sufficient() && *c.ks.statistic <= threshold;
    out.require(ok, "KS_" + std::to_string(c.component) + " = " +
                        (c.ks.sufficient() ? num(*c.ks.statistic) : std::string("n/a")) +
                        " <= " + num(threshold, "%.2g"));
}

std::string published_ks(const ExperimentReport& r, Eigen::Index skip) {
    std::string s;
    for (const auto& c : r.components) {
        if (c.component == skip) continue;
        s += (s.empty() ? "" : ", ") + std::to_string(c.component) + ": " +
             (c.ks.sufficient() ? num(*c.ks.statistic) : std::string("n/a"));
    }
    return "published KS {" + s + "}";
}

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
    std::printf("[%s] criterion %d (%s): %s\n", o.passed ? "PASS" : "FAIL", id, title,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
}

}  // namespace

int main() {
    std::vector<const ExperimentReport*> runs;

    // 1 and 2 share one run.
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport ortho = run_experiment(orthogonal_config({{3, 4.0}}));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back(&ortho);
    {
        Outcome o;
        ks_requirement(o, component(ortho, 3), 0.05);
        for (const auto& c : ortho.components)
            if (c.component != 3 && c.empirical.nonzero.size() >= 500) ks_requirement(o, c, 0.08);
        o.require(seconds <= 60.0, "runtime " + num(seconds, "%.2f") + " s <= 60 s");
        report(1, "orthogonal reproduction", o);
    }
    {
        Outcome o;
        double worst_exact = 0.0;
        int within = 0, ball = 0;
        const double bound = 4.0 / std::sqrt(double(kReplicates));
        for (const auto& row : ortho.cf_grid) {
            if (!row.point.from_ball) continue;
            ++ball;
            worst_exact = std::max(worst_exact, row.gap_exact);
            if (row.gap_mc <= bound) ++within;
        }
        o.require(ball == 20, std::to_string(ball) + " grid points");
        o.require(worst_exact <= 1e-12, "max exact gap " + num(worst_exact, "%.3g") + " <= 1e-12");
        o.require(within >= 19, std::to_string(within) + "/20 Monte-Carlo gaps <= 4/sqrt(L)");
        report(2, "exact CF identity", o);
    }

    // 3: every coordinate far from zero, so the atom is negligible.
    const ExperimentReport dense = run_experiment(orthogonal_config({{1, 4.0}, {2, 4.0}, {3, 4.0}, {4, 4.0}}));
    runs.push_back(&dense);
    {
        Outcome o;
        double sup = 0.0;
        for (const auto& row : dense.cf_grid) sup = std::max(sup, row.gap_expansion);
        o.require(sup <= 0.05, "sup expansion gap " + num(sup) + " <= 0.05 over " +
                                   std::to_string(dense.cf_grid.size()) + " grid points");
        report(3, "expansion identity with negligible atom", o);
    }

    // 4: structure of the three-coordinate expansion.
    {
        Outcome o;
        const Eigen::Vector3d u(0.7, -0.4, 1.3);
        const double tau = 1.0;
        const auto terms = expansion_terms(u, tau);
        bool pattern = terms.size() == 8;
        for (std::size_t mask = 0; pattern && mask < terms.size(); ++mask) {
            double w = 1.0;
            for (Eigen::Index k = 0; k < 3; ++k)
                w *= (mask >> k) & 1 ? std::sin(tau * u[k]) : std::cos(tau * u[k]);
            pattern = std::abs(terms[mask].weight - w) <= 1e-15 &&
                      terms[mask].subset.size() == std::size_t(std::popcount(mask));
        }
        o.require(pattern, std::to_string(terms.size()) + " terms with sin/cos pattern");
        const auto model = build_bernoulli_model(4, 3, Eigen::Vector3d(1.0, 0.0, -2.0), 1.0, tau, 3);
        const auto reps = simulate_replicates(model, 2000, kSeed, SolverOptions{}, 0);
        double worst = 0.0;
        RandomStream stream(kSeed);
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd ui = stream.normal_vector(3);
            const CfValue product = kkt_image_cf(reps.x_hat, ui, model, SignAtZero::Zero);
            const CfValue sum = kkt_image_cf(reps.x_hat, ui, model, SignAtZero::Zero, nullptr,
                                             ExpansionForm::SubsetSum);
            worst = std::max(worst, std::abs(product - sum));
        }
        o.require(worst <= 1e-12, "product vs sum max gap " + num(worst, "%.3g") + " <= 1e-12");
        report(4, "three-coordinate expansion structure", o);
    }

    // 5: full-rank Bernoulli design.
    const ExperimentReport full = run_experiment(bernoulli_config(ModelKind::FullRank, 4, 3, 4.0, 1.0, 5));
    runs.push_back(&full);
    {
        Outcome o;
        o.require(full.rank == 4, "rank " + std::to_string(full.rank));
        ks_requirement(o, component(full, 3), 0.05);
        o.detail += "; " + published_ks(full, 3);
        report(5, "full-rank transformed law", o);
    }

    // 6: singular Bernoulli design.
    const ExperimentReport singular = run_experiment(bernoulli_config(ModelKind::Singular, 8, 5, 8.0, 2.0, 7));
    runs.push_back(&singular);
    {
        Outcome o;
        o.require(singular.rank < 8, "rank " + std::to_string(singular.rank));
        ks_requirement(o, component(singular, 5), 0.05);
        o.detail += "; " + published_ks(singular, 5);
        report(6, "singular transformed law", o);
    }

    // 7: slice term against nested quadrature.
    {
        Outcome o;
        double worst = 0.0;
        int evaluations = 0;
        for (int n : {2, 3}) {
            const int instances = n == 2 ? 20 : 10;
            for (int i = 0; i < instances; ++i) {
                const auto g = oracle::random_gaussian_instance(n, kSeed + 1000 * n + i);
                const GaussianSurrogate s{g.m, g.R, g.h};
                const oracle::SignedSliceQuadrature ref(g.m, g.R, g.h);
                const Eigen::Index k = i % n;
                for (double u : {0.0, 0.5, 1.0, 2.0}) {
                    worst = std::max(worst, oracle::relative_error(gaussian_slice_term(s, k, u), ref(k, u)));
                    ++evaluations;
                }
            }
        }
        o.require(worst <= 1e-6, "max relative error " + num(worst, "%.3g") + " <= 1e-6 over " +
                                     std::to_string(evaluations) + " evaluations");
        report(7, "Gaussian slice term vs quadrature", o);
    }

    // 8: atoms at zero for x_k in {0, 1, 4}.
    const ExperimentReport atoms = run_experiment(orthogonal_config({{2, 1.0}, {3, 4.0}}));
    runs.push_back(&atoms);
    {
        Outcome o;
        for (const auto& c : atoms.components) {
            const double diff = std::abs(c.empirical.zero_fraction - c.point_mass);
            o.require(diff <= 5.0 * c.binomial_se,
                      "x_" + std::to_string(c.component) + ": |" + num(c.empirical.zero_fraction) +
                          " - " + num(c.point_mass) + "| = " + num(diff / c.binomial_se, "%.2f") + " se");
        }
        report(8, "zero point mass", o);
    }

    // 9: certificates across every run above.
    {
        Outcome o;
        double worst = 0.0;
        std::size_t included = 0, excluded = 0, certified = 0;
        for (const auto* r : runs) {
            worst = std::max(worst, r->solver.max_kkt_residual);
            included += r->solver.included;
            excluded += r->solver.excluded;
            for (double res : r->replicates.kkt_residuals) certified += res <= 1e-8;
        }
        o.require(certified == included, std::to_string(certified) + "/" + std::to_string(included) +
                                             " replicates with KKT residual <= 1e-8 (max " +
                                             num(worst, "%.3g") + ")");
        const double rate = double(excluded) / double(included + excluded);
        o.require(rate <= 1e-3, std::to_string(excluded) + " excluded");
        report(9, "solver certificate", o);
    }

    // 10: RIP constants.
    {
        Outcome o;
        const auto hadamard = build_hadamard_model(4, Eigen::VectorXd::Zero(4), 1.0, 1.0);
        double worst = 0.0;
        for (Eigen::Index K = 1; K <= 4; ++K)
            worst = std::max(worst, std::abs(rip_constant(hadamard.A(), K)));
        o.require(worst <= 1e-10, "Hadamard max |delta_K| " + num(worst, "%.3g"));
        const auto bern = build_bernoulli_model(4, 8, Eigen::VectorXd::Zero(8), 1.0, 1.0, 7);
        const double delta2 = rip_constant(bern.A(), 2);
        const double coherence = oracle::coherence(bern.A());
        o.require(delta2 == coherence,
                  "Bernoulli delta_2 = " + num(delta2, "%.17g") + ", coherence " + num(coherence, "%.17g"));
        report(10, "restricted isometry constants", o);
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

// Command-line front end for the lassodist library.
//
// Exit codes: 0 success, 1 unexpected error, 2 invalid config or arguments,
// 3 solver certificate or exclusion budget violated, 4 a --strict check failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lassodist/distributions.hpp"
#include "lassodist/errors.hpp"
#include "lassodist/harness.hpp"
#include "lassodist/linmodel.hpp"
#include "lassodist/report_io.hpp"

namespace {

using namespace lassodist;

enum ExitCode { kOk = 0, kUnexpected = 1, kBadInput = 2, kHardInvariant = 3, kStrictFailure = 4 };

struct RunOverrides {
    std::optional<long long> L;
    std::optional<std::uint64_t> seed;
    std::optional<double> tau;
    std::optional<double> sigma;
    std::optional<int> threads;
    bool emit_samples = false;

    nlohmann::json apply(ExperimentConfig& config) const {
        nlohmann::json echo = nlohmann::json::object();
        if (L) {
            if (*L < 1) throw ConfigError("--L must be at least 1");
            config.L = static_cast<std::size_t>(*L);
            echo["L"] = *L;
        }
        if (seed) {
            config.seed = *seed;
            echo["seed"] = *seed;
        }
        if (tau) {
            config.tau = *tau;
            echo["tau"] = *tau;
        }
        if (sigma) {
            config.sigma = *sigma;
            echo["sigma"] = *sigma;
        }
        if (emit_samples) {
            config.emit_samples = true;
            echo["emit_samples"] = true;
        }
        if (threads) config.threads = *threads;
        config.validate();
        return echo;
    }
};

void add_run_overrides(CLI::App* cmd, RunOverrides& o) {
    cmd->add_option("--L", o.L, "Number of replicates");
    cmd->add_option("--seed", o.seed, "Replicate seed");
    cmd->add_option("--tau", o.tau, "LASSO threshold");
    cmd->add_option("--sigma", o.sigma, "Noise standard deviation");
    cmd->add_option("--threads", o.threads, "Worker threads (default: hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
}

std::string fmt(double v) { return format_number(v); }

int run_simulate(const std::string& config_path, const RunOverrides& overrides,
                 const std::string& out_dir, bool strict) {
    ExperimentConfig config = load_config(config_path);
    const nlohmann::json echo = overrides.apply(config);
    const ExperimentReport report = run_experiment(config);
    write_report(report, out_dir, echo);

    std::cout << "model " << to_string(report.detected_kind) << " rank " << report.rank
              << ", " << report.solver.included << " replicates (" << report.solver.excluded
              << " excluded), " << report.wall_seconds << " s\n";
    for (const auto& c : report.checks)
        std::cout << (c.passed ? "  ok    " : "  FAIL  ") << c.name << ": " << c.detail << '\n';
    for (const auto& c : report.components)
        if (!c.ks.sufficient())
            std::cout << "  component " << c.component << ": KS not computed ("
                      << c.ks.samples << " nonzero samples)\n";
    std::cout << "report written to " << out_dir << '\n';

    if (!report.kkt_certified) return kHardInvariant;
    if (strict && !report.all_checks_passed()) return kStrictFailure;
    return kOk;
}

int run_cf_check(const std::string& config_path, const RunOverrides& overrides) {
    ExperimentConfig config = load_config(config_path);
    overrides.apply(config);
    const ExperimentReport report = run_experiment(config);

    double worst = 0.0;
    std::cout << "u,gap_exact,gap_expansion,gap_mc\n";
    for (const auto& row : report.cf_grid) {
        std::cout << '"';
        for (Eigen::Index k = 0; k < row.point.u.size(); ++k)
            std::cout << (k ? " " : "") << fmt(row.point.u[k]);
        std::cout << "\"," << fmt(row.gap_exact) << ',' << fmt(row.gap_expansion) << ','
                  << fmt(row.gap_mc) << '\n';
        worst = std::max(worst, row.gap_exact);
    }
    std::cerr << "max exact gap " << worst << '\n';
    if (!report.kkt_certified) return kHardInvariant;
    return worst <= 1e-12 ? kOk : kStrictFailure;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read matrix file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("non-numeric matrix entry '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError("ragged matrix file " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix file " + path);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double norm = A.col(j).norm();
        if (norm == 0.0) throw ConfigError("matrix column " + std::to_string(j + 1) + " is zero");
        A.col(j) /= norm;
    }
    return A;
}

struct RipArgs {
    std::string source = "hadamard";
    Eigen::Index M = 4;
    std::optional<Eigen::Index> N;
    std::uint64_t seed = 7;
    std::string file;
    Eigen::Index K = 2;
};

int run_rip(const RipArgs& a) {
    Eigen::MatrixXd A;
    if (a.source == "hadamard") {
        if (a.N && *a.N != a.M) throw ConfigError("hadamard source needs N == M");
        A = build_hadamard_model(a.M, Eigen::VectorXd::Zero(a.M), 1.0, 1.0).A();
    } else if (a.source == "bernoulli") {
        const Eigen::Index N = a.N.value_or(a.M);
        A = build_bernoulli_model(a.M, N, Eigen::VectorXd::Zero(N), 1.0, 1.0, a.seed).A();
    } else {
        if (a.file.empty()) throw ConfigError("csv source needs --file");
        A = read_csv_matrix(a.file);
    }
    if (a.K < 1 || a.K > A.cols())
        throw ConfigError("--K must lie in 1.." + std::to_string(A.cols()));
    std::cout << "K,delta\n";
    for (Eigen::Index k = 1; k <= a.K; ++k) std::cout << k << ',' << fmt(rip_constant(A, k)) << '\n';
    return kOk;
}

struct PdfArgs {
    std::string law = "orthogonal";
    double location = 0.0;
    double sigma = 1.0;
    double tau = 1.0;
    double wkk = 1.0;
    std::vector<double> range{-6.0, 6.0};
    int points = 241;
};

int run_pdf(const PdfArgs& a) {
    MarginalLaw law;
    if (a.law == "orthogonal") law = MarginalLaw::orthogonal(a.location, a.sigma, a.tau);
    else if (a.law == "transformed")
        law = MarginalLaw::transformed(a.location, a.wkk, a.sigma, a.tau);
    else law = MarginalLaw::maximum_likelihood(a.location, a.sigma);
    law.validate();
    if (a.range.size() != 2 || !(a.range[1] > a.range[0]))
        throw ConfigError("--range needs LO HI with LO < HI");
    if (a.points < 2) throw ConfigError("--points must be at least 2");

    std::cout << "# law=" << to_string(law.kind) << " atom=" << fmt(point_mass_zero(law)) << '\n';
    std::cout << "v,density\n";
    const bool split = law.kind != MarginalLaw::Kind::MLComponent;
    const double step = (a.range[1] - a.range[0]) / (a.points - 1);
    for (int i = 0; i < a.points; ++i) {
        const double v = i + 1 == a.points ? a.range[1] : a.range[0] + step * i;
        if (split && v == 0.0) {
            const double tiny = std::numeric_limits<double>::denorm_min();
            std::cout << "-0," << fmt(pdf(-tiny, law)) << '\n';
            std::cout << "0," << fmt(pdf(tiny, law)) << '\n';
        } else {
            std::cout << fmt(v) << ',' << fmt(pdf(v, law)) << '\n';
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-sample distribution tools for the LASSO estimator"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("LASSODIST_OUT_DIR");
    std::string out_dir = env_out ? env_out : "out";
    std::string config_path;
    RunOverrides overrides;
    bool strict = false;

    auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo experiment and write reports");
    simulate->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_run_overrides(simulate, overrides);
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_flag("--emit-samples", overrides.emit_samples, "Also write samples_<k>.csv");
    simulate->add_flag("--strict", strict, "Exit 4 when any acceptance check fails");

    auto* cf_check = app.add_subcommand("cf-check", "Tabulate CF identity gaps over the u grid");
    cf_check->add_option("config", config_path, "Experiment config (JSON)")->required();
    add_run_overrides(cf_check, overrides);

    RipArgs rip;
    auto* rip_cmd = app.add_subcommand("rip", "Restricted isometry constants delta_1..delta_K");
    rip_cmd->add_option("--source", rip.source)
        ->check(CLI::IsMember({"hadamard", "bernoulli", "csv"}));
    rip_cmd->add_option("--M", rip.M);
    rip_cmd->add_option("--N", rip.N);
    rip_cmd->add_option("--seed", rip.seed);
    rip_cmd->add_option("--file", rip.file, "CSV matrix, one row per line");
    rip_cmd->add_option("--K", rip.K);

    PdfArgs pdf_args;
    auto* pdf_cmd = app.add_subcommand("pdf", "Tabulate a marginal density as CSV");
    pdf_cmd->add_option("--law", pdf_args.law)
        ->check(CLI::IsMember({"orthogonal", "transformed", "ml"}));
    pdf_cmd->add_option("--location", pdf_args.location, "x_k, or w_k^T x for transformed");
    pdf_cmd->add_option("--sigma", pdf_args.sigma);
    pdf_cmd->add_option("--tau", pdf_args.tau);
    pdf_cmd->add_option("--wkk", pdf_args.wkk, "Gram diagonal entry (transformed law)");
    pdf_cmd->add_option("--range", pdf_args.range)->expected(2);
    pdf_cmd->add_option("--points", pdf_args.points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*simulate) return run_simulate(config_path, overrides, out_dir, strict);
        if (*cf_check) return run_cf_check(config_path, overrides);
        if (*rip_cmd) return run_rip(rip);
        if (*pdf_cmd) return run_pdf(pdf_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InvalidLaw& e) {
        std::cerr << "invalid law: " << e.what() << '\n';
        return kBadInput;
    } catch (const InvalidDimension& e) {
        std::cerr << "invalid dimension: " << e.what() << '\n';
        return kBadInput;
    } catch (const TooLarge& e) {
        std::cerr << "too large: " << e.what() << '\n';
        return kBadInput;
    } catch (const ExclusionBudgetExceeded& e) {
        std::cerr << e.what() << '\n';
        return kHardInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
    return kUnexpected;
}

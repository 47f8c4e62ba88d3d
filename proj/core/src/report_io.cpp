#include "lassodist/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "lassodist/errors.hpp"

namespace lassodist {

namespace {

using nlohmann::json;

const std::set<std::string> kConfigKeys = {
    "model_kind", "M",      "N",     "x",          "sigma",   "tau",         "L",
    "seed",       "model_seed", "u_grid", "slice_u_grid", "bins", "components", "solver",
    "threads",    "emit_samples"};

template <typename T>
T field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

json complex_json(CfValue v) { return json::array({v.real(), v.imag()}); }

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kConfigKeys.contains(key)) throw ConfigError("unknown config field '" + key + "'");

    ExperimentConfig c;
    c.model_kind = parse_model_kind(field<std::string>(j, "model_kind", "orthogonal"));
    c.M = field<Eigen::Index>(j, "M", c.M);
    c.N = field<Eigen::Index>(j, "N", c.model_kind == ModelKind::Orthogonal ? c.M : c.N);
    c.sigma = field<double>(j, "sigma", c.sigma);
    c.tau = field<double>(j, "tau", c.tau);
    const auto L = field<long long>(j, "L", static_cast<long long>(c.L));
    if (L < 1) throw ConfigError("L must be at least 1");
    c.L = static_cast<std::size_t>(L);
    c.seed = field<std::uint64_t>(j, "seed", c.seed);
    c.model_seed = field<std::uint64_t>(j, "model_seed", c.model_seed);
    c.bins = field<int>(j, "bins", c.bins);
    c.threads = field<int>(j, "threads", c.threads);
    c.emit_samples = field<bool>(j, "emit_samples", c.emit_samples);
    c.components = field<std::vector<Eigen::Index>>(j, "components", {});
    c.slice_u_grid = field<std::vector<double>>(j, "slice_u_grid", {});

    if (j.contains("x")) {
        const json& xj = j.at("x");
        if (!xj.is_array()) throw ConfigError("'x' must be an array");
        for (std::size_t i = 0; i < xj.size(); ++i) {
            const json& e = xj[i];
            if (e.is_number()) {
                if (xj.size() != static_cast<std::size_t>(c.N))
                    throw ConfigError("dense 'x' must have N entries");
                if (e.get<double>() != 0.0)
                    c.x_entries.emplace_back(static_cast<Eigen::Index>(i) + 1, e.get<double>());
            } else if (e.is_object() && e.contains("index") && e.contains("value") &&
                       e.at("index").is_number_integer() && e.at("value").is_number()) {
                c.x_entries.emplace_back(e.at("index").get<Eigen::Index>(), e.at("value").get<double>());
            } else {
                throw ConfigError("'x' entries must be numbers or {index, value} objects");
            }
        }
    }
    for (const auto& u : field<std::vector<std::vector<double>>>(j, "u_grid", {}))
        c.u_grid.push_back(Eigen::Map<const Eigen::VectorXd>(u.data(),
                                                             static_cast<Eigen::Index>(u.size())));
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (!s.is_object()) throw ConfigError("'solver' must be an object");
        for (const auto& [key, _] : s.items())
            if (key != "tol" && key != "max_iter")
                throw ConfigError("unknown solver field '" + key + "'");
        c.solver_tol = field<double>(s, "tol", c.solver_tol);
        c.solver_max_iter = field<int>(s, "max_iter", c.solver_max_iter);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
    json x = json::array();
    for (const auto& [index, value] : c.x_entries) x.push_back({{"index", index}, {"value", value}});
    json grid = json::array();
    for (const auto& u : c.u_grid) grid.push_back(vector_json(u));
    return {{"model_kind", std::string(to_string(c.model_kind))},
            {"M", c.M},
            {"N", c.N},
            {"x", x},
            {"sigma", c.sigma},
            {"tau", c.tau},
            {"L", c.L},
            {"seed", c.seed},
            {"model_seed", c.model_seed},
            {"u_grid", grid},
            {"slice_u_grid", c.resolved_slice_grid()},
            {"bins", c.bins},
            {"components", c.resolved_components()},
            {"solver", {{"tol", c.solver_tol}, {"max_iter", c.solver_max_iter}}},
            {"emit_samples", c.emit_samples}};
}

json report_to_json(const ExperimentReport& report, const json& overrides) {
    json doc;
    doc["config"] = config_to_json(report.config);
    doc["overrides"] = overrides;
    doc["model"] = {{"kind", std::string(to_string(report.detected_kind))}, {"rank", report.rank}};

    json comps = json::array();
    for (const auto& c : report.components) {
        json slice = json::array();
        for (const auto& r : c.slice) {
            slice.push_back({{"u", r.u},
                             {"slice_cf", complex_json(r.slice_cf)},
                             {"target", complex_json(r.target)},
                             {"gap", r.gap},
                             {"hilbert_exact", complex_json(r.hilbert_exact)},
                             {"hilbert_sign", complex_json(r.hilbert_sign)},
                             {"hilbert_gaussian", r.hilbert_gaussian
                                                      ? complex_json(*r.hilbert_gaussian)
                                                      : json(nullptr)}});
        }
        json ks = {{"samples", c.ks.samples}, {"sufficient", c.ks.sufficient()}};
        ks["statistic"] = c.ks.statistic ? json(*c.ks.statistic) : json(nullptr);
        ks["threshold"] = c.ks_threshold ? json(*c.ks_threshold) : json(nullptr);
        comps.push_back({{"component", c.component},
                         {"law",
                          {{"kind", std::string(to_string(c.law.kind))},
                           {"location", c.law.location},
                           {"scale2", c.law.scale2},
                           {"tau", c.law.tau}}},
                         {"samples", c.empirical.samples.size()},
                         {"ks", ks},
                         {"zero_count", c.empirical.zero_count},
                         {"zero_fraction", c.empirical.zero_fraction},
                         {"point_mass", c.point_mass},
                         {"binomial_se", c.binomial_se},
                         {"slice", slice}});
    }
    doc["components"] = comps;

    json grid = json::array();
    for (const auto& r : report.cf_grid) {
        grid.push_back({{"u", vector_json(r.point.u)},
                        {"from_ball", r.point.from_ball},
                        {"expansion_zero", complex_json(r.expansion_zero)},
                        {"expansion_gamma", complex_json(r.expansion_gamma)},
                        {"gram_cf", complex_json(r.gram_cf)},
                        {"atb_cf", complex_json(r.atb_cf)},
                        {"gap_exact", r.gap_exact},
                        {"gap_expansion", r.gap_expansion},
                        {"gap_mc", r.gap_mc}});
    }
    doc["cf_grid"] = grid;

    const auto& s = report.solver;
    doc["solver"] = {{"included", s.included},
                     {"excluded", s.excluded},
                     {"max_kkt_residual", s.max_kkt_residual},
                     {"kkt_certified", report.kkt_certified},
                     {"iterations",
                      {{"min", s.iterations_min},
                       {"median", s.iterations_median},
                       {"p90", s.iterations_p90},
                       {"max", s.iterations_max}}}};

    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    doc["checks"] = checks;
    doc["all_checks_passed"] = report.all_checks_passed();
    return doc;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  const json& overrides) {
    std::filesystem::create_directories(dir);
    open_output(dir / "report.json") << report_to_json(report, overrides).dump(2) << '\n';
    open_output(dir / "timing.json")
        << json{{"wall_seconds", report.wall_seconds}}.dump(2) << '\n';

    for (const auto& c : report.components) {
        auto out = open_output(dir / ("hist_" + std::to_string(c.component) + ".csv"));
        out << "bin_left,bin_right,density\n";
        const auto& h = c.empirical.histogram;
        for (std::size_t i = 0; i < h.density.size(); ++i)
            out << format_number(h.edges[i]) << ',' << format_number(h.edges[i + 1]) << ','
                << format_number(h.density[i]) << '\n';
    }

    {
        auto out = open_output(dir / "cf_grid.csv");
        const Eigen::Index N = report.config.N;
        for (Eigen::Index k = 0; k < N; ++k) out << 'u' << (k + 1) << ',';
        out << "lhs_re,lhs_im,rhs_re,rhs_im,gap_exact,gap_expansion,gap_mc\n";
        for (const auto& r : report.cf_grid) {
            for (Eigen::Index k = 0; k < N; ++k) out << format_number(r.point.u[k]) << ',';
            out << format_number(r.expansion_zero.real()) << ','
                << format_number(r.expansion_zero.imag()) << ','
                << format_number(r.gram_cf.real()) << ',' << format_number(r.gram_cf.imag())
                << ',' << format_number(r.gap_exact) << ',' << format_number(r.gap_expansion)
                << ',' << format_number(r.gap_mc) << '\n';
        }
    }

    if (report.config.emit_samples) {
        const auto& reps = report.replicates;
        for (const auto& c : report.components) {
            const Eigen::Index k = c.component - 1;
            auto out = open_output(dir / ("samples_" + std::to_string(c.component) + ".csv"));
            out << "replicate,x_hat,gamma,z_hat\n";
            for (Eigen::Index l = 0; l < reps.x_hat.cols(); ++l)
                out << reps.replicate_index[static_cast<std::size_t>(l)] << ','
                    << format_number(reps.x_hat(k, l)) << ',' << format_number(reps.gamma(k, l))
                    << ',' << format_number(reps.z_hat(k, l)) << '\n';
        }
    }
}

}  // namespace lassodist

#include "lassodist/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lassodist/errors.hpp"
#include "lassodist/numerics.hpp"

namespace lassodist {

namespace {

using Kind = MarginalLaw::Kind;

void require_kind(const MarginalLaw& law, Kind kind, const char* fn) {
    law.validate();
    if (law.kind != kind)
        throw InvalidLaw(std::string(fn) + " expects a " + std::string(to_string(kind)) +
                         " law, got " + std::string(to_string(law.kind)));
}

double gaussian_density(double v, double mean, double var) {
    const double d = v - mean;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double split_density(double v, const MarginalLaw& law) {
    if (v == 0.0)
        throw std::domain_error("density is undefined at v = 0; the law has an atom there "
                                "(use point_mass_zero)");
    const double mean = v > 0.0 ? law.location - law.tau : law.location + law.tau;
    return gaussian_density(v, mean, law.scale2);
}

double split_cdf(double v, const MarginalLaw& law) {
    const double s = std::sqrt(law.scale2);
    return v < 0.0 ? normal_cdf((v - law.tau - law.location) / s)
                   : normal_cdf((v + law.tau - law.location) / s);
}

}  // namespace

MarginalLaw MarginalLaw::orthogonal(double x_k, double sigma, double tau) {
    MarginalLaw law{Kind::OrthogonalComponent, x_k, sigma * sigma, tau};
    law.validate();
    return law;
}

MarginalLaw MarginalLaw::transformed(double wk_dot_x, double w_kk, double sigma, double tau) {
    if (!(w_kk > 0.0)) throw InvalidLaw("transformed law needs w_kk > 0");
    MarginalLaw law{Kind::TransformedComponent, wk_dot_x, sigma * sigma * w_kk, tau};
    law.validate();
    return law;
}

MarginalLaw MarginalLaw::maximum_likelihood(double location, double sigma) {
    MarginalLaw law{Kind::MLComponent, location, sigma * sigma, 0.0};
    law.validate();
    return law;
}

void MarginalLaw::validate() const {
    if (!std::isfinite(location)) throw InvalidLaw("law location must be finite");
    if (!(scale2 > 0.0) || !std::isfinite(scale2)) throw InvalidLaw("law variance must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidLaw("law threshold must be >= 0");
    if (kind == Kind::MLComponent && tau != 0.0) throw InvalidLaw("ML law has no threshold");
}

std::string_view to_string(MarginalLaw::Kind kind) noexcept {
    switch (kind) {
        case Kind::OrthogonalComponent: return "orthogonal";
        case Kind::TransformedComponent: return "transformed";
        case Kind::MLComponent: return "ml";
    }
    return "unknown";
}

double pdf_orthogonal(double v, const MarginalLaw& law) {
    require_kind(law, Kind::OrthogonalComponent, "pdf_orthogonal");
    return split_density(v, law);
}

double pdf_transformed(double v, const MarginalLaw& law) {
    require_kind(law, Kind::TransformedComponent, "pdf_transformed");
    return split_density(v, law);
}

double pdf_ml(double v, const MarginalLaw& law) {
    require_kind(law, Kind::MLComponent, "pdf_ml");
    return gaussian_density(v, law.location, law.scale2);
}

double pdf(double v, const MarginalLaw& law) {
    switch (law.kind) {
        case Kind::OrthogonalComponent: return pdf_orthogonal(v, law);
        case Kind::TransformedComponent: return pdf_transformed(v, law);
        case Kind::MLComponent: return pdf_ml(v, law);
    }
    throw InvalidLaw("unknown law kind");
}

double point_mass_zero(const MarginalLaw& law) {
    law.validate();
    if (law.kind == Kind::MLComponent) return 0.0;
    const double s = std::sqrt(law.scale2);
    return normal_cdf((law.tau - law.location) / s) - normal_cdf((-law.tau - law.location) / s);
}

double cdf(double v, const MarginalLaw& law) {
    law.validate();
    if (law.kind == Kind::MLComponent) return normal_cdf((v - law.location) / std::sqrt(law.scale2));
    return split_cdf(v, law);
}

double cdf_orthogonal(double v, const MarginalLaw& law) {
    require_kind(law, Kind::OrthogonalComponent, "cdf_orthogonal");
    return split_cdf(v, law);
}

double conditional_cdf(double v, const MarginalLaw& law) {
    const double atom = point_mass_zero(law);
    const double mass = 1.0 - atom;
    if (!(mass > 0.0)) throw InvalidLaw("law has all of its mass at zero");
    const double F = cdf(v, law);
    return v < 0.0 ? F / mass : (F - atom) / mass;
}

}  // namespace lassodist

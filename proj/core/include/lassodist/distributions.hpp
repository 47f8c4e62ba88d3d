#pragma once

#include <string_view>

namespace lassodist {

/// Marginal law of one LASSO coordinate (orthogonal design), of one
/// component of z_hat = W x_hat under the sign approximation, or of the
/// unthresholded maximum-likelihood estimate.
///
/// The thresholded laws put a Gaussian shifted towards zero by tau on each
/// side of the origin plus an atom at zero:
///   v > 0:  N(v; location - tau, scale2)
///   v < 0:  N(v; location + tau, scale2)
struct MarginalLaw {
    enum class Kind { OrthogonalComponent, TransformedComponent, MLComponent };

    Kind kind = Kind::OrthogonalComponent;
    double location = 0.0;
    double scale2 = 1.0;
    double tau = 0.0;

    static MarginalLaw orthogonal(double x_k, double sigma, double tau);
    /// scale2 = sigma^2 * w_kk. The exponent uses the same variance as the
    /// normalizer, which is what the sliced CF identity implies.
    static MarginalLaw transformed(double wk_dot_x, double w_kk, double sigma, double tau);
    static MarginalLaw maximum_likelihood(double location, double sigma);

    void validate() const;
};

std::string_view to_string(MarginalLaw::Kind kind) noexcept;

/// Density on v != 0 for the orthogonal law. Throws at v = 0, where the law
/// has an atom instead (see point_mass_zero).
double pdf_orthogonal(double v, const MarginalLaw& law);
double pdf_transformed(double v, const MarginalLaw& law);
double pdf_ml(double v, const MarginalLaw& law);

/// Dispatches on law.kind.
double pdf(double v, const MarginalLaw& law);

/// P(v = 0); zero for the ML law.
double point_mass_zero(const MarginalLaw& law);

/// Right-continuous CDF including the atom.
double cdf(double v, const MarginalLaw& law);
double cdf_orthogonal(double v, const MarginalLaw& law);

/// CDF of the law conditioned on v != 0.
double conditional_cdf(double v, const MarginalLaw& law);

}  // namespace lassodist

#include <gtest/gtest.h>

#include <numbers>

#include "lassodist/distributions.hpp"
#include "lassodist/errors.hpp"
#include "oracles.hpp"

using namespace lassodist;

namespace {

double integrate_density(const MarginalLaw& law) {
    const double s = std::sqrt(law.scale2);
    const double lo = law.location - law.tau - 14.0 * s;
    const double hi = law.location + law.tau + 14.0 * s;
    return oracle::integrate(
        [&](double v) { return v == 0.0 ? 0.0 : pdf(v, law); }, std::min(lo, -1.0),
        std::max(hi, 1.0), {0.0});
}

}  // namespace

TEST(MarginalLaw, FrozenPointMasses) {
    EXPECT_NEAR(point_mass_zero(MarginalLaw::orthogonal(0.0, 1.0, 1.0)), 0.6826894921370859, 1e-15);
    EXPECT_NEAR(point_mass_zero(MarginalLaw::orthogonal(4.0, 1.0, 1.0)), 0.001349611380058214, 1e-15);
    EXPECT_NEAR(point_mass_zero(MarginalLaw::orthogonal(1.0, 1.0, 1.0)), 0.4772498680518208, 1e-15);
    EXPECT_EQ(point_mass_zero(MarginalLaw::maximum_likelihood(1.0, 1.0)), 0.0);
}

TEST(MarginalLaw, FrozenCdfAndDensityValues) {
    const auto law = MarginalLaw::orthogonal(4.0, 1.0, 1.0);
    EXPECT_NEAR(conditional_cdf(3.0, law), 0.49932428235374576, 1e-14);
    EXPECT_NEAR(cdf(-0.5, MarginalLaw::orthogonal(0.0, 1.0, 1.0)), 0.06680720126885807, 1e-15);
    EXPECT_NEAR(pdf(1.0, MarginalLaw::transformed(2.0, 1.0, 1.0, 0.5)), 0.35206532676429947, 1e-15);
}

TEST(MarginalLaw, PeakSitsAtShiftedLocation) {
    const auto law = MarginalLaw::orthogonal(4.0, 1.0, 1.0);
    EXPECT_NEAR(pdf_orthogonal(3.0, law), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
    EXPECT_LT(pdf_orthogonal(2.9, law), pdf_orthogonal(3.0, law));
    EXPECT_LT(pdf_orthogonal(3.1, law), pdf_orthogonal(3.0, law));
    const auto neg = MarginalLaw::orthogonal(-2.0, 0.5, 0.3);
    EXPECT_NEAR(pdf_orthogonal(-1.7, neg), 1.0 / std::sqrt(2.0 * std::numbers::pi * 0.25), 1e-14);
}

TEST(MarginalLaw, DensityIntegratesToOneMinusAtom) {
    for (double x : {0.0, 1.0, 4.0, -2.5})
        for (double tau : {0.0, 0.5, 1.0, 2.0}) {
            const auto law = MarginalLaw::orthogonal(x, 1.2, tau);
            EXPECT_NEAR(integrate_density(law), 1.0 - point_mass_zero(law), 1e-10)
                << "x " << x << " tau " << tau;
        }
    const auto t = MarginalLaw::transformed(8.0, 1.0, 1.0, 2.0);
    EXPECT_NEAR(integrate_density(t), 1.0 - point_mass_zero(t), 1e-10);
    EXPECT_NEAR(integrate_density(MarginalLaw::maximum_likelihood(0.3, 0.8)), 1.0, 1e-10);
}

TEST(MarginalLaw, CdfIsIntegralOfDensityPlusAtom) {
    const auto law = MarginalLaw::orthogonal(1.0, 1.0, 1.0);
    const double atom = point_mass_zero(law);
    for (double v : {-3.0, -0.5, -1e-9, 0.0, 0.25, 2.0}) {
        double mass = oracle::integrate([&](double w) { return w == 0.0 ? 0.0 : pdf(w, law); },
                                        -15.0, v, v > 0.0 ? std::vector<double>{0.0} : std::vector<double>{});
        if (v >= 0.0) mass += atom;
        EXPECT_NEAR(cdf(v, law), mass, 1e-10) << "v " << v;
    }
}

TEST(MarginalLaw, JumpAtZeroEqualsAtom) {
    const auto law = MarginalLaw::orthogonal(0.7, 1.0, 1.5);
    EXPECT_NEAR(cdf(0.0, law) - cdf(-1e-300, law), point_mass_zero(law), 1e-15);
}

TEST(MarginalLaw, ConditionalCdfRemovesAtom) {
    const auto law = MarginalLaw::orthogonal(0.0, 1.0, 1.0);
    EXPECT_NEAR(conditional_cdf(-1e-300, law), 0.5, 1e-15);
    EXPECT_NEAR(conditional_cdf(0.0, law), 0.5, 1e-15);
    EXPECT_NEAR(conditional_cdf(-50.0, law), 0.0, 1e-15);
    EXPECT_NEAR(conditional_cdf(50.0, law), 1.0, 1e-15);
}

TEST(MarginalLaw, TransformedWithUnitDiagonalEqualsOrthogonal) {
    const auto a = MarginalLaw::orthogonal(2.3, 0.9, 0.8);
    const auto b = MarginalLaw::transformed(2.3, 1.0, 0.9, 0.8);
    for (double v : {-2.0, -0.1, 0.4, 1.5, 3.0}) {
        EXPECT_DOUBLE_EQ(pdf(v, a), pdf(v, b));
        EXPECT_DOUBLE_EQ(cdf(v, a), cdf(v, b));
    }
    EXPECT_DOUBLE_EQ(point_mass_zero(a), point_mass_zero(b));
}

TEST(MarginalLaw, TransformedScalesVariance) {
    const auto law = MarginalLaw::transformed(1.0, 2.5, 0.8, 0.3);
    EXPECT_DOUBLE_EQ(law.scale2, 0.64 * 2.5);
    EXPECT_NEAR(pdf_transformed(0.7, law), 1.0 / std::sqrt(2.0 * std::numbers::pi * 1.6), 1e-15);
}

TEST(MarginalLaw, MaximumLikelihoodIsGaussian) {
    const auto law = MarginalLaw::maximum_likelihood(1.0, 2.0);
    EXPECT_NEAR(pdf_ml(0.0, law), std::exp(-1.0 / 8.0) / std::sqrt(8.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(cdf(1.0, law), 0.5, 1e-15);
}

TEST(MarginalLaw, Errors) {
    EXPECT_THROW(MarginalLaw::transformed(1.0, 0.0, 1.0, 1.0), InvalidLaw);
    EXPECT_THROW(MarginalLaw::orthogonal(1.0, 0.0, 1.0), InvalidLaw);
    EXPECT_THROW(MarginalLaw::orthogonal(1.0, 1.0, -1.0), InvalidLaw);
    const auto law = MarginalLaw::orthogonal(1.0, 1.0, 1.0);
    EXPECT_THROW(pdf_orthogonal(0.0, law), std::domain_error);
    EXPECT_THROW(pdf_transformed(1.0, law), InvalidLaw);
    EXPECT_THROW(pdf_ml(1.0, law), InvalidLaw);
    EXPECT_THROW(cdf_orthogonal(1.0, MarginalLaw::maximum_likelihood(0.0, 1.0)), InvalidLaw);
}

#include "rdlab/initial_data.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rdlab;

namespace {

DomainSpec unit_interval(int m = 127) { return DomainSpec{1, 1.0, m, EigenvalueConvention::continuum}; }

// Composite Simpson on [a, b] with n (even) panels.
template <class Fn>
double simpson(Fn fn, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = fn(a) + fn(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
    return s * h / 3.0;
}

} // namespace

TEST(Families, NormalizedToRadius) {
    for (int dim : {1, 2}) {
        const DomainSpec d{dim, 1.0, dim == 1 ? 127 : 31};
        for (std::uint64_t i = 0; i < 9; ++i) {
            const Field u = ensemble_member(d, 42, i, 2.5);
            EXPECT_NEAR(l2_norm(u), 2.5, 1e-12);
            EXPECT_TRUE(u.is_finite());
        }
    }
}

TEST(Families, DeterministicPerMember) {
    const auto d = unit_interval();
    EXPECT_EQ(ensemble_member(d, 7, 4, 1.0), ensemble_member(d, 7, 4, 1.0));
    EXPECT_FALSE(ensemble_member(d, 7, 4, 1.0) == ensemble_member(d, 7, 5, 1.0));
    EXPECT_FALSE(ensemble_member(d, 7, 4, 1.0) == ensemble_member(d, 8, 4, 1.0));
}

TEST(Families, SpikyIsRougherThanMixture) {
    const auto d = unit_interval(255);
    Rng a(1), b(1);
    const Field smooth = eigenmode_mixture(d, a, 1.0);
    const Field spike = spiky_bump(d, b, 1.0);
    EXPECT_GT(h1_seminorm(spike), 10.0 * h1_seminorm(smooth));
}

TEST(Families, ZeroRadiusGivesZero) {
    Rng rng(3);
    EXPECT_EQ(l2_norm(random_coefficient_field(unit_interval(), rng, 0.0)), 0.0);
}

TEST(AnalyticProfile, GaussianNormsMatchQuadrature) {
    const auto u = AnalyticProfile::gaussian_with_norms(0.3, 1.2, 4.0, 0.45);
    EXPECT_NEAR(u.lebesgue_norm(2.0), 0.3, 1e-12);
    EXPECT_NEAR(u.lebesgue_norm(4.0), 1.2, 1e-12);
    for (double gamma : {2.0, 3.0, 4.0, 6.0}) {
        const double q = simpson(
            [&](double x) {
                return std::pow(u.value * std::exp(-(x - u.center) * (x - u.center) / (2 * u.width * u.width)), gamma);
            },
            0.0, 1.0, 200000);
        EXPECT_NEAR(u.lebesgue_norm(gamma), std::pow(q, 1.0 / gamma), 1e-9 * u.lebesgue_norm(gamma));
    }
}

TEST(AnalyticProfile, SineCoefficientsMatchQuadrature) {
    const auto g = AnalyticProfile::gaussian_with_norms(0.2, 0.5, 4.0, 0.37);
    const auto c = AnalyticProfile::constant(1.5);
    for (int k = 1; k <= 12; ++k) {
        const double gq = simpson(
            [&](double x) {
                return 2.0 * g.value * std::exp(-(x - g.center) * (x - g.center) / (2 * g.width * g.width)) *
                       std::sin(k * std::numbers::pi * x);
            },
            0.0, 1.0, 200000);
        EXPECT_NEAR(g.sine_coefficient(k), gq, 1e-10);
        const double cq = simpson([&](double x) { return 2.0 * 1.5 * std::sin(k * std::numbers::pi * x); }, 0.0, 1.0,
                                  20000);
        EXPECT_NEAR(c.sine_coefficient(k), cq, 1e-10);
    }
}

TEST(AnalyticProfile, RejectsProfileTooWide) {
    EXPECT_THROW(AnalyticProfile::gaussian_with_norms(1.0, 1.01, 4.0, 0.5), ParameterError);
    EXPECT_THROW(AnalyticProfile::gaussian_with_norms(1.0, 2.0, 2.0, 0.5), ParameterError);
}

TEST(InitialLayer, LayerTimeDampsUnresolvedModes) {
    const auto d = unit_interval(255);
    const double t0 = initial_layer_time(d, 1.0);
    EXPECT_NEAR((1.0 + axis_eigenvalue(d, 255)) * t0, 36.0, 1e-12);
    EXPECT_LT(std::exp(-(1.0 + axis_eigenvalue(d, 256)) * t0), std::exp(-36.0));
    EXPECT_LT(t0, 1e-4);
}

TEST(InitialLayer, LinearCoefficientsAndForcing) {
    const auto d = unit_interval(63);
    const auto u0 = AnalyticProfile::constant(1.0);
    const Field g = eigenmode(d, 2, 1) *= 3.0;
    const double t0 = 0.01, lambda = 1.0;
    const auto layer = initial_layer(u0, d, lambda, g, NonlinearitySpec{{0.0}, std::nullopt}, t0);
    const SpectralField c = transform_forward(layer.state);
    for (int k = 1; k <= 10; ++k) {
        const double a = lambda + std::pow(k * std::numbers::pi, 2);
        double expected = (k % 2 ? 4.0 / (k * std::numbers::pi) : 0.0) * std::exp(-a * t0);
        if (k == 2)
            expected += 3.0 * (1.0 - std::exp(-a * t0)) / a;
        EXPECT_NEAR(c[k - 1], expected, 1e-12);
    }
    EXPECT_EQ(layer.reaction_estimate, 0.0);
}

TEST(InitialLayer, ReactionEstimateForConstantProfile) {
    // |f(1)| = 1 on a unit interval: the bound integrates to t0.
    const auto d = unit_interval(63);
    const double t0 = 1e-3;
    const auto layer = initial_layer(AnalyticProfile::constant(1.0), d, 1.0, Field(d),
                                     NonlinearitySpec{{0.0, 0.0, 0.0, 1.0}, std::nullopt}, t0);
    EXPECT_NEAR(layer.reaction_estimate, t0, 1e-12);
}

TEST(InitialLayer, SpikeReactionIsSmall) {
    const auto d = unit_interval(255);
    const auto u0 = AnalyticProfile::gaussian_with_norms(1.0, 10.0, 4.0, 0.5);
    const double t0 = initial_layer_time(d, 1.0);
    const auto layer = initial_layer(u0, d, 1.0, Field(d), NonlinearitySpec{{0.0, -1.0, 0.0, 1.0}, std::nullopt}, t0);
    EXPECT_TRUE(layer.state.is_finite());
    EXPECT_LT(layer.reaction_estimate, 1e-2);
    EXPECT_LT(l2_norm(layer.state), 1.0);
}

TEST(InitialLayer, RequiresOneDimension) {
    const DomainSpec d{2, 1.0, 15};
    EXPECT_THROW(initial_layer(AnalyticProfile::constant(1.0), d, 1.0, Field(d), NonlinearitySpec{{0.0}, std::nullopt},
                               0.1),
                 ParameterError);
}

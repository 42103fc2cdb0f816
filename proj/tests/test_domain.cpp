#include "rdlab/domain.hpp"
#include "rdlab/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rdlab;

namespace {

DomainSpec unit_interval(int m = 255) { return DomainSpec{1, 1.0, m, EigenvalueConvention::continuum}; }

Field random_field(const DomainSpec& d, Rng& rng) {
    Field f(d);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = rng.normal();
    return f;
}

} // namespace

TEST(Domain, ValidationRejectsBadSpecs) {
    EXPECT_THROW((DomainSpec{3, 1.0, 16}.validate()), ParameterError);
    EXPECT_THROW((DomainSpec{1, -1.0, 16}.validate()), ParameterError);
    EXPECT_THROW((DomainSpec{1, 1.0, 7}.validate()), ParameterError);
    EXPECT_NO_THROW((DomainSpec{2, 2.0, 8}.validate()));
}

TEST(Domain, GridCoordinates) {
    const auto d = unit_interval(127);
    EXPECT_DOUBLE_EQ(d.spacing(), 1.0 / 128.0);
    EXPECT_DOUBLE_EQ(d.coordinate(0), 1.0 / 128.0);
    EXPECT_DOUBLE_EQ(d.coordinate(126), 127.0 / 128.0);
    EXPECT_EQ((DomainSpec{2, 1.0, 16}.size()), 256u);
}

TEST(Field, RejectsNonFiniteAndWrongLength) {
    const auto d = unit_interval(16);
    EXPECT_THROW(Field(d, std::vector<double>(15, 0.0)), StateError);
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    EXPECT_THROW(Field(d, v), StateError);
}

TEST(Field, MismatchedDomainsThrow) {
    Field a(unit_interval(16));
    Field b(unit_interval(32));
    EXPECT_THROW(a += b, StateError);
}

TEST(LebesgueNorm, ZeroField) { EXPECT_EQ(lebesgue_norm(Field(unit_interval()), 4.0), 0.0); }

TEST(LebesgueNorm, ConstantOneRiemannSum) {
    const auto d = unit_interval(127);
    const Field one = Field::sample(d, [](Point) { return 1.0; });
    EXPECT_NEAR(lebesgue_norm(one, 2.0), 0.9960860906568267, 1e-14);
}

TEST(LebesgueNorm, SineConvergesToHalf) {
    double previous_error = 1.0;
    for (int m : {31, 127, 511}) {
        const auto d = unit_interval(m);
        const double err = std::abs(l2_norm(eigenmode(d, 1)) - std::sqrt(0.5));
        EXPECT_LE(err, previous_error + 1e-15);
        previous_error = err;
    }
    EXPECT_LT(previous_error, 1e-12);
}

TEST(LebesgueNorm, RejectsGammaBelowOne) {
    EXPECT_THROW(lebesgue_norm(Field(unit_interval()), 0.5), ParameterError);
}

TEST(LebesgueNorm, LargeGammaDoesNotOverflow) {
    const auto d = unit_interval(64);
    const Field f = Field::sample(d, [](Point p) { return 1e30 * p.x; });
    const double n = lebesgue_norm(f, 40.0);
    EXPECT_TRUE(std::isfinite(n));
    EXPECT_GT(n, 0.0);
}

TEST(LebesgueNorm, PowerBoundByL2AndMax) {
    Rng rng(7);
    const auto d = unit_interval(64);
    for (int trial = 0; trial < 200; ++trial) {
        Field f(d);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = rng.uniform(-1.0, 1.0);
        const double gamma = rng.uniform(2.0, 12.0);
        const double lhs = lebesgue_power(f, gamma);
        const double rhs = lebesgue_power(f, 2.0) * std::pow(f.max_abs(), gamma - 2.0);
        EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
    }
}

TEST(H1Seminorm, Values) {
    const auto d = unit_interval();
    EXPECT_EQ(h1_seminorm(Field(d)), 0.0);
    EXPECT_NEAR(h1_seminorm(eigenmode(d, 1)), std::numbers::pi / std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(h1_seminorm(eigenmode(d, 2)) / h1_seminorm(eigenmode(d, 1)), 2.0, 1e-12);
}

TEST(H1Seminorm, EigenmodeScaling) {
    for (int dim : {1, 2}) {
        const DomainSpec d{dim, 1.5, 63};
        const auto mu = laplacian_eigenvalues(d);
        for (int k = 1; k <= 5; ++k) {
            const Field e = eigenmode(d, k, dim == 2 ? k + 1 : 1);
            const std::size_t idx = dim == 1 ? k - 1 : static_cast<std::size_t>(k - 1) * 63 + k;
            EXPECT_NEAR(h1_seminorm(e), std::sqrt(mu[idx]) * l2_norm(e), 1e-10 * h1_seminorm(e));
        }
    }
}

TEST(Transform, RoundTripRandomFields) {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const DomainSpec d{trial % 2 + 1, 1.0, trial % 2 ? 16 : 64};
        const Field f = random_field(d, rng);
        const Field back = transform_inverse(transform_forward(f));
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::abs(back[i] - f[i]));
        ASSERT_LE(err, 1e-12 * f.max_abs());
    }
}

TEST(Transform, ForwardOfInverseIsIdentity) {
    Rng rng(3);
    const auto d = unit_interval(100);
    SpectralField c(d);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = rng.normal();
    const SpectralField back = transform_forward(transform_inverse(c));
    for (std::size_t i = 0; i < c.size(); ++i)
        EXPECT_NEAR(back[i], c[i], 1e-12);
}

TEST(Transform, EigenmodeHasOneCoefficient) {
    const auto d = unit_interval(64);
    const SpectralField c = transform_forward(eigenmode(d, 5));
    for (std::size_t i = 0; i < c.size(); ++i)
        EXPECT_NEAR(c[i], i == 4 ? 1.0 : 0.0, 1e-13);
}

TEST(Transform, Parseval) {
    Rng rng(5);
    for (int dim : {1, 2}) {
        const DomainSpec d{dim, 2.5, 40};
        for (int trial = 0; trial < 50; ++trial) {
            const Field f = random_field(d, rng);
            const double direct = lebesgue_power(f, 2.0);
            const double spectral = std::pow(spectral_l2_norm(transform_forward(f)), 2);
            EXPECT_NEAR(direct, spectral, 1e-12 * direct);
        }
    }
}

TEST(Eigenvalues, ContinuumValues) {
    const auto mu1 = laplacian_eigenvalues(unit_interval());
    const double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_DOUBLE_EQ(mu1[0], pi2);
    EXPECT_DOUBLE_EQ(mu1[1], 4.0 * pi2);
    const auto mu2 = laplacian_eigenvalues(DomainSpec{2, 1.0, 16});
    EXPECT_DOUBLE_EQ(mu2[0], 2.0 * pi2);
}

TEST(Eigenvalues, DiscreteConventionBelowContinuumAndMonotone) {
    DomainSpec d = unit_interval(64);
    d.eigenvalues = EigenvalueConvention::discrete;
    const auto disc = laplacian_eigenvalues(d);
    d.eigenvalues = EigenvalueConvention::continuum;
    const auto cont = laplacian_eigenvalues(d);
    for (std::size_t k = 0; k < disc.size(); ++k) {
        EXPECT_LE(disc[k], cont[k]);
        if (k > 0) {
            EXPECT_GT(disc[k], disc[k - 1]);
        }
    }
    EXPECT_NEAR(disc[0], cont[0], 1e-3 * cont[0]);
}

TEST(InnerProduct, MatchesSquaredNorm) {
    Rng rng(9);
    const auto d = unit_interval(50);
    const Field f = random_field(d, rng);
    EXPECT_NEAR(inner_product(f, f), lebesgue_power(f, 2.0), 1e-12 * lebesgue_power(f, 2.0));
}

#include "rdlab/nonlinearity.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rdlab;

namespace {

NonlinearitySpec cubic() { return NonlinearitySpec{{0.0, -1.0, 0.0, 1.0}, std::nullopt}; }

DissipativityConstants reference_constants() { return DissipativityConstants{4.0, 3.0, 1.0, 0.5, 0.5, 2.0}; }

ScanSpec reference_scan() { return ScanSpec{50.0, 1e-3}; }

// Oracle for f(a+h)-f(a) in long double via direct expansion of each monomial.
long double difference_oracle(const NonlinearitySpec& f, long double a, long double h) {
    long double total = 0.0L;
    for (std::size_t j = 1; j < f.coefficients.size(); ++j) {
        // (a+h)^j - a^j = sum_{m=1}^{j} C(j,m) a^{j-m} h^m
        long double binom = 1.0L, term = 0.0L;
        for (std::size_t m = 1; m <= j; ++m) {
            binom = binom * static_cast<long double>(j - m + 1) / static_cast<long double>(m);
            term += binom * std::pow(a, static_cast<long double>(j - m)) * std::pow(h, static_cast<long double>(m));
        }
        total += f.coefficients[j] * term;
    }
    return total;
}

} // namespace

TEST(Evaluate, CubicValues) {
    const auto f = cubic();
    EXPECT_EQ(evaluate(f, 1.0), 0.0);
    EXPECT_EQ(evaluate(f, 2.0), 6.0);
    EXPECT_EQ(evaluate_derivative(f, 0.0), -1.0);
    EXPECT_EQ(f.p(), 4.0);
}

TEST(Evaluate, OverflowThrows) {
    EXPECT_THROW(evaluate(cubic(), 1e200), EvaluationError);
    EXPECT_THROW(evaluate_derivative(cubic(), 1e200), EvaluationError);
}

TEST(ExactDifference, ZeroIncrementIsExactlyZero) {
    NonlinearitySpec f{{0.0, 0.0, 0.0, 1.0}, std::nullopt};
    EXPECT_EQ(exact_difference(f, 1.0, 0.0), 0.0);
}

TEST(ExactDifference, TinyIncrementKeepsFullPrecision) {
    NonlinearitySpec f{{0.0, 0.0, 0.0, 1.0}, std::nullopt};
    const double expected = 3.000000000003e-12; // 3e-12 + 3e-24 + 1e-36
    EXPECT_NEAR(exact_difference(f, 1.0, 1e-12), expected, 4e-16 * expected);
}

TEST(ExactDifference, AtZeroEqualsValue) {
    const auto f = cubic();
    for (double t : {-3.0, -0.5, 0.25, 2.0, 7.5})
        EXPECT_NEAR(exact_difference(f, 0.0, t), t * t * t - t, 1e-14 * std::max(1.0, std::abs(t * t * t)));
}

TEST(ExactDifference, AgreesWithNaiveForModerateSteps) {
    const NonlinearitySpec f{{0.3, -2.0, 0.7, 1.5, -0.2, 0.9}, std::nullopt};
    Rng rng(21);
    for (int i = 0; i < 20000; ++i) {
        const double a = rng.uniform(-5.0, 5.0);
        double h = rng.log_uniform(1e-3, 5.0);
        if (rng.uniform() < 0.5)
            h = -h;
        const double naive = evaluate(f, a + h) - evaluate(f, a);
        const double exact = exact_difference(f, a, h);
        ASSERT_NEAR(exact, naive, 1e-8 * std::max(std::abs(naive), 1e-300) + 1e-10);
    }
}

TEST(ExactDifference, MatchesLongDoubleOracleForTinySteps) {
    const NonlinearitySpec f{{0.3, -2.0, 0.7, 1.5, -0.2, 0.9}, std::nullopt};
    Rng rng(22);
    for (int i = 0; i < 20000; ++i) {
        const double a = rng.uniform(-3.0, 3.0);
        const double h = rng.log_uniform(1e-14, 1e-6) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const long double ref = difference_oracle(f, a, h);
        const double got = exact_difference(f, a, h);
        ASSERT_NEAR(got, static_cast<double>(ref), 1e-12 * std::abs(static_cast<double>(ref)) + 1e-300);
    }
}

TEST(Certify, ReferenceCubicPasses) {
    const auto report = certify_conditions(cubic(), reference_constants(), reference_scan());
    EXPECT_TRUE(report.pass);
    EXPECT_TRUE(report.scan_range_adequate);
    for (const auto& c : report.conditions) {
        EXPECT_GE(c.worst_margin, -certification_tolerance) << c.name;
        EXPECT_TRUE(c.tail_certified) << c.name;
    }
    // f' = 3s^2 - 1 coincides with kappa s^2 - l, so the (f1) margin is zero everywhere.
    EXPECT_NEAR(report.condition("f1").worst_margin, 0.0, 1e-9);
    // (s^2 - 1)^2 / 2 vanishes at s = +-1.
    EXPECT_NEAR(report.condition("f2").worst_margin, 0.0, 1e-9);
    EXPECT_NEAR(std::abs(report.condition("f2").argmin), 1.0, 1e-3);
}

TEST(Certify, AlphaTooLargeFailsF2) {
    auto c = reference_constants();
    c.alpha = 2.0;
    const auto report = certify_conditions(cubic(), c, reference_scan());
    EXPECT_FALSE(report.pass);
    EXPECT_FALSE(report.condition("f2").pass);
    EXPECT_FALSE(report.condition("f2").tail_certified);
}

TEST(Certify, BoundaryAlphaGivesZeroMargin) {
    auto c = reference_constants();
    c.alpha = 1.0;
    const auto report = certify_conditions(cubic(), c, reference_scan());
    EXPECT_EQ(report.condition("2.4").worst_margin, 0.0);
    EXPECT_TRUE(report.condition("2.4").pass);
}

TEST(Certify, InvalidScanRejected) {
    EXPECT_THROW(certify_conditions(cubic(), reference_constants(), ScanSpec{-1.0, 1e-3}), ParameterError);
    EXPECT_THROW(certify_conditions(cubic(), reference_constants(), ScanSpec{1.0, 0.0}), ParameterError);
}

TEST(Certify, TailCatchesFailureBeyondScan) {
    // With p forced to 4, s^3 + 1e-3 s^5 satisfies (f3) with sigma = 2 on [-5, 5]
    // but not for large |s|; only the tail certificate can see that.
    const NonlinearitySpec f{{0.0, 0.0, 0.0, 1.0, 0.0, 1e-3}, 4.0};
    const DissipativityConstants c{4.0, 3.0, 1.0, 0.5, 1.0, 2.0};
    const auto report = certify_conditions(f, c, ScanSpec{5.0, 1e-2});
    const auto& f3 = report.condition("f3");
    EXPECT_GE(f3.worst_margin, 0.0);
    EXPECT_FALSE(f3.tail_certified);
    EXPECT_FALSE(f3.pass);
    EXPECT_TRUE(report.condition("f1").pass);
    EXPECT_TRUE(report.condition("f2").pass);
}

TEST(GeneralizedPolynomial, DominanceCertificate) {
    GeneralizedPolynomial q;
    q.add(4.0L, 1.0L);
    q.add(2.0L, -10.0L);
    EXPECT_FALSE(q.nonnegative_beyond(2.0L));
    EXPECT_TRUE(q.nonnegative_beyond(5.0L));
    GeneralizedPolynomial zero;
    zero.add(3.0L, 2.0L);
    zero.add(3.0L, -2.0L);
    EXPECT_TRUE(zero.nonnegative_beyond(1.0L));
}

TEST(Monotonicity, ConstantsForP4AndP3) {
    const auto m4 = monotonicity_constant_oracle(4.0, 20000);
    EXPECT_NEAR(m4.c4_raw, 0.25, 1e-6);
    EXPECT_NEAR(m4.c4, 0.2475, 1e-6);
    EXPECT_NEAR(m4.c4_argmin_a, -m4.c4_argmin_b, 1e-2);
    const auto m3 = monotonicity_constant_oracle(3.0, 20000);
    EXPECT_NEAR(m3.c4_raw, 0.5, 1e-6);
    EXPECT_GE(m3.c4, 0.49);
    EXPECT_LE(m3.c4, 0.51);
    EXPECT_THROW(monotonicity_constant_oracle(2.0, 100), ParameterError);
}

TEST(Monotonicity, ScaleInvariance) {
    // The ratio is homogeneous of degree 0 in (a, b).
    const double p = 5.0;
    auto ratio = [&](double a, double b) {
        const double diff = std::copysign(std::pow(std::abs(a), p - 1), a) - std::copysign(std::pow(std::abs(b), p - 1), b);
        return diff * (a - b) / std::pow(std::abs(a - b), p);
    };
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), t = rng.log_uniform(1e-3, 1e3);
        EXPECT_NEAR(ratio(a, b), ratio(t * a, t * b), 1e-9 * std::abs(ratio(a, b)));
    }
}

TEST(Decompose, ReferenceCubic) {
    const auto result = decompose(cubic(), reference_constants(), reference_scan());
    const auto& d = result.decomposition;
    EXPECT_DOUBLE_EQ(d.f1_scale, 0.25);
    EXPECT_DOUBLE_EQ(d.f1_shift, 2.0);
    EXPECT_DOUBLE_EQ(d.f1(2.0), 0.25 * 8.0 - 2.0);
    EXPECT_DOUBLE_EQ(d.kappa2, 2.25);
    EXPECT_DOUBLE_EQ(d.alpha2, 0.125);
    EXPECT_DOUBLE_EQ(d.l2, 1.0);
    EXPECT_LE(d.alpha2, d.kappa2 / (d.p - 1.0));
    EXPECT_NEAR(d.alpha1, 0.25 * 0.2475, 1e-6);
    EXPECT_TRUE(result.f2_report.pass);
    for (const char* name : {"f21", "f22", "f23", "f24"})
        EXPECT_TRUE(result.f2_report.condition(name).pass) << name;
}

TEST(Decompose, DecompositionIdentity) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    Rng rng(8);
    for (int i = 0; i < 100000; ++i) {
        const double s = rng.uniform(-30.0, 30.0);
        const double total = d.f1(s) + evaluate_f2(f, d, s);
        ASSERT_NEAR(total, evaluate(f, s), 1e-10 * std::max(1.0, std::abs(evaluate(f, s))));
    }
}

TEST(Decompose, F1MonotoneAndGrowth) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    Rng rng(12);
    std::size_t monotone_violations = 0, growth_violations = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double s1 = rng.uniform(-20.0, 20.0), s2 = rng.uniform(-20.0, 20.0);
        const double h = s1 - s2;
        const double diff = d.f1(s1) - d.f1(s2);
        if (diff * h < d.alpha1 * std::pow(std::abs(h), d.p) * (1.0 - 1e-12))
            ++monotone_violations;
        const double bound =
            d.sigma1 * std::abs(h) * (1.0 + std::pow(std::abs(s1), d.p - 2) + std::pow(std::abs(s2), d.p - 2));
        if (std::abs(diff) > bound * (1.0 + 1e-12))
            ++growth_violations;
    }
    EXPECT_EQ(monotone_violations, 0u);
    EXPECT_EQ(growth_violations, 0u);
}

TEST(Decompose, AlphaToZeroLimit) {
    auto c = reference_constants();
    c.alpha = 1e-9;
    c.beta = 1.0;
    const auto d = decompose(cubic(), c, ScanSpec{20.0, 1e-2}).decomposition;
    EXPECT_NEAR(d.kappa2, c.kappa, 1e-8);
}

TEST(Decompose, RequiresCertifiedInput) {
    auto c = reference_constants();
    c.alpha = 2.0;
    EXPECT_THROW(decompose(cubic(), c, reference_scan()), PreconditionError);
}

TEST(Decompose, Alpha2BelowKappa2RandomConstants) {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.uniform(2.1, 10.0);
        const double kappa = rng.uniform(0.1, 10.0);
        const double alpha = rng.uniform(0.0, 1.0) * kappa / (p - 1.0);
        const double kappa2 = kappa - 0.5 * alpha * (p - 1.0);
        EXPECT_LE(alpha / 4.0, kappa2 / (p - 1.0) * (1.0 + 1e-12));
    }
}

TEST(Corollary, EqualArgumentsHold) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    const std::vector<CorollaryTriple> triples{{1.0, 1.0, 0.0}, {-3.0, -3.0, 2.5}};
    const auto report = check_corollary(f, d, triples);
    EXPECT_TRUE(report.pass());
}

TEST(Corollary, UnitStepFromZero) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    // LHS = (f(1) - f(0)) * 1 = 0 and RHS = alpha1 - l2 < 0.
    EXPECT_LT(d.alpha1 - d.l2, 0.0);
    const std::vector<CorollaryTriple> triples{{1.0, 0.0, 0.0}};
    EXPECT_TRUE(check_corollary(f, d, triples).pass());
}

TEST(Corollary, NegativeExponentRejected) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    const std::vector<CorollaryTriple> triples{{1.0, 0.0, -1.0}};
    EXPECT_THROW(check_corollary(f, d, triples), ParameterError);
}

TEST(Corollary, RandomTriplesNoViolations) {
    const auto f = cubic();
    const auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    const auto triples = random_corollary_triples(200000, 20.0, 6.0, 99);
    const auto report = check_corollary(f, d, triples);
    EXPECT_EQ(report.violations, 0u);
    EXPECT_EQ(report.checked, triples.size());
}

TEST(Corollary, InflatedAlpha1IsCaught) {
    const auto f = cubic();
    auto d = decompose(f, reference_constants(), reference_scan()).decomposition;
    d.alpha1 = 1.5; // above the true monotonicity constant of f = s^3 - s
    const auto triples = random_corollary_triples(10000, 20.0, 6.0, 5);
    EXPECT_GT(check_corollary(f, d, triples).violations, 0u);
}

TEST(FAdd, ReferencePasses) {
    const auto report = certify_f_add(cubic(), LipschitzGrowthConstants{3.0, 1.0}, reference_scan());
    EXPECT_TRUE(report.pass);
}

TEST(FAdd, KappaBelowLeadingFails) {
    const auto report = certify_f_add(cubic(), LipschitzGrowthConstants{2.5, 1.0}, reference_scan());
    EXPECT_FALSE(report.pass);
}

TEST(FAdd, RejectsLinear) {
    const NonlinearitySpec linear{{0.0, 2.0}, std::nullopt};
    EXPECT_THROW(certify_f_add(linear, LipschitzGrowthConstants{3.0, 1.0}, reference_scan()), ParameterError);
}

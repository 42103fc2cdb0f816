#include "rdlab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rdlab;

namespace {

const DomainSpec kLine{1, 1.0, 255};
const double kPi2 = std::numbers::pi * std::numbers::pi;

NonlinearitySpec zero_f() { return NonlinearitySpec{{}, std::nullopt}; }
NonlinearitySpec cubic() { return NonlinearitySpec{{0.0, -1.0, 0.0, 1.0}, std::nullopt}; }

double amplitude_error(const Field& u, double expected) {
    const SpectralField c = transform_forward(u);
    return std::abs(c[0] - expected) / expected;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST(Step, DiagonalUpdateOfEigenmode) {
    const ProblemSpec p(1.0, zero_f(), kLine);
    for (int k : {1, 3, 10}) {
        const Field u = eigenmode(kLine, k);
        const double dt = 1e-3;
        const Field next = step(u, p, dt);
        const double factor = 1.0 / (1.0 + dt * (1.0 + k * k * kPi2));
        const SpectralField c = transform_forward(next);
        EXPECT_NEAR(c[k - 1], factor, 1e-13);
    }
}

TEST(Step, ZeroStaysZero) {
    const ProblemSpec p(1.0, cubic(), kLine);
    SolverConfig cfg{1e-3, 0.5, Scheme::imex_cn_ab2, 10, false};
    const auto tr = solve(Field(kLine), p, cfg);
    for (const auto& s : tr.states)
        EXPECT_EQ(s.max_abs(), 0.0);
}

TEST(Solve, LinearOracleBothSchemes) {
    const ProblemSpec p(1.0, zero_f(), kLine);
    const double expected = std::exp(-(1.0 + kPi2) * 0.1);
    EXPECT_NEAR(expected, 0.3372399985899073, 1e-15);
    SolverConfig euler{1e-5, 0.1, Scheme::imex_euler, 1000, false};
    EXPECT_LE(amplitude_error(solve(eigenmode(kLine, 1), p, euler).final_state(), expected), 1e-4);
    SolverConfig cn{1e-3, 0.1, Scheme::imex_cn_ab2, 10, false};
    EXPECT_LE(amplitude_error(solve(eigenmode(kLine, 1), p, cn).final_state(), expected), 1e-4);
}

TEST(Solve, RecordingIncludesEndpointsAndIncreasingTimes) {
    const ProblemSpec p(1.0, cubic(), kLine);
    SolverConfig cfg{1e-3, 0.0105, Scheme::imex_euler, 4, false};
    const auto tr = solve(eigenmode(kLine, 1), p, cfg);
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_DOUBLE_EQ(tr.times.back(), 0.0105);
    for (std::size_t i = 1; i < tr.times.size(); ++i)
        EXPECT_GT(tr.times[i], tr.times[i - 1]);
}

TEST(Solve, GradedRecordingIsDenseNearZero) {
    SolverConfig cfg{1e-3, 1.0, Scheme::imex_euler, 50, true};
    for (long n = 1; n <= 16; ++n)
        EXPECT_TRUE(cfg.records(n, cfg.steps()));
    EXPECT_FALSE(cfg.records(1001, 100000));
    EXPECT_TRUE(cfg.records(1000, 100000));
}

TEST(Solve, ConfigValidation) {
    const ProblemSpec p(1.0, cubic(), kLine);
    EXPECT_THROW(solve(Field(kLine), p, SolverConfig{-1.0, 1.0}), ParameterError);
    EXPECT_THROW(solve(Field(kLine), p, SolverConfig{2.0, 1.0}), ParameterError);
    EXPECT_THROW(ProblemSpec(0.0, cubic(), kLine), ParameterError);
}

TEST(Solve, OddSymmetryPreserved) {
    // Odd about x = 1/2 means u(x) = -u(1-x), i.e. u_i = -u_{M-1-i}.
    const ProblemSpec p(1.0, cubic(), kLine);
    const Field u0 = 3.0 * eigenmode(kLine, 2) + 0.5 * eigenmode(kLine, 4);
    SolverConfig cfg{1e-4, 0.5, Scheme::imex_cn_ab2, 5000, false};
    const Field u = solve(u0, p, cfg).final_state();
    for (std::size_t i = 0; i < u.size(); ++i)
        EXPECT_NEAR(u[i], -u[u.size() - 1 - i], 1e-12);
}

TEST(Solve, ConvergenceOrders) {
    const ProblemSpec p(1.0, cubic(), DomainSpec{1, 1.0, 63});
    const Field u0 = 2.0 * eigenmode(p.domain(), 1) + eigenmode(p.domain(), 3);
    auto final_at = [&](double dt, Scheme s) {
        return solve(u0, p, SolverConfig{dt, 0.2, s, 1000000, false}).final_state();
    };
    for (auto [scheme, order] : {std::pair{Scheme::imex_euler, 1.0}, std::pair{Scheme::imex_cn_ab2, 2.0}}) {
        const double base = scheme == Scheme::imex_euler ? 1e-3 : 4e-3;
        const Field ref = final_at(base / 16, scheme);
        const double e1 = l2_norm(final_at(base, scheme) - ref);
        const double e2 = l2_norm(final_at(base / 2, scheme) - ref);
        // Richardson: the error against the dt/16 reference is (1 - 16^-q) of the true error.
        const double observed = std::log2(e1 / e2);
        EXPECT_NEAR(observed, order, 0.2) << scheme_name(scheme);
    }
}

TEST(Solve, BlowUpCarriesTime) {
    // Negative leading coefficient drives finite-time blow-up.
    const ProblemSpec p(1.0, NonlinearitySpec{{0.0, 0.0, 0.0, -1.0}, std::nullopt}, kLine);
    const Field u0 = 20.0 * eigenmode(kLine, 1);
    try {
        solve(u0, p, SolverConfig{1e-4, 1.0, Scheme::imex_euler, 100, false});
        FAIL() << "expected blow-up";
    } catch (const BlowUpError& e) {
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LT(e.time(), 1.0);
    }
}

TEST(Pair, ZeroDifferenceStaysExactlyZero) {
    const ProblemSpec p(1.0, cubic(), kLine);
    const auto pair = solve_pair(3.0 * eigenmode(kLine, 1), Field(kLine), p, SolverConfig{1e-3, 0.5});
    for (const auto& s : pair.difference.states)
        EXPECT_EQ(s.max_abs(), 0.0);
}

TEST(Pair, ConsistentWithIndependentSolve) {
    const ProblemSpec p(1.0, cubic(), kLine);
    const Field u2 = 2.0 * eigenmode(kLine, 1) - eigenmode(kLine, 2);
    Field ubar = eigenmode(kLine, 3);
    ubar *= 0.1 / l2_norm(ubar);
    const SolverConfig cfg{1e-3, 1.0, Scheme::imex_cn_ab2, 1000, false};
    const auto pair = solve_pair(u2, ubar, p, cfg);
    const Field u1 = solve(u2 + ubar, p, cfg).final_state();
    const Field recombined = pair.base.final_state() + pair.difference.final_state();
    // Scheme error estimated from a dt/2 run of u1.
    SolverConfig fine = cfg;
    fine.dt /= 2;
    const double scheme_error = l2_norm(solve(u2 + ubar, p, fine).final_state() - u1);
    EXPECT_LE(l2_norm(recombined - u1), 10.0 * scheme_error + 1e-13);
}

TEST(Pair, TinyDifferenceKeepsRelativePrecision) {
    const ProblemSpec p(1.0, cubic(), kLine);
    const Field u2 = 2.0 * eigenmode(kLine, 1);
    const Field dir = eigenmode(kLine, 2);
    const SolverConfig cfg{1e-3, 0.5, Scheme::imex_cn_ab2, 1000, false};
    // Below ~1e-7 the quadratic feed into the slow first mode is negligible and the
    // difference scales linearly with its initial size.
    const Field big = integrate_pair(u2, 1e-8 * dir, p, cfg, nullptr).second;
    const Field tiny = integrate_pair(u2, 1e-12 * dir, p, cfg, nullptr).second;
    EXPECT_NEAR(l2_norm(tiny) * 1e4 / l2_norm(big), 1.0, 1e-5);
}

TEST(Pair, LinearNonlinearityDecouples) {
    const double c = 2.0;
    const ProblemSpec p(1.0, NonlinearitySpec{{0.0, c}, std::nullopt}, kLine);
    const Field ubar = eigenmode(kLine, 2);
    const SolverConfig cfg{1e-3, 0.1, Scheme::imex_euler, 1000, false};
    const Field a = integrate_pair(eigenmode(kLine, 1), ubar, p, cfg, nullptr).second;
    const Field b = integrate_pair(5.0 * eigenmode(kLine, 3), ubar, p, cfg, nullptr).second;
    EXPECT_LE(max_diff(a, b), 1e-15);
    // Diagonal formula: factor (1 + dt (lambda + mu))^{-1} applied to (1 - dt c) each step.
    const double mu = 4.0 * kPi2;
    const double per_step = (1.0 - 1e-3 * c) / (1.0 + 1e-3 * (1.0 + mu));
    EXPECT_NEAR(transform_forward(a)[1], std::pow(per_step, 100), 1e-12);
}

TEST(Equilibrium, StepLeavesEquilibriumInvariant) {
    // Chafee-Infante: f = s^3 - 12 s, lambda = 1 has nontrivial equilibria.
    const ProblemSpec p(1.0, NonlinearitySpec{{0.0, -12.0, 0.0, 1.0}, std::nullopt}, kLine);
    const auto eq = find_equilibrium(eigenmode(kLine, 1), p, 1e-9);
    ASSERT_TRUE(eq.converged);
    EXPECT_GT(eq.state.max_abs(), 0.5);
    const double dt = 1e-3;
    const Field next = step(eq.state, p, dt);
    EXPECT_LE(l2_norm(next - eq.state), 10.0 * dt * dt * l2_norm(eq.state));
}

TEST(Energy, ZeroSolutionHasZeroConstants) {
    const ProblemSpec p(1.0, cubic(), kLine);
    const auto tr = solve(Field(kLine), p, SolverConfig{1e-3, 0.2, Scheme::imex_euler, 5, false});
    const auto r = energy_monitor(tr, p, DissipativityConstants{4.0, 3.0, 1.0, 0.5, 0.5, 2.0});
    EXPECT_EQ(r.c_l2, 0.0);
    EXPECT_EQ(r.c_lp, 0.0);
    EXPECT_TRUE(r.reliable);
}

TEST(Energy, RateRouteMatchesResolvedDifferences) {
    // f = 0, u = 10 sin(pi x): the L2 left-hand side is -(2 pi^2 + 1)||u||^2 + ||u||_4^4 > 0.
    const ProblemSpec p(1.0, zero_f(), kLine);
    const Field u0 = 10.0 * eigenmode(kLine, 1) * (1.0 / eigenmode(kLine, 1).max_abs());
    const auto tr = solve(u0, p, SolverConfig{1e-5, 0.01, Scheme::imex_cn_ab2, 1, false});
    const auto r = energy_monitor(tr, p, DissipativityConstants{4.0, 3.0, 1.0, 0.5, 0.5, 2.0});
    const double expected = -(2.0 * kPi2 + 1.0) * 50.0 + 3.0 * 1e4 / 8.0;
    EXPECT_NEAR(r.c_l2_rate, expected, 1e-2 * expected);
    EXPECT_NEAR(r.c_l2, r.c_l2_rate, 1e-2 * r.c_l2_rate);
    EXPECT_DOUBLE_EQ(r.c_l2_rate_time, 0.0);
}

TEST(Energy, CoarseStrideFlagged) {
    const ProblemSpec p(1.0, cubic(), kLine);
    const auto tr = solve(eigenmode(kLine, 1), p, SolverConfig{1e-3, 0.2, Scheme::imex_euler, 50, false});
    EXPECT_FALSE(energy_monitor(tr, p, DissipativityConstants{4.0, 3.0, 1.0, 0.5, 0.5, 2.0}).reliable);
}

// Chafee-Infante on (0,1): u_t + u - u_xx + u^3 - 12u = 0.
// Certifies the nonlinearity, runs a few random initial states to t = 20 and
// reports which equilibrium each one settles on.

#include "rdlab/estimates.hpp"
#include "rdlab/initial_data.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/solver.hpp"

#include <cstdio>

using namespace rdlab;

int main() {
    const DomainSpec domain{1, 1.0, 127};
    const NonlinearitySpec f{{0.0, -12.0, 0.0, 1.0}, std::nullopt};
    const DissipativityConstants c{4.0, 3.0, 12.0, 0.5, 72.0, 8.0};
    const ProblemSpec problem(1.0, f, domain);

    const auto cert = certify_conditions(f, c, ScanSpec{50.0, 1e-3});
    std::printf("certification %s\n", cert.pass ? "passed" : "failed");
    for (const auto& r : cert.conditions)
        std::printf("  %-4s worst margin %.3e at s = %.3f\n", r.name.c_str(), r.worst_margin, r.argmin);

    const ExponentTable table = exponent_table(4.0, 4);
    std::printf("exponents for p = 4:");
    for (int k = 1; k <= 4; ++k)
        std::printf("  a%d = %g", k, table.a(k));
    std::printf("\n");

    const SolverConfig cfg{1e-3, 20.0, Scheme::imex_cn_ab2, 1000, false};
    for (std::uint64_t i = 0; i < 4; ++i) {
        const Field u0 = ensemble_member(domain, 7, i, 2.0);
        const Trajectory tr = solve(u0, problem, cfg);
        const Field& last = tr.states.back();
        const auto eq = find_equilibrium(last, problem);
        std::printf("run %llu: ||u0|| = %.3f, ||u(20)|| = %.6f, u(20, 1/2) = %+.4f, ", static_cast<unsigned long long>(i),
                    l2_norm(u0), l2_norm(last), last[last.size() / 2]);
        std::printf("distance to equilibrium %.2e (residual %.1e)\n", l2_norm(last - eq.state), eq.residual);
        const auto energy = energy_monitor(tr, problem, c, 1.0);
        std::printf("        energy constants c_l2 = %.3g, c_lp = %.3g\n", energy.c_l2, energy.c_lp);
    }
}

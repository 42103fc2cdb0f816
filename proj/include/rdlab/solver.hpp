#ifndef RDLAB_SOLVER_HPP
#define RDLAB_SOLVER_HPP

// Time integration of u_t + lambda u - Laplace u + f(u) = g with Dirichlet data,
// pairs (u2, ubar) with ubar_t + lambda ubar - Laplace ubar + f(u2 + ubar) - f(u2) = 0,
// and discrete energy monitors.
//
// Linear part implicit and diagonal in the sine basis, nonlinearity explicit.
//   imex_euler:   (1 + dt A) u^{n+1} = u^n + dt N^n
//   imex_cn_ab2:  (1 + dt A/2) u^{n+1} = (1 - dt A/2) u^n + dt (3 N^n - N^{n-1}) / 2
// with A = lambda + mu_k and N = g - f(u). The second-order scheme starts with two
// steps made of IMEX-Euler half steps (Rannacher start), which damps the stiff
// modes of rough initial data that Crank-Nicolson alone would only flip in sign.

#include "rdlab/domain.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rdlab {

struct ProblemSpec {
    double lambda = 1.0;
    NonlinearitySpec f;
    Field g;

    ProblemSpec(double lambda_, NonlinearitySpec f_, Field g_) : lambda(lambda_), f(std::move(f_)), g(std::move(g_)) {
        validate();
    }

    /// Problem with g = 0.
    ProblemSpec(double lambda_, NonlinearitySpec f_, const DomainSpec& domain)
        : ProblemSpec(lambda_, std::move(f_), Field(domain)) {}

    const DomainSpec& domain() const { return g.domain(); }

    void validate() const {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw ParameterError("lambda must be positive");
        if (!g.is_finite())
            throw StateError("forcing g has non-finite values");
        for (double b : f.coefficients)
            if (!std::isfinite(b))
                throw ParameterError("nonlinearity coefficients must be finite");
    }
};

enum class Scheme { imex_euler, imex_cn_ab2 };

inline const char* scheme_name(Scheme s) { return s == Scheme::imex_euler ? "imex_euler" : "imex_cn_ab2"; }

struct SolverConfig {
    double dt = 1e-4;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_cn_ab2;
    int record_stride = 1;
    /// Record every step near t = 0 and widen the gap to record_stride as n grows
    /// (step n is recorded when n % clamp(n/16, 1, stride) == 0).
    bool graded_recording = false;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw ParameterError("dt must be positive");
        if (!(t_end > 0.0) || !std::isfinite(t_end))
            throw ParameterError("T_end must be positive");
        if (dt > t_end * (1.0 + 1e-12))
            throw ParameterError("dt must not exceed T_end");
        if (record_stride < 1)
            throw ParameterError("record_stride must be >= 1");
    }

    long steps() const { return std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9))); }
    double effective_dt() const { return t_end / static_cast<double>(steps()); }

    bool records(long n, long total) const {
        if (n == 0 || n == total)
            return true;
        long gap = record_stride;
        if (graded_recording)
            gap = std::clamp(n / 16, 1L, static_cast<long>(record_stride));
        return n % gap == 0;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> states;
    /// max over steps of dt * max|f'(u)|; above 0.5 the explicit part may be unstable.
    double stiffness_indicator = 0.0;

    bool stability_warning() const { return stiffness_indicator > 0.5; }
    const Field& final_state() const { return states.back(); }
};

struct PairTrajectory {
    Trajectory base;       ///< u2
    Trajectory difference; ///< ubar
    Field initial_difference;

    explicit PairTrajectory(const DomainSpec& d) : initial_difference(d) {}
};

namespace detail {

/// Reusable spectral workspace for one evolving field.
class SpectralStepper {
public:
    SpectralStepper(const DomainSpec& domain, double lambda, double dt, Scheme scheme)
        : domain_(domain), dt_(dt), scheme_(scheme), n_(domain.size()), a_(laplacian_eigenvalues(domain)),
          hat_(n_), nonlinear_hat_(n_), previous_hat_(n_), buffer_(n_) {
        for (double& a : a_)
            a += lambda;
        forward_scale_ = 1.0 / std::pow(domain.points_per_axis + 1.0, domain.dimension);
        inverse_scale_ = std::pow(0.5, domain.dimension);
        euler_full_ = denominators(dt, 1.0);
        euler_half_ = denominators(0.5 * dt, 1.0);
        cn_ = denominators(dt, 0.5);
    }

    void set_state(const double* u) { forward(u, hat_.data()); }

    /// Stores the transform of the physical nonlinear term N at the current level.
    void set_nonlinear(const double* n_phys) { forward(n_phys, nonlinear_hat_.data()); }

    /// Advances the coefficients one step using the stored N.
    void advance() {
        if (scheme_ == Scheme::imex_euler) {
            for (std::size_t i = 0; i < n_; ++i)
                hat_[i] = (hat_[i] + dt_ * nonlinear_hat_[i]) * euler_full_[i];
        } else {
            for (std::size_t i = 0; i < n_; ++i) {
                const double explicit_part = 1.5 * nonlinear_hat_[i] - 0.5 * previous_hat_[i];
                hat_[i] = ((1.0 - 0.5 * dt_ * a_[i]) * hat_[i] + dt_ * explicit_part) * cn_[i];
            }
        }
        previous_hat_ = nonlinear_hat_;
    }

    /// One IMEX-Euler step of length dt/2 with the stored N.
    void advance_half_euler() {
        for (std::size_t i = 0; i < n_; ++i)
            hat_[i] = (hat_[i] + 0.5 * dt_ * nonlinear_hat_[i]) * euler_half_[i];
    }

    /// Records the stored N as the previous level for AB2.
    void remember_nonlinear() { previous_hat_ = nonlinear_hat_; }

    void state(double* u) {
        buffer_ = hat_;
        dst1(domain_, buffer_.data(), u);
        for (std::size_t i = 0; i < n_; ++i)
            u[i] *= inverse_scale_;
    }

    std::span<const double> coefficients() const { return hat_; }

private:
    std::vector<double> denominators(double h, double theta) const {
        std::vector<double> d(n_);
        for (std::size_t i = 0; i < n_; ++i)
            d[i] = 1.0 / (1.0 + theta * h * a_[i]);
        return d;
    }

    void forward(const double* in, double* out) {
        dst1(domain_, in, out);
        for (std::size_t i = 0; i < n_; ++i)
            out[i] *= forward_scale_;
    }

    DomainSpec domain_;
    double dt_;
    Scheme scheme_;
    std::size_t n_;
    std::vector<double> a_;
    std::vector<double> hat_, nonlinear_hat_, previous_hat_, buffer_;
    std::vector<double> euler_full_, euler_half_, cn_;
    double forward_scale_ = 1.0, inverse_scale_ = 1.0;
};

inline constexpr double blow_up_threshold = 1e100;

inline void require_bounded(std::span<const double> u, double t) {
    for (double v : u)
        if (!std::isfinite(v) || std::abs(v) > blow_up_threshold)
            throw BlowUpError(t, "solution left the representable range");
}

/// N = g - f(u) pointwise; returns max |f'(u)| for the stiffness indicator.
inline double nonlinear_term(const NonlinearitySpec& f, std::span<const double> g, std::span<const double> u,
                             std::span<double> out, double t) {
    double fp = 0.0;
    try {
        for (std::size_t i = 0; i < u.size(); ++i) {
            out[i] = g[i] - evaluate(f, u[i]);
            fp = std::max(fp, std::abs(evaluate_derivative(f, u[i])));
        }
    } catch (const EvaluationError&) {
        throw BlowUpError(t, "nonlinearity overflowed");
    }
    return fp;
}

/// N = -(f(u2 + ubar) - f(u2)) pointwise, cancellation-free.
inline void difference_term(const NonlinearitySpec& f, std::span<const double> u2, std::span<const double> ubar,
                            std::span<double> out, double t) {
    try {
        for (std::size_t i = 0; i < u2.size(); ++i)
            out[i] = -exact_difference(f, u2[i], ubar[i]);
    } catch (const EvaluationError&) {
        throw BlowUpError(t, "difference nonlinearity overflowed");
    }
}

} // namespace detail

/// Observer called at every recorded level with (step index, time, state).
using StateObserver = std::function<void(long, double, const Field&)>;
/// Observer for pairs: (step index, time, u2, ubar).
using PairObserver = std::function<void(long, double, const Field&, const Field&)>;

/// Integrates to cfg.t_end, calling `observe` at recorded levels; returns the final state.
/// Writes the stiffness indicator to `stiffness` when given.
inline Field integrate(const Field& u0, const ProblemSpec& p, const SolverConfig& cfg, const StateObserver& observe,
                       double* stiffness = nullptr) {
    cfg.validate();
    u0.require_same_domain(p.g);
    if (!u0.is_finite())
        throw StateError("initial state has non-finite values");
    const long total = cfg.steps();
    const double dt = cfg.effective_dt();
    detail::SpectralStepper stepper(p.domain(), p.lambda, dt, cfg.scheme);
    Field u = u0;
    std::vector<double> nl(u.size());
    double fp_max = 0.0;
    stepper.set_state(u.data());
    if (observe)
        observe(0, 0.0, u);

    auto eval_n = [&](double t) {
        fp_max = std::max(fp_max, detail::nonlinear_term(p.f, p.g.values(), u.values(), nl, t));
        stepper.set_nonlinear(nl.data());
    };

    long n = 0;
    if (cfg.scheme == Scheme::imex_cn_ab2) {
        // Rannacher start: the first two steps as four IMEX-Euler half steps.
        const long start = std::min(total, 2L);
        for (; n < start; ++n) {
            for (int half = 0; half < 2; ++half) {
                const double t = (n + 0.5 * half) * dt;
                eval_n(t);
                if (half == 0)
                    stepper.remember_nonlinear();
                stepper.advance_half_euler();
                stepper.state(u.data());
                detail::require_bounded(u.values(), t + 0.5 * dt);
            }
            if (observe && cfg.records(n + 1, total))
                observe(n + 1, (n + 1) * dt, u);
        }
    }
    for (; n < total; ++n) {
        eval_n(n * dt);
        stepper.advance();
        stepper.state(u.data());
        const double t = (n + 1) * dt;
        detail::require_bounded(u.values(), t);
        if (observe && cfg.records(n + 1, total))
            observe(n + 1, n + 1 == total ? cfg.t_end : t, u);
    }
    if (stiffness)
        *stiffness = fp_max * dt;
    return u;
}

/// One step of length dt from u (IMEX Euler, or the Rannacher start for the second-order scheme).
inline Field step(const Field& u, const ProblemSpec& p, double dt, Scheme scheme = Scheme::imex_euler) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = dt;
    cfg.scheme = scheme;
    return integrate(u, p, cfg, nullptr);
}

inline Trajectory solve(const Field& u0, const ProblemSpec& p, const SolverConfig& cfg) {
    Trajectory tr;
    integrate(
        u0, p, cfg,
        [&](long, double t, const Field& u) {
            tr.times.push_back(t);
            tr.states.push_back(u);
        },
        &tr.stiffness_indicator);
    return tr;
}

/// Co-evolves u2 and the difference ubar = u1 - u2; returns (final u2, final ubar).
inline std::pair<Field, Field> integrate_pair(const Field& u20, const Field& ubar0, const ProblemSpec& p,
                                              const SolverConfig& cfg, const PairObserver& observe) {
    cfg.validate();
    u20.require_same_domain(p.g);
    ubar0.require_same_domain(p.g);
    if (!u20.is_finite() || !ubar0.is_finite())
        throw StateError("initial pair has non-finite values");
    const long total = cfg.steps();
    const double dt = cfg.effective_dt();
    const DomainSpec& d = p.domain();
    detail::SpectralStepper base(d, p.lambda, dt, cfg.scheme);
    detail::SpectralStepper diff(d, p.lambda, dt, cfg.scheme);
    Field u2 = u20;
    Field ub = ubar0;
    std::vector<double> nl(u2.size()), nd(u2.size());
    base.set_state(u2.data());
    diff.set_state(ub.data());
    if (observe)
        observe(0, 0.0, u2, ub);

    auto eval_n = [&](double t) {
        detail::nonlinear_term(p.f, p.g.values(), u2.values(), nl, t);
        detail::difference_term(p.f, u2.values(), ub.values(), nd, t);
        base.set_nonlinear(nl.data());
        diff.set_nonlinear(nd.data());
    };
    auto refresh = [&](double t) {
        base.state(u2.data());
        diff.state(ub.data());
        detail::require_bounded(u2.values(), t);
        detail::require_bounded(ub.values(), t);
    };

    long n = 0;
    if (cfg.scheme == Scheme::imex_cn_ab2) {
        const long start = std::min(total, 2L);
        for (; n < start; ++n) {
            for (int half = 0; half < 2; ++half) {
                const double t = (n + 0.5 * half) * dt;
                eval_n(t);
                if (half == 0) {
                    base.remember_nonlinear();
                    diff.remember_nonlinear();
                }
                base.advance_half_euler();
                diff.advance_half_euler();
                refresh(t + 0.5 * dt);
            }
            if (observe && cfg.records(n + 1, total))
                observe(n + 1, (n + 1) * dt, u2, ub);
        }
    }
    for (; n < total; ++n) {
        eval_n(n * dt);
        base.advance();
        diff.advance();
        const double t = (n + 1) * dt;
        refresh(t);
        if (observe && cfg.records(n + 1, total))
            observe(n + 1, n + 1 == total ? cfg.t_end : t, u2, ub);
    }
    return {std::move(u2), std::move(ub)};
}

inline PairTrajectory solve_pair(const Field& u20, const Field& ubar0, const ProblemSpec& p, const SolverConfig& cfg) {
    PairTrajectory out(p.domain());
    out.initial_difference = ubar0;
    integrate_pair(u20, ubar0, p, cfg, [&](long, double t, const Field& u2, const Field& ub) {
        out.base.times.push_back(t);
        out.base.states.push_back(u2);
        out.difference.times.push_back(t);
        out.difference.states.push_back(ub);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Energy monitors

struct EnergyReport {
    /// Smallest c with d/dt||u||^2 + lambda||u||^2 + ||u||_p^p <= c||g||^2 + c on every interval.
    double c_l2 = 0.0;
    /// Same for d/dt||u||_p^p + lambda||u||_p^p + alpha||u||_{2p-2}^{2p-2} <= c||g||^2 + c.
    double c_lp = 0.0;
    double c_l2_time = 0.0;
    double c_lp_time = 0.0;
    std::size_t intervals = 0;
    double max_interval = 0.0;
    bool reliable = true;
    /// Same constants with d/dt taken from the semi-discrete right-hand side at each recorded state.
    double c_l2_rate = 0.0;
    double c_lp_rate = 0.0;
    double c_l2_rate_time = 0.0;
    double c_lp_rate_time = 0.0;
};

namespace detail {

/// u_t = Laplace u - lambda u - f(u) + g on the grid, Laplacian applied spectrally.
inline Field semidiscrete_rate(const Field& u, const ProblemSpec& p) {
    const auto mu = laplacian_eigenvalues(p.domain());
    SpectralField uh = transform_forward(u);
    for (std::size_t i = 0; i < uh.size(); ++i)
        uh[i] *= -mu[i];
    Field rate = transform_inverse(uh);
    for (std::size_t i = 0; i < u.size(); ++i)
        rate[i] += p.g[i] - p.lambda * u[i] - evaluate(p.f, u[i]);
    return rate;
}

} // namespace detail

/// Forward differences of the energies over recorded intervals; the remaining terms
/// are trapezoid averages over the interval. The *_rate constants evaluate both
/// inequalities pointwise in time instead.
inline EnergyReport energy_monitor(const Trajectory& tr, const ProblemSpec& p, const DissipativityConstants& c,
                                   double max_interval = 0.01) {
    if (tr.states.size() != tr.times.size() || tr.states.empty())
        throw StateError("trajectory is empty or misaligned");
    const double pe = c.p;
    const double g2 = std::pow(l2_norm(p.g), 2);
    const double scale = g2 + 1.0;
    EnergyReport r;
    std::vector<double> e2(tr.states.size()), ep(tr.states.size()), e2p(tr.states.size());
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        e2[i] = lebesgue_power(tr.states[i], 2.0);
        ep[i] = lebesgue_power(tr.states[i], pe);
        e2p[i] = lebesgue_power(tr.states[i], 2.0 * pe - 2.0);
    }
    for (std::size_t i = 0; i + 1 < tr.states.size(); ++i) {
        const double h = tr.times[i + 1] - tr.times[i];
        if (!(h > 0.0))
            throw StateError("trajectory times must be strictly increasing");
        r.max_interval = std::max(r.max_interval, h);
        const double lhs2 = (e2[i + 1] - e2[i]) / h + p.lambda * 0.5 * (e2[i] + e2[i + 1]) + 0.5 * (ep[i] + ep[i + 1]);
        const double lhsp = (ep[i + 1] - ep[i]) / h + p.lambda * 0.5 * (ep[i] + ep[i + 1]) +
                            c.alpha * 0.5 * (e2p[i] + e2p[i + 1]);
        const double c2 = std::max(lhs2, 0.0) / scale;
        const double cp = std::max(lhsp, 0.0) / scale;
        if (c2 > r.c_l2) {
            r.c_l2 = c2;
            r.c_l2_time = tr.times[i];
        }
        if (cp > r.c_lp) {
            r.c_lp = cp;
            r.c_lp_time = tr.times[i];
        }
        ++r.intervals;
    }
    r.reliable = r.max_interval <= max_interval * (1.0 + 1e-9);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        const Field& u = tr.states[i];
        const Field ut = detail::semidiscrete_rate(u, p);
        double dp = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            dp += std::pow(std::abs(u[j]), pe - 2.0) * u[j] * ut[j];
        dp *= pe * u.domain().cell_volume();
        const double lhs2 = 2.0 * inner_product(u, ut) + p.lambda * e2[i] + ep[i];
        const double lhsp = dp + p.lambda * ep[i] + c.alpha * e2p[i];
        if (std::max(lhs2, 0.0) / scale > r.c_l2_rate) {
            r.c_l2_rate = std::max(lhs2, 0.0) / scale;
            r.c_l2_rate_time = tr.times[i];
        }
        if (std::max(lhsp, 0.0) / scale > r.c_lp_rate) {
            r.c_lp_rate = std::max(lhsp, 0.0) / scale;
            r.c_lp_rate_time = tr.times[i];
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Equilibria

struct EquilibriumResult {
    Field state;
    double residual = 0.0; ///< ||-Laplace u + lambda u + f(u) - g||_2
    int iterations = 0;
    bool converged = false;
};

/// Residual of the stationary equation, evaluated spectrally.
inline double stationary_residual(const Field& u, const ProblemSpec& p) {
    const auto mu = laplacian_eigenvalues(p.domain());
    Field fu(p.domain());
    for (std::size_t i = 0; i < u.size(); ++i)
        fu[i] = evaluate(p.f, u[i]) - p.g[i];
    const SpectralField uh = transform_forward(u);
    SpectralField rh = transform_forward(fu);
    for (std::size_t i = 0; i < rh.size(); ++i)
        rh[i] += (p.lambda + mu[i]) * uh[i];
    return spectral_l2_norm(rh);
}

/// Damped fixed-point iteration u <- (1/tau + lambda - Laplace)^{-1}(u/tau + g - f(u)),
/// i.e. IMEX-Euler pseudo-time stepping; converges to stable equilibria.
inline EquilibriumResult find_equilibrium(const Field& guess, const ProblemSpec& p, double tolerance = 1e-10,
                                          int max_iterations = 200000, double tau = 0.05) {
    EquilibriumResult out{guess, 0.0, 0, false};
    detail::SpectralStepper stepper(p.domain(), p.lambda, tau, Scheme::imex_euler);
    std::vector<double> nl(guess.size());
    stepper.set_state(out.state.data());
    for (int it = 0; it < max_iterations; ++it) {
        if (it % 50 == 0) {
            out.residual = stationary_residual(out.state, p);
            out.iterations = it;
            if (out.residual <= tolerance) {
                out.converged = true;
                return out;
            }
        }
        detail::nonlinear_term(p.f, p.g.values(), out.state.values(), nl, it * tau);
        stepper.set_nonlinear(nl.data());
        stepper.advance();
        stepper.state(out.state.data());
        detail::require_bounded(out.state.values(), it * tau);
    }
    out.residual = stationary_residual(out.state, p);
    out.iterations = max_iterations;
    out.converged = out.residual <= tolerance;
    return out;
}

} // namespace rdlab

#endif

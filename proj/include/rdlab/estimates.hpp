#ifndef RDLAB_ESTIMATES_HPP
#define RDLAB_ESTIMATES_HPP

// Exponent recursions and empirical checks of the L^p, (L^2, L^gamma) and
// (L^2, H^1_0) smoothing bounds along computed trajectories.
//
//   a_1 = b_1 = 1,  a_{k+1} = a_k + (p-2)/p,  b_{k+1} = a_k b_k / a_{k+1} + 2 / (p a_{k+1})
//   (A_k)  t ||t^{b_k} ubar(t)||_{pa_k}^{pa_k}                 <= C ||ubar_0||^2
//   (B_k)  int_0^T ||s^{b_{k+1}} ubar(s)||_{pa_{k+1}}^{pa_{k+1}} ds <= C ||ubar_0||^2
//   L^p:   ||u(t)||_{pa_k}^{pa_k} <= C (e^{-lambda t} ||u_0||^2 + G_k + 1), t > eps,
//          G_k = ||g||_q^q with q = pa_{k+1} / (p-1)

#include "rdlab/domain.hpp"
#include "rdlab/ensemble.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/initial_data.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/solver.hpp"
#include "rdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace rdlab {

// ---------------------------------------------------------------------------
// Exponent tables

struct ExponentEntry {
    int k = 1;
    long double a = 1.0L;
    long double b = 1.0L;
    long double pa = 0.0L;
    long double pab = 0.0L;
};

class ExponentTable {
public:
    ExponentTable(double p, int K) : p_(p) {
        if (!(p > 2.0) || !std::isfinite(p))
            throw ParameterError("exponent table needs p > 2");
        if (K < 1)
            throw ParameterError("exponent table needs K >= 1");
        const long double pl = p;
        long double a = 1.0L, b = 1.0L;
        for (int k = 1; k <= K; ++k) {
            entries_.push_back(ExponentEntry{k, a, b, pl * a, pl * a * b});
            const long double a_next = a + (pl - 2.0L) / pl;
            b = a * b / a_next + 2.0L / (pl * a_next);
            a = a_next;
        }
    }

    double p() const { return p_; }
    int size() const { return static_cast<int>(entries_.size()); }
    const ExponentEntry& operator[](int k) const { return entries_.at(k - 1); }
    const std::vector<ExponentEntry>& entries() const { return entries_; }

    double a(int k) const { return static_cast<double>((*this)[k].a); }
    double b(int k) const { return static_cast<double>((*this)[k].b); }
    double pa(int k) const { return static_cast<double>((*this)[k].pa); }

    /// Closed forms a_2 = (2p-2)/p, b_2 = (p+2)/(2p-2), r = (p+3)/(2p-2).
    double a2() const { return (2.0 * p_ - 2.0) / p_; }
    double b2() const { return (p_ + 2.0) / (2.0 * p_ - 2.0); }
    double r() const { return (p_ + 3.0) / (2.0 * p_ - 2.0); }

    /// max_k |p a_k b_k - (p + 2(k-1))|.
    double identity_residual() const {
        long double worst = 0.0L;
        for (const auto& e : entries_)
            worst = std::max(worst, std::abs(e.pab - (static_cast<long double>(p_) + 2.0L * (e.k - 1))));
        return static_cast<double>(worst);
    }

private:
    double p_;
    std::vector<ExponentEntry> entries_;
};

inline ExponentTable exponent_table(double p, int K) { return ExponentTable(p, K); }

/// |(1 + pa_2 b_2) * 2 / (pa_2) - 2r| with a_2, b_2 from the recursion: the exponent of s in
/// (s ||s^{b_2} ubar||_{pa_2}^{pa_2})^{2/(pa_2)} = s^{2r} ||ubar||_{2p-2}^2.
inline double bridge_identity_residual(double p) {
    const ExponentTable t(p, 2);
    const long double pa2 = t[2].pa, pab2 = t[2].pab;
    const long double r = (static_cast<long double>(p) + 3.0L) / (2.0L * p - 2.0L);
    const long double lhs = (1.0L + pab2) * 2.0L / pa2;
    const long double pa2_err = std::abs(pa2 - (2.0L * p - 2.0L));
    return static_cast<double>(std::max(std::abs(lhs - 2.0L * r), pa2_err));
}

// ---------------------------------------------------------------------------
// Gronwall bound ||ubar(t)||^2 <= e^{mu t} ||ubar_0||^2, mu = max{2(l2 - lambda), 1}

inline double gronwall_rate(double l2, double lambda) { return std::max(2.0 * (l2 - lambda), 1.0); }

struct GronwallReport {
    double mu = 0.0;
    double worst_ratio = 0.0; ///< max_t ||ubar(t)||^2 / (e^{mu t} ||ubar_0||^2)
    double worst_time = 0.0;
    std::size_t checked = 0;
    bool pass = false;
};

inline GronwallReport gronwall_check(const Trajectory& difference, double l2, double lambda, double tolerance = 1e-6) {
    if (difference.states.empty())
        throw StateError("empty difference trajectory");
    GronwallReport r;
    r.mu = gronwall_rate(l2, lambda);
    const double n0 = lebesgue_power(difference.states.front(), 2.0);
    if (!(n0 > 0.0))
        throw PreconditionError("Gronwall check needs a nonzero initial difference");
    for (std::size_t i = 0; i < difference.states.size(); ++i) {
        const double t = difference.times[i];
        const double ratio = lebesgue_power(difference.states[i], 2.0) / (std::exp(r.mu * t) * n0);
        if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.worst_time = t;
        }
        ++r.checked;
    }
    r.pass = r.worst_ratio <= 1.0 + tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// (A_k) / (B_k)

struct AkBkEntry {
    int k = 1;
    double a_quotient = 0.0; ///< sup_t t^{1 + b_k pa_k} ||ubar||_{pa_k}^{pa_k} / ||ubar_0||^2
    double a_argmax = 0.0;
    double b_quotient = 0.0; ///< trapezoid int_0^T s^{b_{k+1} pa_{k+1}} ||ubar||_{pa_{k+1}}^{pa_{k+1}} ds / ||ubar_0||^2
};

struct AkBkReport {
    double norm_u0 = 0.0;
    double horizon = 0.0;
    std::vector<AkBkEntry> entries;
    bool finite = true;
};

/// Quotients of (A_k), (B_k) for k = 1..table.size()-1 on recorded times t <= T.
inline AkBkReport verify_Ak_Bk(const PairTrajectory& pair, const ExponentTable& table, double T) {
    const auto& tr = pair.difference;
    if (tr.states.empty())
        throw StateError("empty pair trajectory");
    if (table.size() < 2)
        throw ParameterError("(B_k) needs the exponent table to reach k+1");
    AkBkReport rep;
    rep.norm_u0 = l2_norm(pair.initial_difference);
    if (!(rep.norm_u0 > 0.0))
        throw PreconditionError("(A_k)/(B_k) quotients are undefined for ubar_0 = 0");
    rep.horizon = T;
    const double n0 = rep.norm_u0 * rep.norm_u0;
    const int kmax = table.size() - 1;
    for (int k = 1; k <= kmax; ++k) {
        AkBkEntry e;
        e.k = k;
        const double pa = table.pa(k), wa = 1.0 + table.b(k) * pa;
        const double pb = table.pa(k + 1), wb = table.b(k + 1) * pb;
        double prev_t = 0.0, prev_v = 0.0;
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            const double t = tr.times[i];
            if (t > T * (1.0 + 1e-12))
                break;
            if (t > 0.0) {
                const double qa = std::pow(t, wa) * lebesgue_power(tr.states[i], pa) / n0;
                if (qa > e.a_quotient) {
                    e.a_quotient = qa;
                    e.a_argmax = t;
                }
            }
            const double v = t > 0.0 ? std::pow(t, wb) * lebesgue_power(tr.states[i], pb) : 0.0;
            if (i > 0)
                e.b_quotient += 0.5 * (v + prev_v) * (t - prev_t);
            prev_t = t;
            prev_v = v;
        }
        e.b_quotient /= n0;
        rep.finite = rep.finite && std::isfinite(e.a_quotient) && std::isfinite(e.b_quotient);
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// L^p bounds for t > eps independent of ||u_0||_p

/// Initial datum for the L^p bound: a grid field at t = 0 or an analytic profile
/// already carried through its initial layer.
struct LpFamilyMember {
    std::string label;
    Field start;
    double start_time = 0.0;
    double norm_l2_u0 = 0.0;
    double norm_p_u0 = 0.0;
    double layer_reaction = 0.0;

    static LpFamilyMember from_field(std::string label, Field u0, double p) {
        const double l2 = l2_norm(u0), lp = lebesgue_norm(u0, p);
        return LpFamilyMember{std::move(label), std::move(u0), 0.0, l2, lp, 0.0};
    }

    static LpFamilyMember from_profile(std::string label, const AnalyticProfile& u0, const ProblemSpec& prob,
                                       double p) {
        const double t0 = initial_layer_time(prob.domain(), prob.lambda);
        InitialLayer layer = initial_layer(u0, prob.domain(), prob.lambda, prob.g, prob.f, t0);
        return LpFamilyMember{std::move(label), std::move(layer.state), t0, u0.lebesgue_norm(2.0),
                              u0.lebesgue_norm(p), layer.reaction_estimate};
    }
};

struct LpMemberResult {
    std::string label;
    double norm_l2_u0 = 0.0;
    double norm_p_u0 = 0.0;
    double layer_reaction = 0.0;
    double norm_p_at_eps = 0.0;           ///< ||u(eps)||_p
    std::vector<double> sup_quotient;     ///< per k, sup over t in (eps, T]
    std::vector<double> sup_quotient_time;
    std::vector<std::vector<double>> window_sup; ///< [window][k] for the extra eps windows
};

struct LpBoundReport {
    double eps = 0.1;
    double horizon = 2.0;
    int k_max = 1;
    std::vector<double> g_terms;              ///< G_k
    std::vector<double> windows;              ///< extra eps values
    std::vector<LpMemberResult> members;
    std::vector<double> sup_quotient;         ///< per k, max over members
    std::vector<std::vector<double>> window_sup; ///< [window][k], max over members
    double norm_p_at_eps_spread = 1.0;        ///< max/min over members of ||u(eps)||_p
    std::vector<double> quotient_spread;      ///< per k, max/min over members of the sup quotient
    bool finite = true;
};

struct LpBoundOptions {
    double eps = 0.1;
    double horizon = 2.0;
    int k_max = 2;
    double dt = 1e-4;
    Scheme scheme = Scheme::imex_cn_ab2;
    int record_stride = 10;
    std::vector<double> windows; ///< additional eps values for the monotonicity report
    unsigned threads = 1;
};

inline LpBoundReport verify_lemma23(const ProblemSpec& prob, const DissipativityConstants& c,
                                    const std::vector<LpFamilyMember>& family, const LpBoundOptions& opt) {
    if (!(opt.eps > 0.0 && opt.eps < 1.0))
        throw ParameterError("eps must lie in (0, 1)");
    if (opt.k_max < 1)
        throw ParameterError("k_max must be >= 1");
    if (family.empty())
        throw ParameterError("empty initial-data family");
    for (double w : opt.windows)
        if (!(w > 0.0 && w < opt.horizon))
            throw ParameterError("eps windows must lie in (0, T)");
    const ExponentTable table(c.p, opt.k_max + 1);
    LpBoundReport rep;
    rep.eps = opt.eps;
    rep.horizon = opt.horizon;
    rep.k_max = opt.k_max;
    rep.windows = opt.windows;
    for (int k = 1; k <= opt.k_max; ++k) {
        const double q = table.pa(k + 1) / (c.p - 1.0);
        rep.g_terms.push_back(prob.g.max_abs() > 0.0 ? lebesgue_power(prob.g, q) : 0.0);
    }

    auto run_member = [&](std::size_t idx) {
        const auto& m = family[idx];
        LpMemberResult res;
        res.label = m.label;
        res.norm_l2_u0 = m.norm_l2_u0;
        res.norm_p_u0 = m.norm_p_u0;
        res.layer_reaction = m.layer_reaction;
        res.sup_quotient.assign(opt.k_max, 0.0);
        res.sup_quotient_time.assign(opt.k_max, 0.0);
        res.window_sup.assign(opt.windows.size(), std::vector<double>(opt.k_max, 0.0));
        const double n0 = m.norm_l2_u0 * m.norm_l2_u0;

        auto visit = [&](double t, const Field& u) {
            for (int k = 1; k <= opt.k_max; ++k) {
                const double denom = std::exp(-prob.lambda * t) * n0 + rep.g_terms[k - 1] + 1.0;
                const double q = lebesgue_power(u, table.pa(k)) / denom;
                if (t > opt.eps * (1.0 + 1e-12) && q > res.sup_quotient[k - 1]) {
                    res.sup_quotient[k - 1] = q;
                    res.sup_quotient_time[k - 1] = t;
                }
                for (std::size_t w = 0; w < opt.windows.size(); ++w)
                    if (t > opt.windows[w] * (1.0 + 1e-12))
                        res.window_sup[w][k - 1] = std::max(res.window_sup[w][k - 1], q);
            }
        };

        if (!(m.start_time < opt.eps))
            throw ParameterError("family member starts after eps");
        SolverConfig first{std::min(opt.dt, opt.eps - m.start_time), opt.eps - m.start_time, opt.scheme,
                           opt.record_stride, false};
        const Field at_eps = integrate(m.start, prob, first, [&](long, double s, const Field& u) {
            visit(m.start_time + s, u);
        });
        res.norm_p_at_eps = lebesgue_norm(at_eps, c.p);
        SolverConfig second{opt.dt, opt.horizon - opt.eps, opt.scheme, opt.record_stride, false};
        integrate(at_eps, prob, second, [&](long n, double s, const Field& u) {
            if (n > 0)
                visit(opt.eps + s, u);
        });
        return res;
    };
    rep.members = parallel_map(family.size(), opt.threads, run_member);

    rep.sup_quotient.assign(opt.k_max, 0.0);
    rep.quotient_spread.assign(opt.k_max, 1.0);
    rep.window_sup.assign(opt.windows.size(), std::vector<double>(opt.k_max, 0.0));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < opt.k_max; ++k) {
        double qlo = std::numeric_limits<double>::infinity(), qhi = 0.0;
        for (const auto& m : rep.members) {
            qlo = std::min(qlo, m.sup_quotient[k]);
            qhi = std::max(qhi, m.sup_quotient[k]);
            for (std::size_t w = 0; w < opt.windows.size(); ++w)
                rep.window_sup[w][k] = std::max(rep.window_sup[w][k], m.window_sup[w][k]);
        }
        rep.sup_quotient[k] = qhi;
        rep.quotient_spread[k] = qlo > 0.0 ? qhi / qlo : std::numeric_limits<double>::infinity();
        rep.finite = rep.finite && std::isfinite(qhi);
    }
    for (const auto& m : rep.members) {
        lo = std::min(lo, m.norm_p_at_eps);
        hi = std::max(hi, m.norm_p_at_eps);
    }
    rep.norm_p_at_eps_spread = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// (L^2, L^gamma) and (L^2, H^1_0) smoothing

struct PairInitialData {
    Field base;       ///< u2(0)
    Field difference; ///< ubar_0
};

/// n pairs: base point from the three families with ||u2(0)|| <= radius, difference along a
/// random direction with ||ubar_0|| log-spaced in [min_norm, max_norm].
inline std::vector<PairInitialData> make_pair_ensemble(const DomainSpec& d, std::size_t n, std::uint64_t seed,
                                                       double radius, double min_norm, double max_norm) {
    std::vector<PairInitialData> out;
    out.reserve(n);
    const auto sizes = logspace(min_norm, max_norm, static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::for_member(seed, i);
        const double r = radius * rng.uniform(0.25, 1.0);
        Field base = sample_family(static_cast<InitialFamily>(i % 3), d, rng, r);
        Field dir = sample_family(static_cast<InitialFamily>((i + 1) % 3), d, rng, 1.0);
        out.push_back(PairInitialData{std::move(base), normalized_to(std::move(dir), sizes[i])});
    }
    return out;
}

struct SmoothingSample {
    double norm_u0 = 0.0;             ///< ||ubar_0||_2
    std::vector<double> gamma_power;  ///< ||ubar(t)||_gamma^gamma per requested gamma
    double gradient = 0.0;            ///< ||grad ubar(t)||
};

/// Runs every pair to cfg.t_end and collects ||ubar(T)||_gamma^gamma and ||grad ubar(T)||.
inline std::vector<SmoothingSample> run_smoothing_ensemble(const std::vector<PairInitialData>& ensemble,
                                                           const ProblemSpec& prob, const SolverConfig& cfg,
                                                           const std::vector<double>& gammas, unsigned threads = 1) {
    for (double g : gammas)
        if (!(g >= 2.0))
            throw ParameterError("smoothing exponents must be >= 2");
    return parallel_map(ensemble.size(), threads, [&](std::size_t i) {
        const auto& e = ensemble[i];
        SmoothingSample s;
        s.norm_u0 = l2_norm(e.difference);
        const Field ub = integrate_pair(e.base, e.difference, prob, cfg, nullptr).second;
        for (double g : gammas)
            s.gamma_power.push_back(lebesgue_power(ub, g));
        s.gradient = h1_seminorm(ub);
        return s;
    });
}

struct SmoothingReport {
    double gamma = 2.0;
    std::size_t samples = 0;
    std::vector<double> norm_u0;     ///< ||ubar_0||_2
    std::vector<double> result;      ///< ||ubar(1)||_gamma^gamma
    double c_gamma = 0.0;            ///< max ratio result / ||ubar_0||^2
    std::size_t witness = 0;         ///< index attaining c_gamma
    LinearFit fit;                   ///< log result vs log ||ubar_0||^2
    bool finite = true;
};

/// Reduces the samples for exponent index `gi` (gammas[gi] == gamma).
inline SmoothingReport smoothing_constant(double gamma, std::size_t gi, const std::vector<SmoothingSample>& samples) {
    if (!(gamma >= 2.0))
        throw ParameterError("smoothing exponent must be >= 2");
    SmoothingReport r;
    r.gamma = gamma;
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        if (!(s.norm_u0 > 0.0))
            continue; // ubar_0 = 0 carries no information
        const double x2 = s.norm_u0 * s.norm_u0;
        const double y = s.gamma_power.at(gi);
        r.norm_u0.push_back(s.norm_u0);
        r.result.push_back(y);
        const double ratio = y / x2;
        if (ratio > r.c_gamma) {
            r.c_gamma = ratio;
            r.witness = r.norm_u0.size() - 1;
        }
        if (y > 0.0) {
            lx.push_back(std::log(x2));
            ly.push_back(std::log(y));
        }
    }
    r.samples = r.norm_u0.size();
    r.finite = std::isfinite(r.c_gamma);
    if (lx.size() >= 2)
        r.fit = linear_fit(lx, ly);
    return r;
}

inline std::vector<SmoothingReport> smoothing_constants(const std::vector<double>& gammas,
                                                        const std::vector<PairInitialData>& ensemble,
                                                        const ProblemSpec& prob, const SolverConfig& cfg,
                                                        unsigned threads = 1) {
    const auto samples = run_smoothing_ensemble(ensemble, prob, cfg, gammas, threads);
    std::vector<SmoothingReport> out;
    for (std::size_t i = 0; i < gammas.size(); ++i)
        out.push_back(smoothing_constant(gammas[i], i, samples));
    return out;
}

struct H1SmoothingReport {
    double p = 4.0;
    std::vector<double> norm_u0;  ///< ||ubar_0||
    std::vector<double> gradient; ///< ||grad ubar(1)||
    double c_r = 0.0;             ///< coefficient of ||ubar_0||^{2/(p-1)}
    double c = 0.0;               ///< coefficient of ||ubar_0||^2
    double max_ratio = 0.0;       ///< max ||grad ubar||^2 / bound; <= 1 means domination
    double mean_ratio = 0.0;      ///< tightness of the fit
    bool dominates = false;
    LinearFit small_norm_fit;     ///< log ||grad ubar(1)|| vs log ||ubar_0|| for ||ubar_0|| <= small_norm_cutoff
    double slope_threshold = 0.0; ///< 1/(p-1) - 0.05
    double remark_constant = 0.0; ///< c with ||grad ubar(1)|| <= c ||ubar_0||^{1/(p-1)} for ||ubar_0|| <= 1
    bool remark_holds = false;
};

/// Fits ||grad ubar(1)||^2 <= C_R ||ubar_0||^{2/(p-1)} + C ||ubar_0||^2.
/// For each direction theta of (C_R, C) the scale is the smallest dominating one; the
/// direction maximizing the mean sample/bound ratio is found by a grid scan refined
/// with golden-section search.
inline H1SmoothingReport h1_smoothing_fit(const std::vector<SmoothingSample>& samples, double p,
                                          const CertificationReport& f_add, double small_norm_cutoff = 1e-2) {
    if (!f_add.pass)
        throw PreconditionError("(L^2, H^1_0) smoothing requires a certified growth bound on f'");
    if (!(p > 2.0))
        throw ParameterError("p must exceed 2");
    H1SmoothingReport r;
    r.p = p;
    r.slope_threshold = 1.0 / (p - 1.0) - 0.05;
    std::vector<double> a, b, y2;
    for (const auto& s : samples) {
        if (!(s.norm_u0 > 0.0))
            continue;
        r.norm_u0.push_back(s.norm_u0);
        r.gradient.push_back(s.gradient);
        a.push_back(std::pow(s.norm_u0, 2.0 / (p - 1.0)));
        b.push_back(s.norm_u0 * s.norm_u0);
        y2.push_back(s.gradient * s.gradient);
    }
    if (a.empty())
        throw ParameterError("no nonzero samples to fit");

    auto scale_for = [&](double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s = std::max(s, y2[i] / (std::cos(theta) * a[i] + std::sin(theta) * b[i]));
        return s;
    };
    auto tightness = [&](double theta) {
        const double s = scale_for(theta);
        if (!(s > 0.0))
            return 1.0;
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            m += y2[i] / (s * (std::cos(theta) * a[i] + std::sin(theta) * b[i]));
        return m / a.size();
    };
    const double lo = 1e-9, hi = 0.5 * std::numbers::pi - 1e-9;
    const int grid = 256;
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double th = lo + (hi - lo) * i / grid;
        const double v = tightness(th);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double x0 = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double x3 = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = x3 - phi * (x3 - x0), x2 = x0 + phi * (x3 - x0);
    double f1 = tightness(x1), f2 = tightness(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 > f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - phi * (x3 - x0);
            f1 = tightness(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + phi * (x3 - x0);
            f2 = tightness(x2);
        }
    }
    double theta = 0.5 * (x0 + x3);
    if (tightness(theta) < best_val)
        theta = lo + (hi - lo) * best / grid;
    // Inflate by one ulp-scale factor so rounding in the ratio cannot exceed 1.
    const double s = scale_for(theta) * (1.0 + 1e-12);
    r.c_r = s * std::cos(theta);
    r.c = s * std::sin(theta);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ratio = y2[i] / (r.c_r * a[i] + r.c * b[i]);
        r.max_ratio = std::max(r.max_ratio, ratio);
        sum += ratio;
    }
    r.mean_ratio = sum / a.size();
    r.dominates = r.max_ratio <= 1.0;

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < r.norm_u0.size(); ++i)
        if (r.norm_u0[i] <= small_norm_cutoff && r.gradient[i] > 0.0) {
            lx.push_back(std::log(r.norm_u0[i]));
            ly.push_back(std::log(r.gradient[i]));
        }
    if (lx.size() >= 2)
        r.small_norm_fit = linear_fit(lx, ly);

    // For x <= 1, x^2 <= x^{2/(p-1)}, so ||grad ubar||^2 <= (C_R + C) x^{2/(p-1)}.
    r.remark_constant = std::sqrt(r.c_r + r.c);
    r.remark_holds = true;
    const double e = 1.0 / (p - 1.0);
    for (std::size_t i = 0; i < r.norm_u0.size(); ++i)
        if (r.norm_u0[i] <= 1.0 && r.gradient[i] > 0.0)
            r.remark_holds = r.remark_holds &&
                             std::log(r.gradient[i]) <= e * std::log(r.norm_u0[i]) + std::log(r.remark_constant) + 1e-12;
    return r;
}

} // namespace rdlab

#endif

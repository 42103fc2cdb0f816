#ifndef RDLAB_EXPERIMENTS_HPP
#define RDLAB_EXPERIMENTS_HPP

// Verification suites behind the CLI subcommands and the acceptance runner.
// Each suite returns gated checks (thresholds pinned below), a JSON details
// block and CSV sweeps. Reports are deterministic given (config, seed); wall
// clock timings are kept out of them.

#include "rdlab/attractor.hpp"
#include "rdlab/config.hpp"
#include "rdlab/estimates.hpp"
#include "rdlab/initial_data.hpp"
#include "rdlab/io.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/solver.hpp"
#include "rdlab/stats.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rdlab {

using json = nlohmann::ordered_json;

namespace thresholds {

inline constexpr double linear_relative_error = 1e-4;
inline constexpr double order_tolerance = 0.2;
inline constexpr double certification_margin = -1e-12;
/// c4 must lie within this relative window of 2^{2-p}: [0.245, 0.255] at p = 4, [0.49, 0.51] at p = 3.
inline constexpr double monotonicity_window = 0.02;
inline constexpr double corollary_violations = 0.0;
inline constexpr double exponent_identity = 1e-12;
inline constexpr double gronwall_slack = 1e-6;
inline constexpr double ak_bk_growth = 3.0;
inline constexpr double smoothing_slope = 0.9;
inline constexpr double smoothing_c2_slack = 1e-3;
inline constexpr double h1_slope_margin = 0.05;
inline constexpr double lp_spread = 2.0;
inline constexpr double attraction = 1e-3;
inline constexpr double dimension_oracle = 0.2;
inline constexpr double translation = 1e-12;
inline constexpr double full_coverage = 1.0;

} // namespace thresholds

// ---------------------------------------------------------------------------
// Checks and results

struct Check {
    std::string name;
    double value = 0.0;
    std::string relation; ///< "<=", "<", ">=", "in", "finite", "true"
    double threshold = 0.0;
    double threshold_upper = 0.0; ///< upper end for "in"
    bool gated = true;
    bool pass = false;
    json witness = json::object();

    json to_json() const {
        json j;
        j["name"] = name;
        j["value"] = value;
        j["relation"] = relation;
        if (relation == "in")
            j["threshold"] = json::array({threshold, threshold_upper});
        else if (relation != "finite" && relation != "true")
            j["threshold"] = threshold;
        j["gated"] = gated;
        j["pass"] = pass;
        j["witness"] = witness;
        return j;
    }
};

inline Check check_le(std::string name, double value, double threshold, json witness = json::object()) {
    return Check{std::move(name), value, "<=", threshold, 0.0, true, value <= threshold, std::move(witness)};
}

inline Check check_lt(std::string name, double value, double threshold, json witness = json::object()) {
    return Check{std::move(name), value, "<", threshold, 0.0, true, value < threshold, std::move(witness)};
}

inline Check check_ge(std::string name, double value, double threshold, json witness = json::object()) {
    return Check{std::move(name), value, ">=", threshold, 0.0, true, value >= threshold, std::move(witness)};
}

inline Check check_in(std::string name, double value, double lo, double hi, json witness = json::object()) {
    return Check{std::move(name), value, "in", lo, hi, true, value >= lo && value <= hi, std::move(witness)};
}

inline Check check_finite(std::string name, double value, json witness = json::object()) {
    return Check{std::move(name), value, "finite", 0.0, 0.0, true, std::isfinite(value), std::move(witness)};
}

inline Check check_true(std::string name, bool ok, json witness = json::object()) {
    return Check{std::move(name), ok ? 1.0 : 0.0, "true", 0.0, 0.0, true, ok, std::move(witness)};
}

/// Reported alongside the gated checks but never affects the verdict.
inline Check info(Check c) {
    c.gated = false;
    return c;
}

struct SuiteResult {
    explicit SuiteResult(std::string name) : suite(std::move(name)) {}

    std::string suite;
    std::vector<Check> checks;
    json details = json::object();
    std::vector<std::pair<std::string, CsvTable>> tables; ///< file name, sweep
    std::vector<std::pair<std::string, std::string>> files; ///< file name, raw bytes

    bool pass() const {
        for (const auto& c : checks)
            if (c.gated && !c.pass)
                return false;
        return true;
    }

    json to_json() const {
        json j;
        j["suite"] = suite;
        j["pass"] = pass();
        j["checks"] = json::array();
        for (const auto& c : checks)
            j["checks"].push_back(c.to_json());
        j["details"] = details;
        return j;
    }
};

struct RunContext {
    unsigned threads = 1;
    std::function<void(const std::string&)> log;
    std::optional<PointCloud> cloud; ///< shared by the attractor suites of one run

    void note(const std::string& msg) const {
        if (log)
            log(msg);
    }
};

// ---------------------------------------------------------------------------
// Helpers

namespace detail {

inline const DissipativityConstants& require_constants(const ExperimentConfig& cfg, const char* suite) {
    if (!cfg.problem.constants)
        throw ConfigError(0, "problem.constants", std::string("required by ") + suite);
    return *cfg.problem.constants;
}

inline ScanSpec scan_of(const ExperimentConfig& cfg) { return cfg.certify ? cfg.certify->scan : ScanSpec{}; }

inline int oracle_samples(const ExperimentConfig& cfg) {
    return cfg.monotonicity ? cfg.monotonicity->samples : MonotonicityBlock{}.samples;
}

inline Decomposition decomposition_of(const ExperimentConfig& cfg, const char* suite) {
    const auto& c = require_constants(cfg, suite);
    return decompose(cfg.problem.f, c, scan_of(cfg), oracle_samples(cfg)).decomposition;
}

inline SolverConfig solver_for(const ExperimentConfig& cfg, double t_end, int record_stride, bool graded = false) {
    return SolverConfig{cfg.solver.dt, t_end, cfg.solver.scheme, record_stride, graded};
}

inline Field initial_field(const ExperimentConfig& cfg) {
    const InitialBlock b = cfg.initial.value_or(InitialBlock{});
    const DomainSpec& d = cfg.problem.domain;
    if (b.kind == "eigenmode")
        return eigenmode(d, b.mode, 1) *= b.amplitude;
    Rng rng = Rng::for_member(cfg.seed, 0);
    const InitialFamily family = b.kind == "spiky"               ? InitialFamily::spiky
                                 : b.kind == "eigenmode_mixture" ? InitialFamily::eigenmode_mixture
                                                                 : InitialFamily::random_coefficients;
    return sample_family(family, d, rng, b.amplitude);
}

/// Reported L^p norms use the growth exponent, or L^2 when f has no growth (f = 0, linear f).
inline CsvTable trajectory_table(const Trajectory& tr, double p) {
    p = std::max(p, 2.0);
    CsvTable t({"t", "norm_l2", "norm_p", "norm_grad"});
    for (std::size_t i = 0; i < tr.states.size(); ++i)
        t.add_row({tr.times[i], l2_norm(tr.states[i]), lebesgue_norm(tr.states[i], p), h1_seminorm(tr.states[i])});
    return t;
}

inline CsvTable sweep_table() { return CsvTable({"norm_u0", "norm_result", "quotient", "k", "gamma"}); }

inline json condition_json(const ConditionResult& c) {
    return json{{"name", c.name},
                {"worst_margin", c.worst_margin},
                {"argmin", c.argmin},
                {"tail_certified", c.tail_certified},
                {"pass", c.pass}};
}

inline void add_condition_checks(SuiteResult& r, const CertificationReport& rep, const std::string& prefix) {
    for (const auto& c : rep.conditions) {
        Check k = check_ge(prefix + c.name, c.worst_margin, thresholds::certification_margin,
                           json{{"argmin", c.argmin}, {"tail_certified", c.tail_certified}});
        k.pass = k.pass && c.tail_certified;
        r.checks.push_back(std::move(k));
    }
    r.checks.push_back(check_true(prefix + "scan_range_adequate", rep.scan_range_adequate));
}

inline json certification_json(const CertificationReport& rep) {
    json j{{"pass", rep.pass}, {"scan_range_adequate", rep.scan_range_adequate}, {"conditions", json::array()}};
    for (const auto& c : rep.conditions)
        j["conditions"].push_back(condition_json(c));
    return j;
}

inline json dimension_json(const DimensionEstimate& e) {
    return json{{"tag", e.tag.name()},
                {"points", e.points},
                {"dimension", e.dimension},
                {"band", e.band},
                {"r_squared", e.r_squared},
                {"eps_min", e.eps_min},
                {"eps_max", e.eps_max},
                {"window", json::array({e.window_begin, e.window_end})},
                {"degenerate", e.degenerate},
                {"no_linear_regime", e.no_linear_regime},
                {"small_sample", e.small_sample},
                {"scales", e.scales},
                {"correlation", e.correlation}};
}

inline AttractorBlock attractor_block(const ExperimentConfig& cfg, unsigned threads) {
    AttractorBlock b = cfg.attractor.value_or(AttractorBlock{});
    b.sampling.seed = cfg.seed;
    b.sampling.dt = cfg.solver.dt;
    b.sampling.scheme = cfg.solver.scheme;
    b.sampling.threads = threads;
    return b;
}

inline const PointCloud& attractor_cloud(const ExperimentConfig& cfg, RunContext& ctx) {
    if (!ctx.cloud) {
        ctx.note("sampling attractor cloud");
        ctx.cloud = sample_attractor(cfg.problem.build(), attractor_block(cfg, ctx.threads).sampling);
    }
    return *ctx.cloud;
}

inline json cloud_json(const PointCloud& cloud) {
    return json{{"points", cloud.size()},
                {"t_spin", cloud.t_spin},
                {"sample_spacing", cloud.sample_spacing},
                {"seed", cloud.seed},
                {"max_spin_increment", cloud.max_spin_increment},
                {"spin_up_stabilized", cloud.spin_up_stabilized}};
}

} // namespace detail

// ---------------------------------------------------------------------------
// solve: linear oracle or a plain trajectory

inline SuiteResult suite_solve(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"solve"};
    const ProblemSpec prob = cfg.problem.build();
    const DomainSpec& d = prob.domain();
    const double p = cfg.problem.f.p();
    if (!cfg.linear_oracle) {
        const Field u0 = detail::initial_field(cfg);
        const Trajectory tr = solve(u0, prob, detail::solver_for(cfg, cfg.solver.t_end, cfg.solver.record_stride));
        const Field& u = tr.states.back();
        r.checks.push_back(check_true("finite_solution", u.is_finite(), json{{"t", tr.times.back()}}));
        r.details = json{{"t_end", tr.times.back()},
                         {"norm_l2", l2_norm(u)},
                         {"norm_p", lebesgue_norm(u, std::max(p, 2.0))},
                         {"norm_grad", h1_seminorm(u)},
                         {"stiffness_indicator", tr.stiffness_indicator}};
        r.tables.emplace_back("trajectory.csv", detail::trajectory_table(tr, p));
        return r;
    }
    const auto& lo = *cfg.linear_oracle;
    const bool unforced = cfg.problem.g.kind == "zero" || cfg.problem.g.amplitude == 0.0;
    if (!unforced || !cfg.problem.f.is_zero())
        throw ConfigError(0, "linear_oracle", "requires f = 0 and g = 0");
    ctx.note("linear oracle");
    const Field u0 = eigenmode(d, 1, 1);
    const double rate = prob.lambda + laplacian_eigenvalues(d)[0];
    const Field exact = std::exp(-rate * lo.time) * u0;
    auto run = [&](double dt) {
        return solve(u0, prob, SolverConfig{dt, lo.time, cfg.solver.scheme, cfg.solver.record_stride, false});
    };
    const Trajectory tr = run(cfg.solver.dt);
    const double err = l2_norm(tr.states.back() - exact) / l2_norm(exact);
    r.checks.push_back(check_le("relative_error", err, thresholds::linear_relative_error,
                                json{{"t", lo.time}, {"dt", cfg.solver.dt}, {"decay_rate", rate}}));
    std::vector<double> log_dt, log_err, errs;
    for (double dt : lo.order_dts) {
        const double e = l2_norm(run(dt).states.back() - exact) / l2_norm(exact);
        errs.push_back(e);
        log_dt.push_back(std::log(dt));
        log_err.push_back(std::log(e));
    }
    const LinearFit fit = linear_fit(log_dt, log_err);
    const double nominal = cfg.solver.scheme == Scheme::imex_euler ? 1.0 : 2.0;
    r.checks.push_back(check_le("order_deviation", std::abs(fit.slope - nominal), thresholds::order_tolerance,
                                json{{"observed_order", fit.slope}, {"nominal_order", nominal}, {"dts", lo.order_dts},
                                     {"errors", errs}}));
    r.details = json{{"scheme", scheme_name(cfg.solver.scheme)},
                     {"time", lo.time},
                     {"relative_error", err},
                     {"observed_order", fit.slope},
                     {"nominal_order", nominal},
                     {"order_dts", lo.order_dts},
                     {"order_errors", errs}};
    r.tables.emplace_back("trajectory.csv", detail::trajectory_table(tr, p));
    return r;
}

// ---------------------------------------------------------------------------
// Nonlinearity

inline SuiteResult suite_certify(const ExperimentConfig& cfg, RunContext&) {
    SuiteResult r{"certify-nonlinearity"};
    const auto& c = detail::require_constants(cfg, "certify-nonlinearity");
    const ScanSpec scan = detail::scan_of(cfg);
    const auto rep = certify_conditions(cfg.problem.f, c, scan);
    detail::add_condition_checks(r, rep, "");
    r.details["scan"] = json{{"half_range", scan.half_range}, {"step", scan.step}};
    r.details["f"] = detail::certification_json(rep);
    if (cfg.problem.growth) {
        const auto add = certify_f_add(cfg.problem.f, *cfg.problem.growth, scan);
        detail::add_condition_checks(r, add, "growth_");
        r.details["growth"] = detail::certification_json(add);
    }
    return r;
}

inline SuiteResult suite_decompose(const ExperimentConfig& cfg, RunContext&) {
    SuiteResult r{"decompose"};
    const auto& c = detail::require_constants(cfg, "decompose");
    const auto res = decompose(cfg.problem.f, c, detail::scan_of(cfg), detail::oracle_samples(cfg));
    const auto& d = res.decomposition;
    // f1(s) = (alpha/2)|s|^{p-2}s - sigma, compared pointwise.
    double worst = 0.0, worst_s = 0.0;
    for (double s = -10.0; s <= 10.0; s += 0.125) {
        const double expected = 0.5 * c.alpha * std::copysign(std::pow(std::abs(s), c.p - 1.0), s) - c.sigma;
        const double dev = std::abs(d.f1(s) - expected) / (1.0 + std::abs(expected));
        if (dev > worst) {
            worst = dev;
            worst_s = s;
        }
    }
    r.checks.push_back(check_le("f1_form", worst, 1e-15, json{{"s", worst_s}}));
    detail::add_condition_checks(r, res.f2_report, "f2_");
    r.details = json{{"f1", {{"scale", d.f1_scale}, {"shift", d.f1_shift}, {"exponent", d.p - 1.0}}},
                     {"alpha1", d.alpha1},
                     {"sigma1", d.sigma1},
                     {"kappa2", d.kappa2},
                     {"l2", d.l2},
                     {"alpha2", d.alpha2},
                     {"beta2", d.beta2},
                     {"sigma2", d.sigma2},
                     {"monotonicity", {{"c1", d.monotonicity.c1}, {"c4", d.monotonicity.c4}}},
                     {"f_report", detail::certification_json(res.f_report)},
                     {"f2_report", detail::certification_json(res.f2_report)}};
    return r;
}

inline SuiteResult suite_monotonicity(const ExperimentConfig& cfg, RunContext&) {
    SuiteResult r{"monotonicity"};
    const MonotonicityBlock b = cfg.monotonicity.value_or(MonotonicityBlock{});
    r.details["constants"] = json::array();
    for (double p : b.exponents) {
        const auto m = monotonicity_constant_oracle(p, b.samples, cfg.seed);
        const double target = std::pow(2.0, 2.0 - p);
        const std::string tag = format_double(p);
        r.checks.push_back(check_in("c4_p" + tag, m.c4, (1.0 - thresholds::monotonicity_window) * target,
                                    (1.0 + thresholds::monotonicity_window) * target,
                                    json{{"a", m.c4_argmin_a}, {"b", m.c4_argmin_b}, {"raw", m.c4_raw}}));
        r.details["constants"].push_back(json{{"p", p},
                                              {"c1", m.c1},
                                              {"c4", m.c4},
                                              {"c1_raw", m.c1_raw},
                                              {"c4_raw", m.c4_raw},
                                              {"c4_argmin", {m.c4_argmin_a, m.c4_argmin_b}},
                                              {"pairs", m.pairs}});
    }
    return r;
}

inline SuiteResult suite_corollary(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"corollary"};
    const CorollaryBlock b = cfg.corollary.value_or(CorollaryBlock{});
    const Decomposition d = detail::decomposition_of(cfg, "corollary");
    ctx.note("checking " + std::to_string(b.triples) + " triples");
    const auto triples =
        random_corollary_triples(static_cast<std::size_t>(b.triples), b.s_range, b.r_max, cfg.seed);
    const auto rep = check_corollary(cfg.problem.f, d, triples);
    r.checks.push_back(check_le(
        "violations", static_cast<double>(rep.violations), thresholds::corollary_violations,
        json{{"s1", rep.witness.s1}, {"s2", rep.witness.s2}, {"r", rep.witness.r},
             {"worst_relative_margin", rep.worst_relative_margin}}));
    r.details = json{{"checked", rep.checked},
                     {"violations", rep.violations},
                     {"worst_relative_margin", rep.worst_relative_margin},
                     {"alpha1", d.alpha1},
                     {"l2", d.l2}};
    return r;
}

// ---------------------------------------------------------------------------
// Estimates

inline SuiteResult suite_exponents(const ExperimentConfig& cfg, RunContext&) {
    SuiteResult r{"exponents"};
    const ExponentsBlock b = cfg.exponents.value_or(ExponentsBlock{});
    CsvTable table({"p", "k", "a_k", "b_k", "pa_k"});
    auto tabulate = [&](const ExponentTable& t) {
        for (int k = 1; k <= static_cast<int>(t.size()); ++k)
            table.add_row({t.p(), static_cast<long long>(k), t.a(k), t.b(k), t.pa(k)});
    };
    const ExponentTable four(4.0, b.k_max);
    double b_dev = 0.0;
    int b_dev_k = 1;
    for (int k = 1; k <= b.k_max; ++k)
        if (std::abs(four.b(k) - 1.0) > b_dev) {
            b_dev = std::abs(four.b(k) - 1.0);
            b_dev_k = k;
        }
    r.checks.push_back(check_le("b_k_equals_one_p4", b_dev, thresholds::exponent_identity, json{{"k", b_dev_k}}));
    tabulate(four);

    std::vector<double> ps{4.0, cfg.problem.f.p()};
    Rng rng(cfg.seed);
    for (int i = 0; i < b.random_p; ++i)
        ps.push_back(2.0 + (b.p_max - 2.0) * (1.0 - rng.uniform())); // (2, p_max]
    double worst = 0.0, worst_p = 4.0, bridge = 0.0, bridge_p = 4.0;
    for (double p : ps) {
        const ExponentTable t(p, b.k_max);
        if (t.identity_residual() > worst) {
            worst = t.identity_residual();
            worst_p = p;
        }
        const double br = bridge_identity_residual(p);
        if (br > bridge) {
            bridge = br;
            bridge_p = p;
        }
    }
    if (cfg.problem.f.p() != 4.0)
        tabulate(ExponentTable(cfg.problem.f.p(), b.k_max));
    r.checks.push_back(check_le("identity_residual", worst, thresholds::exponent_identity, json{{"p", worst_p}}));
    r.checks.push_back(check_le("bridge_residual", bridge, thresholds::exponent_identity, json{{"p", bridge_p}}));
    r.details = json{{"k_max", b.k_max},
                     {"exponents_checked", ps.size()},
                     {"identity_residual", worst},
                     {"bridge_residual", bridge},
                     {"b_k_deviation_p4", b_dev}};
    r.tables.emplace_back("exponents.csv", std::move(table));
    return r;
}

inline SuiteResult suite_gronwall(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"gronwall"};
    const GronwallBlock b = cfg.gronwall.value_or(GronwallBlock{});
    const Decomposition d = detail::decomposition_of(cfg, "gronwall");
    const ProblemSpec prob = cfg.problem.build();
    const auto pairs = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.pairs), cfg.seed, b.radius,
                                          b.min_norm, b.max_norm);
    ctx.note("gronwall: " + std::to_string(b.pairs) + " pairs");
    const auto reports = parallel_map(pairs.size(), ctx.threads, [&](std::size_t i) {
        const auto tr = solve_pair(pairs[i].base, pairs[i].difference, prob,
                                   detail::solver_for(cfg, b.t_end, b.record_stride));
        return gronwall_check(tr.difference, d.l2, prob.lambda, thresholds::gronwall_slack);
    });
    double worst = 0.0;
    std::size_t at = 0;
    CsvTable table = detail::sweep_table();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].worst_ratio > worst) {
            worst = reports[i].worst_ratio;
            at = i;
        }
        const double n0 = l2_norm(pairs[i].difference);
        table.add_row({n0, std::sqrt(reports[i].worst_ratio) * n0, reports[i].worst_ratio, 0LL, 2.0});
    }
    const double mu = gronwall_rate(d.l2, prob.lambda);
    r.checks.push_back(check_le("worst_ratio", worst, 1.0 + thresholds::gronwall_slack,
                                json{{"pair", at},
                                     {"time", reports[at].worst_time},
                                     {"norm_u0", l2_norm(pairs[at].difference)}}));
    r.details = json{{"mu", mu}, {"l2", d.l2}, {"pairs", pairs.size()}, {"t_end", b.t_end}, {"worst_ratio", worst}};
    r.tables.emplace_back("gronwall.csv", std::move(table));
    return r;
}

inline SuiteResult suite_ak_bk(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"ak-bk"};
    const AkBkBlock b = cfg.ak_bk.value_or(AkBkBlock{});
    const ProblemSpec prob = cfg.problem.build();
    const double p = cfg.problem.f.p();
    const ExponentTable table(p, b.k_max + 1);
    std::vector<double> norms = b.norms;
    std::sort(norms.begin(), norms.end(), std::greater<>());
    const auto dirs = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.directions), cfg.seed, b.radius,
                                         1.0, 1.0);
    const std::size_t nn = norms.size();
    ctx.note("ak-bk: " + std::to_string(dirs.size() * nn) + " pairs");
    const auto reports = parallel_map(dirs.size() * nn, ctx.threads, [&](std::size_t job) {
        const auto& pr = dirs[job / nn];
        const Field ubar0 = norms[job % nn] * pr.difference;
        const auto tr = solve_pair(pr.base, ubar0, prob, detail::solver_for(cfg, b.t_end, b.record_stride, true));
        return verify_Ak_Bk(tr, table, b.t_end);
    });
    bool finite = true;
    CsvTable csv({"norm_u0", "norm_result", "quotient", "k", "gamma", "estimate"});
    json entries = json::array();
    for (int k = 1; k <= b.k_max; ++k) {
        double growth = 0.0, spread = 1.0;
        json gw = json::object();
        for (std::size_t dir = 0; dir < dirs.size(); ++dir) {
            for (const char* est : {"A", "B"}) {
                std::vector<double> q;
                for (std::size_t i = 0; i < nn; ++i) {
                    const auto& e = reports[dir * nn + i].entries[k - 1];
                    q.push_back(est[0] == 'A' ? e.a_quotient : e.b_quotient);
                    finite = finite && std::isfinite(q.back());
                }
                // Growth as the difference norm decreases: q[j] / q[i] with norms[j] < norms[i].
                for (std::size_t i = 0; i < nn; ++i)
                    for (std::size_t j = i + 1; j < nn; ++j) {
                        const double g = q[i] > 0.0 ? q[j] / q[i] : (q[j] > 0.0 ? INFINITY : 0.0);
                        if (g > growth) {
                            growth = g;
                            gw = json{{"direction", dir}, {"estimate", est}, {"from_norm", norms[i]},
                                      {"to_norm", norms[j]}};
                        }
                    }
                const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
                if (*mn > 0.0)
                    spread = std::max(spread, *mx / *mn);
            }
        }
        if (gw.empty())
            gw = json{{"direction", 0}};
        r.checks.push_back(check_le("growth_k" + std::to_string(k), growth, thresholds::ak_bk_growth, gw));
        r.checks.push_back(info(check_le("two_sided_spread_k" + std::to_string(k), spread, thresholds::ak_bk_growth)));
        entries.push_back(json{{"k", k}, {"pa_k", table.pa(k)}, {"pa_k_plus_1", table.pa(k + 1)},
                               {"growth", growth}, {"spread", spread}});
    }
    for (std::size_t job = 0; job < reports.size(); ++job) {
        const double n0 = reports[job].norm_u0;
        for (const auto& e : reports[job].entries) {
            csv.add_row({n0, e.a_quotient * n0 * n0, e.a_quotient, static_cast<long long>(e.k), table.pa(e.k),
                         std::string("A")});
            csv.add_row({n0, e.b_quotient * n0 * n0, e.b_quotient, static_cast<long long>(e.k), table.pa(e.k + 1),
                         std::string("B")});
        }
    }
    r.checks.insert(r.checks.begin(), check_true("quotients_finite", finite));
    r.details = json{{"t_end", b.t_end}, {"norms", norms}, {"directions", dirs.size()}, {"entries", entries}};
    r.tables.emplace_back("ak_bk.csv", std::move(csv));
    return r;
}

inline SuiteResult suite_smoothing(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"smoothing"};
    const SmoothingBlock b = cfg.smoothing.value_or(SmoothingBlock{});
    const ProblemSpec prob = cfg.problem.build();
    const auto ensemble = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.pairs), cfg.seed, b.radius,
                                             b.min_norm, b.max_norm);
    ctx.note("smoothing: " + std::to_string(ensemble.size()) + " pairs");
    const auto samples = run_smoothing_ensemble(ensemble, prob, detail::solver_for(cfg, 1.0, 1), b.gammas, ctx.threads);
    CsvTable csv = detail::sweep_table();
    r.details["gammas"] = json::array();
    for (std::size_t gi = 0; gi < b.gammas.size(); ++gi) {
        const auto rep = smoothing_constant(b.gammas[gi], gi, samples);
        const std::string tag = format_double(rep.gamma);
        const json w{{"sample", rep.witness},
                     {"norm_u0", rep.norm_u0.empty() ? 0.0 : rep.norm_u0[rep.witness]}};
        r.checks.push_back(check_finite("c_gamma" + tag, rep.finite ? rep.c_gamma : NAN, w));
        r.checks.push_back(check_ge("slope_gamma" + tag, rep.fit.slope, thresholds::smoothing_slope,
                                    json{{"r_squared", rep.fit.r_squared}, {"points", rep.fit.points}}));
        for (std::size_t i = 0; i < rep.norm_u0.size(); ++i)
            csv.add_row({rep.norm_u0[i], rep.result[i], rep.result[i] / (rep.norm_u0[i] * rep.norm_u0[i]),
                         static_cast<long long>(i), rep.gamma});
        r.details["gammas"].push_back(json{{"gamma", rep.gamma},
                                           {"c_gamma", rep.c_gamma},
                                           {"slope", rep.fit.slope},
                                           {"intercept", rep.fit.intercept},
                                           {"r_squared", rep.fit.r_squared},
                                           {"norm_u0", rep.norm_u0},
                                           {"result", rep.result}});
    }
    // c_2 <= e^mu needs lambda > l2, so it runs on a variant with a larger lambda.
    const Decomposition d = detail::decomposition_of(cfg, "smoothing");
    if (!(b.gamma2_lambda > d.l2))
        throw ConfigError(0, "smoothing.gamma2_lambda", "must exceed l2 = " + format_double(d.l2));
    const ProblemSpec variant(b.gamma2_lambda, prob.f, prob.g);
    const auto ens2 = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.gamma2_pairs), cfg.seed, b.radius,
                                         b.min_norm, b.max_norm);
    ctx.note("smoothing: lambda = " + format_double(b.gamma2_lambda) + " variant");
    const auto s2 = run_smoothing_ensemble(ens2, variant, detail::solver_for(cfg, 1.0, 1), {2.0}, ctx.threads);
    const auto rep2 = smoothing_constant(2.0, 0, s2);
    const double mu = gronwall_rate(d.l2, b.gamma2_lambda);
    r.checks.push_back(check_le("c2_variant", rep2.c_gamma, std::exp(mu) * (1.0 + thresholds::smoothing_c2_slack),
                                json{{"lambda", b.gamma2_lambda}, {"mu", mu}, {"sample", rep2.witness}}));
    r.details["variant"] = json{{"lambda", b.gamma2_lambda}, {"l2", d.l2}, {"mu", mu}, {"c2", rep2.c_gamma}};
    r.tables.emplace_back("smoothing.csv", std::move(csv));
    return r;
}

inline SuiteResult suite_h1_smoothing(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"h1-smoothing"};
    if (!cfg.problem.growth)
        throw ConfigError(0, "problem.growth", "required by h1-smoothing");
    const H1SmoothingBlock b = cfg.h1_smoothing.value_or(H1SmoothingBlock{});
    const ProblemSpec prob = cfg.problem.build();
    const double p = cfg.problem.f.p();
    const auto f_add = certify_f_add(cfg.problem.f, *cfg.problem.growth, detail::scan_of(cfg));
    const auto ensemble = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.pairs), cfg.seed, b.radius,
                                             b.min_norm, b.max_norm);
    ctx.note("h1-smoothing: " + std::to_string(ensemble.size()) + " pairs");
    const auto samples = run_smoothing_ensemble(ensemble, prob, detail::solver_for(cfg, 1.0, 1), {2.0}, ctx.threads);
    const auto fit = h1_smoothing_fit(samples, p, f_add, b.small_norm_cutoff);
    std::size_t worst = 0;
    double worst_ratio = 0.0;
    CsvTable csv = detail::sweep_table();
    for (std::size_t i = 0; i < fit.norm_u0.size(); ++i) {
        const double n = fit.norm_u0[i];
        const double bound = fit.c_r * std::pow(n, 2.0 / (p - 1.0)) + fit.c * n * n;
        const double ratio = bound > 0.0 ? fit.gradient[i] * fit.gradient[i] / bound : 0.0;
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst = i;
        }
        csv.add_row({n, fit.gradient[i], ratio, static_cast<long long>(i), std::string("H1")});
    }
    r.checks.push_back(check_le("bound_ratio", fit.max_ratio, 1.0,
                                json{{"sample", worst}, {"norm_u0", fit.norm_u0.empty() ? 0.0 : fit.norm_u0[worst]}}));
    r.checks.push_back(check_ge("small_norm_slope", fit.small_norm_fit.slope, fit.slope_threshold,
                                json{{"points", fit.small_norm_fit.points}, {"cutoff", b.small_norm_cutoff},
                                     {"r_squared", fit.small_norm_fit.r_squared}}));
    r.checks.push_back(info(check_true("remark_bound", fit.remark_holds, json{{"constant", fit.remark_constant}})));
    r.details = json{{"p", p},
                     {"c_r", fit.c_r},
                     {"c", fit.c},
                     {"max_ratio", fit.max_ratio},
                     {"mean_ratio", fit.mean_ratio},
                     {"slope", fit.small_norm_fit.slope},
                     {"slope_threshold", fit.slope_threshold},
                     {"remark_constant", fit.remark_constant},
                     {"norm_u0", fit.norm_u0},
                     {"gradient", fit.gradient},
                     {"growth_certificate", detail::certification_json(f_add)}};
    r.tables.emplace_back("h1_smoothing.csv", std::move(csv));
    return r;
}

namespace detail {

inline std::vector<LpFamilyMember> lp_family(const LpBoundBlock& b, const ProblemSpec& prob, double p) {
    const double L = prob.domain().side_length;
    std::vector<LpFamilyMember> family;
    for (double lp : b.lp_norms) {
        // Hoelder: ||u||_p >= ||u||_2 L^{1/p - 1/2}, with equality only for constants.
        const double floor = b.l2_norm * std::pow(L, 1.0 / p - 0.5);
        AnalyticProfile profile;
        if (std::abs(lp - floor) <= 1e-12 * floor)
            profile = AnalyticProfile::constant(b.l2_norm / std::sqrt(L), L);
        else if (lp > floor)
            profile = AnalyticProfile::gaussian_with_norms(b.l2_norm, lp, p, b.center * L, L);
        else
            throw ConfigError(0, "lp_bound.lp_norms", "entry " + format_double(lp) + " is below the Hoelder floor " +
                                                          format_double(floor));
        family.push_back(LpFamilyMember::from_profile("lp" + format_double(lp), profile, prob, p));
    }
    return family;
}

} // namespace detail

inline SuiteResult suite_lp_bound(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"lp-bound"};
    const auto& c = detail::require_constants(cfg, "lp-bound");
    const LpBoundBlock b = cfg.lp_bound.value_or(LpBoundBlock{});
    const ProblemSpec prob = cfg.problem.build();
    const double p = cfg.problem.f.p();
    LpBoundOptions opt;
    opt.eps = b.eps;
    opt.horizon = b.horizon;
    opt.k_max = b.k_max;
    opt.dt = cfg.solver.dt;
    opt.scheme = cfg.solver.scheme;
    opt.record_stride = b.record_stride;
    opt.windows = b.windows;
    opt.threads = ctx.threads;
    ctx.note("lp-bound: " + std::to_string(b.lp_norms.size()) + " members");
    const auto rep = verify_lemma23(prob, c, detail::lp_family(b, prob, p), opt);

    json members = json::array();
    double layer = 0.0;
    for (const auto& m : rep.members) {
        layer = std::max(layer, m.layer_reaction);
        members.push_back(json{{"label", m.label},
                               {"norm_l2_u0", m.norm_l2_u0},
                               {"norm_p_u0", m.norm_p_u0},
                               {"layer_reaction", m.layer_reaction},
                               {"norm_p_at_eps", m.norm_p_at_eps},
                               {"sup_quotient", m.sup_quotient},
                               {"sup_quotient_time", m.sup_quotient_time},
                               {"window_sup", m.window_sup}});
    }
    json at_eps = json::array();
    for (const auto& m : rep.members)
        at_eps.push_back(json{{"label", m.label}, {"norm_p_at_eps", m.norm_p_at_eps}});
    r.checks.push_back(check_lt("norm_at_eps_spread", rep.norm_p_at_eps_spread, thresholds::lp_spread, at_eps));
    for (int k = 1; k <= rep.k_max; ++k) {
        std::size_t arg = 0;
        for (std::size_t i = 0; i < rep.members.size(); ++i)
            if (!(rep.members[i].sup_quotient[k - 1] <= rep.members[arg].sup_quotient[k - 1]))
                arg = i;
        r.checks.push_back(check_finite("sup_quotient_k" + std::to_string(k), rep.sup_quotient[k - 1],
                                        json{{"member", rep.members[arg].label},
                                             {"time", rep.members[arg].sup_quotient_time[k - 1]}}));
    }
    r.checks.push_back(info(check_le("initial_layer_reaction", layer, 1e-2)));
    r.details = json{{"eps", rep.eps},
                     {"horizon", rep.horizon},
                     {"k_max", rep.k_max},
                     {"g_terms", rep.g_terms},
                     {"windows", rep.windows},
                     {"window_sup", rep.window_sup},
                     {"sup_quotient", rep.sup_quotient},
                     {"quotient_spread", rep.quotient_spread},
                     {"norm_p_at_eps_spread", rep.norm_p_at_eps_spread},
                     {"members", members}};
    // The unforced problem for comparison: the decay rate depends on the data.
    if (cfg.problem.g.kind != "zero" && cfg.problem.g.amplitude != 0.0) {
        const ProblemSpec unforced(prob.lambda, prob.f, prob.domain());
        const auto rep0 = verify_lemma23(unforced, c, detail::lp_family(b, unforced, p), opt);
        r.checks.push_back(info(check_lt("unforced_norm_at_eps_spread", rep0.norm_p_at_eps_spread, thresholds::lp_spread)));
        r.details["unforced_norm_p_at_eps_spread"] = rep0.norm_p_at_eps_spread;
    }
    return r;
}

inline SuiteResult suite_energy(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"energy-monitor"};
    const auto& c = detail::require_constants(cfg, "energy-monitor");
    const EnergyBlock b = cfg.energy.value_or(EnergyBlock{});
    const ProblemSpec prob = cfg.problem.build();
    const DomainSpec& d = prob.domain();
    const SolverConfig sc = detail::solver_for(cfg, b.t_end, b.record_stride);
    auto initial = [&](std::size_t i) {
        return ensemble_member(d, cfg.seed, i, b.radius * static_cast<double>(i + 1) / b.runs);
    };
    ctx.note("energy-monitor: " + std::to_string(b.runs) + " runs");
    const auto reports = parallel_map(static_cast<std::size_t>(b.runs), ctx.threads,
                                      [&](std::size_t i) { return energy_monitor(solve(initial(i), prob, sc), prob, c); });
    double c2 = 0.0, cp = 0.0, r2 = 0.0, rp = 0.0;
    std::size_t a2 = 0, ap = 0, ar2 = 0, arp = 0, unreliable = 0;
    CsvTable csv({"run", "norm_u0", "c_l2", "c_lp", "c_l2_rate", "c_lp_rate", "reliable"});
    auto track = [](double v, std::size_t i, double& best, std::size_t& at) {
        if (!(v <= best)) {
            best = v;
            at = i;
        }
    };
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& e = reports[i];
        track(e.c_l2, i, c2, a2);
        track(e.c_lp, i, cp, ap);
        track(e.c_l2_rate, i, r2, ar2);
        track(e.c_lp_rate, i, rp, arp);
        unreliable += e.reliable ? 0 : 1;
        csv.add_row({static_cast<long long>(i), l2_norm(initial(i)), e.c_l2, e.c_lp, e.c_l2_rate, e.c_lp_rate,
                     static_cast<long long>(e.reliable)});
    }
    r.checks.push_back(check_finite("c_l2", c2, json{{"run", a2}, {"time", reports[a2].c_l2_time}}));
    r.checks.push_back(check_finite("c_lp", cp, json{{"run", ap}, {"time", reports[ap].c_lp_time}}));
    r.checks.push_back(check_le("unreliable_runs", static_cast<double>(unreliable), 0.0));
    r.checks.push_back(check_finite("c_lp_rate", rp, json{{"run", arp}, {"time", reports[arp].c_lp_rate_time}}));
    // f(s)s >= alpha|s|^p - beta and Young give d/dt||u||^2 + lambda||u||^2 + 2 alpha ||u||_p^p
    // <= 2 beta |Omega| + ||g||^2 / lambda, which holds exactly for the semi-discrete rate.
    if (2.0 * c.alpha >= 1.0) {
        const double bound = std::max(1.0 / prob.lambda, 2.0 * c.beta * std::pow(d.side_length, d.dimension));
        r.checks.push_back(check_le("c_l2_rate_analytic", r2, bound,
                                    json{{"run", ar2}, {"time", reports[ar2].c_l2_rate_time}}));
        r.details["c_l2_analytic_bound"] = bound;
    } else {
        r.checks.push_back(check_finite("c_l2_rate", r2, json{{"run", ar2}}));
    }
    r.details["c_l2_rate"] = r2;
    r.details["c_lp_rate"] = rp;
    r.details["c_l2"] = c2;
    r.details["c_lp"] = cp;
    r.details["runs"] = reports.size();
    r.details["max_norm_u0"] = b.radius;
    r.tables.emplace_back("energy.csv", std::move(csv));
    r.tables.emplace_back("energy_trajectory.csv",
                          detail::trajectory_table(solve(initial(a2), prob, sc), cfg.problem.f.p()));
    return r;
}

// ---------------------------------------------------------------------------
// Attractor

inline SuiteResult suite_attractor(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"attractor"};
    const AttractorBlock b = detail::attractor_block(cfg, ctx.threads);
    const ProblemSpec prob = cfg.problem.build();
    const DomainSpec& d = prob.domain();
    const PointCloud& cloud = detail::attractor_cloud(cfg, ctx);
    r.checks.push_back(info(check_le("spin_increment", cloud.max_spin_increment, b.sampling.spin_tolerance)));

    const int stride = std::max(1, static_cast<int>(std::lround(b.record_interval / cfg.solver.dt)));
    ctx.note("attractor: bundle of " + std::to_string(b.bundle_size));
    const auto bundle = parallel_map(static_cast<std::size_t>(b.bundle_size), ctx.threads, [&](std::size_t i) {
        const double radius = b.bundle_radius * static_cast<double>(i + 1) / b.bundle_size;
        return solve(ensemble_member(d, cfg.seed, 1000 + i, radius), prob, detail::solver_for(cfg, b.t_attract, stride));
    });
    CsvTable csv({"t", "L2", "L6"});
    std::vector<std::vector<DistancePoint>> series;
    for (double gamma : {2.0, 6.0}) {
        const NormTag tag = NormTag::lebesgue(gamma);
        series.push_back(attraction_distance(bundle, cloud, tag, nullptr, ctx.threads));
        const auto& s = series.back();
        const double settle = settling_time(s, thresholds::attraction);
        r.checks.push_back(check_lt("final_distance_" + tag.name(), s.back().dist, thresholds::attraction,
                                    json{{"t", s.back().t}, {"settling_time", settle}}));
        json ts = json::array(), ds = json::array();
        for (const auto& pt : s) {
            ts.push_back(pt.t);
            ds.push_back(pt.dist);
        }
        r.details["distance_" + tag.name()] = json{{"t", ts}, {"dist", ds}, {"settling_time", settle}};
    }
    for (std::size_t i = 0; i < series[0].size(); ++i)
        csv.add_row({series[0][i].t, series[0][i].dist, series[1][i].dist});
    r.details["cloud"] = detail::cloud_json(cloud);
    r.details["bundle"] = json{{"size", b.bundle_size}, {"max_radius", b.bundle_radius}, {"t_end", b.t_attract}};

    json manifest = detail::cloud_json(cloud);
    manifest["file"] = "cloud.bin";
    manifest["dimension"] = d.dimension;
    manifest["points_per_axis"] = d.points_per_axis;
    manifest["side_length"] = d.side_length;
    manifest["times"] = cloud.times;
    manifest["member"] = cloud.member;
    r.files.emplace_back("cloud.bin", encode_states(d, cloud.states));
    r.files.emplace_back("cloud.json", manifest.dump(2) + "\n");
    r.tables.emplace_back("attraction.csv", std::move(csv));
    return r;
}

inline SuiteResult suite_dimension(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"dimension"};
    const AttractorBlock b = detail::attractor_block(cfg, ctx.threads);
    const DomainSpec& d = cfg.problem.domain;
    const double p = cfg.problem.f.p();
    const std::vector<NormTag> tags{NormTag::lebesgue(2.0), NormTag::lebesgue(p), NormTag::h1()};
    const auto n = static_cast<std::size_t>(b.synthetic_points);

    ctx.note("dimension: synthetic oracles");
    json synthetic = json::array();
    auto oracle = [&](const std::string& name, const PointCloud& c, double expected) {
        for (const auto& tag : tags) {
            const auto e = correlation_dimension(c, tag, {}, ctx.threads);
            r.checks.push_back(check_le(name + "_" + tag.name(), std::abs(e.dimension - expected),
                                        thresholds::dimension_oracle,
                                        json{{"dimension", e.dimension}, {"expected", expected}, {"band", e.band}}));
            json j = detail::dimension_json(e);
            j["cloud"] = name;
            synthetic.push_back(std::move(j));
        }
    };
    oracle("line", line_segment_cloud(eigenmode(d, 1, 1), n, cfg.seed), 1.0);
    oracle("torus", torus_cloud(d, n, cfg.seed), 2.0);

    const PointCloud& cloud = detail::attractor_cloud(cfg, ctx);
    const Field& z0 = cloud.states.front();
    ctx.note("dimension: attractor cloud");
    json invariance = json::array();
    std::vector<double> gammas{2.0, p};
    for (double g : b.bound_gammas)
        if (std::find(gammas.begin(), gammas.end(), g) == gammas.end())
            gammas.push_back(g);
    for (double g : gammas) {
        const NormTag tag = NormTag::lebesgue(g);
        const auto a = correlation_dimension(cloud, tag, {}, ctx.threads);
        const auto t = correlation_dimension(cloud.translated(z0), tag, {}, ctx.threads);
        r.checks.push_back(check_le("translation_" + tag.name(), std::abs(a.dimension - t.dimension),
                                    thresholds::translation,
                                    json{{"dimension", a.dimension}, {"translated", t.dimension}}));
        invariance.push_back(detail::dimension_json(a));
    }
    json bounds = json::array();
    for (double g : b.bound_gammas) {
        const auto rep = dimension_bound_check(cloud, p, g, z0, {}, ctx.threads);
        json entries = json::array();
        for (const auto& e : rep.bounds)
            entries.push_back(json{{"name", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"tolerance", e.tolerance},
                                   {"pass", e.pass}});
        r.checks.push_back(check_true("bounds_gamma" + format_double(g), rep.pass, entries));
        bounds.push_back(json{{"p", p},
                              {"gamma", g},
                              {"degenerate", rep.degenerate},
                              {"entries", entries},
                              {"estimates",
                               json::array({detail::dimension_json(rep.l2), detail::dimension_json(rep.lp),
                                            detail::dimension_json(rep.lgamma_translated),
                                            detail::dimension_json(rep.h1)})}});
    }
    r.details = json{{"synthetic", synthetic},
                     {"cloud", detail::cloud_json(cloud)},
                     {"cloud_estimates", invariance},
                     {"bound_checks", bounds}};
    CsvTable csv({"cloud", "tag", "eps", "correlation"});
    for (const auto& e : synthetic)
        for (std::size_t i = 0; i < e["scales"].size(); ++i)
            csv.add_row({e["cloud"].get<std::string>(), e["tag"].get<std::string>(), e["scales"][i].get<double>(),
                         e["correlation"][i].get<double>()});
    for (const auto& e : invariance)
        for (std::size_t i = 0; i < e["scales"].size(); ++i)
            csv.add_row({std::string("attractor"), e["tag"].get<std::string>(), e["scales"][i].get<double>(),
                         e["correlation"][i].get<double>()});
    r.tables.emplace_back("correlation.csv", std::move(csv));
    return r;
}

inline SuiteResult suite_net_transport(const ExperimentConfig& cfg, RunContext& ctx) {
    SuiteResult r{"net-transport"};
    const AttractorBlock b = detail::attractor_block(cfg, ctx.threads);
    const ProblemSpec prob = cfg.problem.build();
    const double gamma = b.transport_gamma;
    const PointCloud& cloud = detail::attractor_cloud(cfg, ctx);

    ctx.note("net-transport: smoothing constant");
    const auto ens = make_pair_ensemble(prob.domain(), static_cast<std::size_t>(b.smoothing_pairs), cfg.seed,
                                        b.smoothing_radius, 1e-6, 1.0);
    const auto samples = run_smoothing_ensemble(ens, prob, detail::solver_for(cfg, 1.0, 1), {gamma}, ctx.threads);
    const auto sr = smoothing_constant(gamma, 0, samples);
    const double L = std::pow(sr.c_gamma, 1.0 / gamma);
    const double delta = 2.0 / gamma;
    r.checks.push_back(check_finite("holder_constant", L, json{{"c_gamma", sr.c_gamma}, {"sample", sr.witness}}));

    ctx.note("net-transport: time-one images");
    const auto images = time_one_images(cloud, prob, cfg.solver.dt, cfg.solver.scheme, ctx.threads);
    const DistanceMatrix dist(cloud, NormTag::lebesgue(2.0), ctx.threads);
    const NormTag target = NormTag::lebesgue(gamma);
    CsvTable csv({"eps", "net_size", "radius", "max_target_distance", "coverage", "worst_ratio"});
    json nets = json::array();
    for (double eps : b.eps) {
        const auto net = greedy_epsilon_net(dist, eps);
        const auto tr = transport_net(cloud, net, images, L, delta, target);
        r.checks.push_back(check_ge("coverage_eps" + format_double(eps), tr.coverage, thresholds::full_coverage,
                                    json{{"net_size", net.indices.size()},
                                         {"radius", tr.radius},
                                         {"max_target_distance", tr.max_target_distance},
                                         {"worst_ratio", tr.worst_ratio}}));
        csv.add_row({eps, static_cast<long long>(net.indices.size()), tr.radius, tr.max_target_distance, tr.coverage,
                     tr.worst_ratio});
        nets.push_back(json{{"eps", eps},
                            {"net_size", net.indices.size()},
                            {"max_cover_distance", net.max_cover_distance},
                            {"radius", tr.radius},
                            {"covered", tr.covered},
                            {"points", tr.points},
                            {"max_target_distance", tr.max_target_distance},
                            {"worst_ratio", tr.worst_ratio}});
    }
    r.details = json{{"gamma", gamma},
                     {"c_gamma", sr.c_gamma},
                     {"holder_constant", L},
                     {"holder_exponent", delta},
                     {"smoothing_pairs", samples.size()},
                     {"cloud", detail::cloud_json(cloud)},
                     {"nets", nets}};
    r.tables.emplace_back("transport.csv", std::move(csv));
    return r;
}

// ---------------------------------------------------------------------------
// Registry and runner

struct SuiteInfo {
    const char* name;
    SuiteResult (*run)(const ExperimentConfig&, RunContext&);
    bool (*selected)(const ExperimentConfig&); ///< part of "all" for this config
    const char* summary;
};

inline const std::vector<SuiteInfo>& suite_registry() {
    static const std::vector<SuiteInfo> suites{
        {"solve", suite_solve, [](const ExperimentConfig& c) { return bool(c.linear_oracle || c.initial); },
         "integrate the problem; linear oracle and convergence order with a linear_oracle block"},
        {"certify-nonlinearity", suite_certify, [](const ExperimentConfig& c) { return bool(c.certify); },
         "certify the dissipativity conditions (and the growth bound on f')"},
        {"decompose", suite_decompose, [](const ExperimentConfig& c) { return bool(c.certify); },
         "split f = f1 + f2 and re-certify f2"},
        {"monotonicity", suite_monotonicity, [](const ExperimentConfig& c) { return bool(c.monotonicity); },
         "sampled monotonicity constants c1, c4"},
        {"corollary", suite_corollary, [](const ExperimentConfig& c) { return bool(c.corollary); },
         "pointwise difference inequality on random triples"},
        {"exponents", suite_exponents, [](const ExperimentConfig& c) { return bool(c.exponents); },
         "exponent tables a_k, b_k and their identities"},
        {"gronwall", suite_gronwall, [](const ExperimentConfig& c) { return bool(c.gronwall); },
         "L2 growth of differences against e^{mu t}"},
        {"ak-bk", suite_ak_bk, [](const ExperimentConfig& c) { return bool(c.ak_bk); },
         "weighted L^{pa_k} quotients of differences"},
        {"smoothing", suite_smoothing, [](const ExperimentConfig& c) { return bool(c.smoothing); },
         "(L2, L^gamma) smoothing constants"},
        {"h1-smoothing", suite_h1_smoothing, [](const ExperimentConfig& c) { return bool(c.h1_smoothing); },
         "(L2, H1_0) smoothing fit"},
        {"lp-bound", suite_lp_bound, [](const ExperimentConfig& c) { return bool(c.lp_bound); },
         "L^p bound independent of the initial L^p norm"},
        {"energy-monitor", suite_energy, [](const ExperimentConfig& c) { return bool(c.energy); },
         "energy inequality constants over random runs"},
        {"attractor", suite_attractor, [](const ExperimentConfig& c) { return bool(c.attractor); },
         "attractor cloud and attraction distances"},
        {"dimension", suite_dimension, [](const ExperimentConfig& c) { return bool(c.attractor); },
         "correlation dimension oracles, translation invariance and bounds"},
        {"net-transport", suite_net_transport, [](const ExperimentConfig& c) { return bool(c.attractor); },
         "transport of L2 nets to L^gamma nets"},
    };
    return suites;
}

inline const SuiteInfo* find_suite(const std::string& name) {
    for (const auto& s : suite_registry())
        if (name == s.name)
            return &s;
    return nullptr;
}

/// A suite whose documented precondition fails reports a failed check instead of aborting the run.
inline SuiteResult run_suite(const SuiteInfo& suite, const ExperimentConfig& cfg, RunContext& ctx) {
    try {
        return suite.run(cfg, ctx);
    } catch (const PreconditionError& e) {
        SuiteResult r{suite.name};
        r.checks.push_back(check_true("precondition", false, json{{"message", e.what()}}));
        return r;
    }
}

struct RunOutcome {
    std::vector<SuiteResult> suites;
    json report;
    json timings;
    std::optional<BlowUpError> blow_up;

    bool pass() const {
        if (blow_up)
            return false;
        for (const auto& s : suites)
            if (!s.pass())
                return false;
        return true;
    }

    std::string report_text() const { return report.dump(2) + "\n"; }
};

/// Runs `subcommand` (a suite name or "all"). ConfigError propagates; a blow-up
/// ends the run with a witness in the report.
inline RunOutcome run_experiment(const std::string& subcommand, const ExperimentConfig& cfg, RunContext& ctx) {
    std::vector<const SuiteInfo*> plan;
    if (subcommand == "all") {
        for (const auto& s : suite_registry())
            if (s.selected(cfg))
                plan.push_back(&s);
    } else if (const SuiteInfo* s = find_suite(subcommand)) {
        plan.push_back(s);
    } else {
        throw ParameterError("unknown subcommand '" + subcommand + "'");
    }
    RunOutcome out;
    out.timings = json{{"subcommand", subcommand}, {"suites", json::object()}};
    const auto start = std::chrono::steady_clock::now();
    for (const SuiteInfo* s : plan) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            out.suites.push_back(run_suite(*s, cfg, ctx));
        } catch (const BlowUpError& e) {
            out.blow_up = e;
            out.report["blow_up"] = json{{"suite", s->name}, {"time", e.time()}, {"message", e.what()}};
            break;
        }
        out.timings["suites"][s->name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    out.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report;
    report["subcommand"] = subcommand;
    report["config"] = json{{"name", cfg.name}, {"hash", content_hash(cfg.source)}, {"seed", cfg.seed},
                            {"text", cfg.source}};
    report["suites"] = json::array();
    json failed = json::array();
    for (const auto& s : out.suites) {
        report["suites"].push_back(s.to_json());
        for (const auto& c : s.checks)
            if (c.gated && !c.pass)
                failed.push_back(s.suite + "/" + c.name);
    }
    if (out.report.contains("blow_up"))
        report["blow_up"] = out.report["blow_up"];
    report["summary"] = json{{"pass", out.pass()}, {"suites", out.suites.size()}, {"failed", failed}};
    out.report = std::move(report);
    return out;
}

} // namespace rdlab

#endif

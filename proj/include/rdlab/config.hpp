#ifndef RDLAB_CONFIG_HPP
#define RDLAB_CONFIG_HPP

// Experiment configuration read from YAML. Every map is walked against a fixed
// key set: unknown keys, wrong types and out-of-range values raise ConfigError
// with the line and dotted field path. Schema reference: README.md.

#include "rdlab/attractor.hpp"
#include "rdlab/domain.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/io.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/solver.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdlab {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string field, const std::string& msg)
        : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                             (field.empty() ? "" : field + ": ") + msg),
          line_(line), field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

namespace detail {

/// One YAML map with key tracking; finish() rejects keys never asked for.
class YamlSection {
public:
    YamlSection(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            fail(node_, "", "expected a mapping");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
    }

    double number(const std::string& key, double fallback) {
        if (!has(key))
            return fallback;
        return as_number(node_[key], key);
    }

    double required_number(const std::string& key) {
        if (!has(key))
            fail(node_, key, "required field is missing");
        return as_number(node_[key], key);
    }

    long long integer(const std::string& key, long long fallback) {
        if (!has(key))
            return fallback;
        const double v = as_number(node_[key], key);
        if (v != std::floor(v) || std::abs(v) > 9.0e15)
            fail(node_[key], key, "expected an integer");
        return static_cast<long long>(v);
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        if (!has(key))
            return fallback;
        try {
            return node_[key].as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail(node_[key], key, "expected a non-negative 64-bit integer");
        }
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key))
            return fallback;
        const YAML::Node n = node_[key];
        if (!n.IsScalar())
            fail(n, key, "expected a string");
        return n.Scalar();
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
        if (!has(key))
            return fallback;
        const YAML::Node n = node_[key];
        if (!n.IsSequence())
            fail(n, key, "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i)
            out.push_back(as_number(n[i], key + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::optional<YamlSection> section(const std::string& key) {
        if (!has(key))
            return std::nullopt;
        return YamlSection(node_[key], join(key));
    }

    void finish() const {
        if (!node_ || !node_.IsMap())
            return;
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            const std::string k = it->first.as<std::string>();
            if (!seen_.count(k))
                fail(it->first, k, "unknown key");
        }
    }

    [[noreturn]] void fail(const YAML::Node& at, const std::string& key, const std::string& msg) const {
        const int line = at ? at.Mark().line + 1 : (node_ ? node_.Mark().line + 1 : 0);
        throw ConfigError(line, join(key), msg);
    }

    void require(bool ok, const std::string& key, const std::string& msg) const {
        if (!ok)
            fail(node_ && node_.IsMap() && node_[key] ? node_[key] : node_, key, msg);
    }

    const std::string& path() const { return path_; }

private:
    std::string join(const std::string& key) const {
        if (key.empty())
            return path_;
        return path_.empty() ? key : path_ + "." + key;
    }

    double as_number(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar())
            fail(n, key, "expected a number");
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v))
                fail(n, key, "expected a finite number");
            return v;
        } catch (const YAML::Exception&) {
            fail(n, key, "expected a number, got '" + n.Scalar() + "'");
        }
    }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Schema

struct ForcingConfig {
    std::string kind = "zero"; ///< zero | eigenmode | constant
    double amplitude = 0.0;
    int mode = 1;

    Field build(const DomainSpec& d) const {
        if (kind == "zero")
            return Field(d);
        if (kind == "constant")
            return Field::sample(d, [&](Point) { return amplitude; });
        return eigenmode(d, mode, 1) *= amplitude;
    }
};

struct ProblemConfig {
    double lambda = 1.0;
    NonlinearitySpec f{{0.0, -1.0, 0.0, 1.0}, std::nullopt};
    ForcingConfig g;
    DomainSpec domain;
    std::optional<DissipativityConstants> constants;
    std::optional<LipschitzGrowthConstants> growth;

    ProblemSpec build() const { return ProblemSpec(lambda, f, g.build(domain)); }
};

struct SolverBlock {
    double dt = 1e-4;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_cn_ab2;
    int record_stride = 100;

    SolverConfig config() const { return SolverConfig{dt, t_end, scheme, record_stride, false}; }
};

struct InitialBlock {
    std::string kind = "eigenmode"; ///< eigenmode | eigenmode_mixture | spiky | random_coefficients
    int mode = 1;
    double amplitude = 1.0;         ///< eigenmode amplitude, or L^2 norm for the random families
};

struct LinearOracleBlock {
    double time = 0.1;
    std::vector<double> order_dts{4e-3, 2e-3, 1e-3, 5e-4};
};

struct CertifyBlock {
    ScanSpec scan;
};

struct MonotonicityBlock {
    std::vector<double> exponents{4.0, 3.0};
    int samples = 20000;
};

struct CorollaryBlock {
    long long triples = 1000000;
    double s_range = 20.0;
    double r_max = 6.0;
};

struct ExponentsBlock {
    int k_max = 50;
    int random_p = 100;
    double p_max = 10.0;
};

struct GronwallBlock {
    int pairs = 50;
    double t_end = 2.0;
    double radius = 1.0;
    double min_norm = 1e-3;
    double max_norm = 1.0;
    int record_stride = 10;
};

struct AkBkBlock {
    int k_max = 3;
    double t_end = 1.0;
    std::vector<double> norms{1e-1, 1e-3, 1e-6};
    int directions = 3;
    double radius = 1.0;
    int record_stride = 10;
};

struct SmoothingBlock {
    std::vector<double> gammas{2.0, 4.0, 6.0, 8.0};
    int pairs = 100;
    double radius = 1.0;
    double min_norm = 1e-6;
    double max_norm = 1.0;
    double gamma2_lambda = 2.0; ///< lambda of the variant used for the c_2 <= e^mu check
    int gamma2_pairs = 30;
};

struct H1SmoothingBlock {
    int pairs = 60;
    double radius = 1.0;
    double min_norm = 1e-6;
    double max_norm = 1.0;
    double small_norm_cutoff = 1e-2;
};

struct LpBoundBlock {
    double eps = 0.1;
    double horizon = 2.0;
    int k_max = 2;
    double l2_norm = 1.0;
    std::vector<double> lp_norms{1.0, 10.0, 100.0};
    std::vector<double> windows{0.05, 0.1, 0.2};
    double center = 0.5;
    int record_stride = 10;
};

struct EnergyBlock {
    int runs = 50;
    double radius = 10.0;
    double t_end = 1.0;
    int record_stride = 50;
};

struct AttractorBlock {
    AttractorSampling sampling;
    int bundle_size = 10;
    double bundle_radius = 5.0;
    double t_attract = 20.0;
    double record_interval = 0.5;
    std::vector<double> eps{0.1, 0.05, 0.02};
    double transport_gamma = 4.0;
    int smoothing_pairs = 60;
    double smoothing_radius = 3.0;
    std::vector<double> bound_gammas{4.0, 6.0};
    int synthetic_points = 800;
};

struct ExperimentConfig {
    std::string source;  ///< raw text, for the content hash
    std::string name;
    std::uint64_t seed = 1;
    ProblemConfig problem;
    SolverBlock solver;
    std::optional<InitialBlock> initial;
    std::optional<LinearOracleBlock> linear_oracle;
    std::optional<CertifyBlock> certify;
    std::optional<MonotonicityBlock> monotonicity;
    std::optional<CorollaryBlock> corollary;
    std::optional<ExponentsBlock> exponents;
    std::optional<GronwallBlock> gronwall;
    std::optional<AkBkBlock> ak_bk;
    std::optional<SmoothingBlock> smoothing;
    std::optional<H1SmoothingBlock> h1_smoothing;
    std::optional<LpBoundBlock> lp_bound;
    std::optional<EnergyBlock> energy;
    std::optional<AttractorBlock> attractor;
};

namespace detail {

inline Scheme parse_scheme(YamlSection& s, const std::string& key, Scheme fallback) {
    const std::string v = s.text(key, scheme_name(fallback));
    if (v == "imex_euler")
        return Scheme::imex_euler;
    if (v == "imex_cn_ab2")
        return Scheme::imex_cn_ab2;
    s.fail(YAML::Node(), key, "unknown scheme '" + v + "' (imex_euler | imex_cn_ab2)");
}

inline void positive(YamlSection& s, const std::string& key, double v) { s.require(v > 0.0, key, "must be positive"); }

inline int positive_int(YamlSection& s, const std::string& key, long long fallback) {
    const long long v = s.integer(key, fallback);
    s.require(v >= 1 && v <= 2147483647LL, key, "must be a positive integer");
    return static_cast<int>(v);
}

inline std::vector<double> positive_list(YamlSection& s, const std::string& key, const std::vector<double>& fallback) {
    auto v = s.numbers(key, fallback);
    s.require(!v.empty(), key, "must not be empty");
    for (double x : v)
        s.require(x > 0.0, key, "entries must be positive");
    return v;
}

inline ProblemConfig parse_problem(YamlSection s) {
    ProblemConfig p;
    p.lambda = s.number("lambda", p.lambda);
    s.require(p.lambda > 0.0, "lambda", "must be positive");
    p.f.coefficients = s.numbers("f", p.f.coefficients);
    s.require(!p.f.coefficients.empty(), "f", "needs at least one coefficient");
    if (s.has("p")) {
        p.f.exponent = s.number("p", 0.0);
        s.require(*p.f.exponent > 2.0, "p", "must exceed 2");
    }
    if (auto g = s.section("g")) {
        p.g.kind = g->text("kind", p.g.kind);
        g->require(p.g.kind == "zero" || p.g.kind == "eigenmode" || p.g.kind == "constant", "kind",
                   "must be zero | eigenmode | constant");
        p.g.amplitude = g->number("amplitude", p.g.amplitude);
        p.g.mode = positive_int(*g, "mode", p.g.mode);
        g->finish();
    }
    if (auto d = s.section("domain")) {
        p.domain.dimension = static_cast<int>(d->integer("dimension", p.domain.dimension));
        d->require(p.domain.dimension == 1 || p.domain.dimension == 2, "dimension", "must be 1 or 2");
        p.domain.side_length = d->number("length", p.domain.side_length);
        positive(*d, "length", p.domain.side_length);
        p.domain.points_per_axis = static_cast<int>(d->integer("points", p.domain.points_per_axis));
        d->require(p.domain.points_per_axis >= 8, "points", "must be at least 8");
        const std::string ev = d->text("eigenvalues", "continuum");
        d->require(ev == "continuum" || ev == "discrete", "eigenvalues", "must be continuum | discrete");
        p.domain.eigenvalues = ev == "discrete" ? EigenvalueConvention::discrete : EigenvalueConvention::continuum;
        d->finish();
    }
    if (auto c = s.section("constants")) {
        DissipativityConstants k;
        k.p = p.f.p();
        k.kappa = c->required_number("kappa");
        k.l = c->required_number("l");
        k.alpha = c->required_number("alpha");
        k.beta = c->required_number("beta");
        k.sigma = c->required_number("sigma");
        positive(*c, "kappa", k.kappa);
        positive(*c, "l", k.l);
        positive(*c, "alpha", k.alpha);
        positive(*c, "beta", k.beta);
        positive(*c, "sigma", k.sigma);
        c->finish();
        p.constants = k;
    }
    if (auto c = s.section("growth")) {
        LipschitzGrowthConstants k;
        k.kappa0 = c->required_number("kappa0");
        k.l0 = c->required_number("l0");
        positive(*c, "kappa0", k.kappa0);
        positive(*c, "l0", k.l0);
        c->finish();
        p.growth = k;
    }
    s.finish();
    return p;
}

} // namespace detail

/// Parses and validates a configuration; throws ConfigError.
inline ExperimentConfig parse_config(const std::string& text) {
    using detail::positive;
    using detail::positive_int;
    using detail::positive_list;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.mark.line + 1, "", "YAML syntax error: " + e.msg);
    }
    if (!root || root.IsNull())
        throw ConfigError(0, "", "empty configuration");
    detail::YamlSection top(root, "");
    if (!root.IsMap())
        top.fail(root, "", "top level must be a mapping");
    ExperimentConfig c;
    c.source = text;
    c.name = top.text("name", "");
    c.seed = top.seed("seed", c.seed);
    if (auto s = top.section("problem"))
        c.problem = detail::parse_problem(*s);
    if (auto s = top.section("solver")) {
        c.solver.dt = s->number("dt", c.solver.dt);
        positive(*s, "dt", c.solver.dt);
        c.solver.t_end = s->number("t_end", c.solver.t_end);
        positive(*s, "t_end", c.solver.t_end);
        s->require(c.solver.dt <= c.solver.t_end, "dt", "must not exceed t_end");
        c.solver.scheme = detail::parse_scheme(*s, "scheme", c.solver.scheme);
        c.solver.record_stride = positive_int(*s, "record_stride", c.solver.record_stride);
        s->finish();
    }
    if (auto s = top.section("initial")) {
        InitialBlock b;
        b.kind = s->text("kind", b.kind);
        s->require(b.kind == "eigenmode" || b.kind == "eigenmode_mixture" || b.kind == "spiky" ||
                       b.kind == "random_coefficients",
                   "kind", "must be eigenmode | eigenmode_mixture | spiky | random_coefficients");
        b.mode = positive_int(*s, "mode", b.mode);
        b.amplitude = s->number("amplitude", b.amplitude);
        s->finish();
        c.initial = b;
    }
    if (auto s = top.section("linear_oracle")) {
        LinearOracleBlock b;
        b.time = s->number("time", b.time);
        positive(*s, "time", b.time);
        b.order_dts = positive_list(*s, "order_dts", b.order_dts);
        s->require(b.order_dts.size() >= 2, "order_dts", "needs at least two step sizes");
        s->finish();
        c.linear_oracle = b;
    }
    if (auto s = top.section("certify")) {
        CertifyBlock b;
        b.scan.half_range = s->number("half_range", b.scan.half_range);
        positive(*s, "half_range", b.scan.half_range);
        b.scan.step = s->number("step", b.scan.step);
        positive(*s, "step", b.scan.step);
        s->require(b.scan.half_range / b.scan.step <= 1e8, "step", "scan would exceed 2e8 points");
        s->finish();
        c.certify = b;
    }
    if (auto s = top.section("monotonicity")) {
        MonotonicityBlock b;
        b.exponents = positive_list(*s, "exponents", b.exponents);
        for (double p : b.exponents)
            s->require(p > 2.0, "exponents", "entries must exceed 2");
        b.samples = positive_int(*s, "samples", b.samples);
        s->finish();
        c.monotonicity = b;
    }
    if (auto s = top.section("corollary")) {
        CorollaryBlock b;
        b.triples = s->integer("triples", b.triples);
        s->require(b.triples >= 1, "triples", "must be positive");
        b.s_range = s->number("s_range", b.s_range);
        positive(*s, "s_range", b.s_range);
        b.r_max = s->number("r_max", b.r_max);
        s->require(b.r_max >= 0.0, "r_max", "must be non-negative");
        s->finish();
        c.corollary = b;
    }
    if (auto s = top.section("exponents")) {
        ExponentsBlock b;
        b.k_max = positive_int(*s, "k_max", b.k_max);
        b.random_p = positive_int(*s, "random_p", b.random_p);
        b.p_max = s->number("p_max", b.p_max);
        s->require(b.p_max > 2.0, "p_max", "must exceed 2");
        s->finish();
        c.exponents = b;
    }
    if (auto s = top.section("gronwall")) {
        GronwallBlock b;
        b.pairs = positive_int(*s, "pairs", b.pairs);
        b.t_end = s->number("t_end", b.t_end);
        positive(*s, "t_end", b.t_end);
        b.radius = s->number("radius", b.radius);
        positive(*s, "radius", b.radius);
        b.min_norm = s->number("min_norm", b.min_norm);
        positive(*s, "min_norm", b.min_norm);
        b.max_norm = s->number("max_norm", b.max_norm);
        s->require(b.max_norm >= b.min_norm, "max_norm", "must be >= min_norm");
        b.record_stride = positive_int(*s, "record_stride", b.record_stride);
        s->finish();
        c.gronwall = b;
    }
    if (auto s = top.section("ak_bk")) {
        AkBkBlock b;
        b.k_max = positive_int(*s, "k_max", b.k_max);
        b.t_end = s->number("t_end", b.t_end);
        positive(*s, "t_end", b.t_end);
        b.norms = positive_list(*s, "norms", b.norms);
        b.directions = positive_int(*s, "directions", b.directions);
        b.radius = s->number("radius", b.radius);
        positive(*s, "radius", b.radius);
        b.record_stride = positive_int(*s, "record_stride", b.record_stride);
        s->finish();
        c.ak_bk = b;
    }
    if (auto s = top.section("smoothing")) {
        SmoothingBlock b;
        b.gammas = positive_list(*s, "gammas", b.gammas);
        for (double g : b.gammas)
            s->require(g >= 2.0, "gammas", "entries must be >= 2");
        b.pairs = positive_int(*s, "pairs", b.pairs);
        b.radius = s->number("radius", b.radius);
        positive(*s, "radius", b.radius);
        b.min_norm = s->number("min_norm", b.min_norm);
        positive(*s, "min_norm", b.min_norm);
        b.max_norm = s->number("max_norm", b.max_norm);
        s->require(b.max_norm >= b.min_norm, "max_norm", "must be >= min_norm");
        b.gamma2_lambda = s->number("gamma2_lambda", b.gamma2_lambda);
        positive(*s, "gamma2_lambda", b.gamma2_lambda);
        b.gamma2_pairs = positive_int(*s, "gamma2_pairs", b.gamma2_pairs);
        s->finish();
        c.smoothing = b;
    }
    if (auto s = top.section("h1_smoothing")) {
        H1SmoothingBlock b;
        b.pairs = positive_int(*s, "pairs", b.pairs);
        b.radius = s->number("radius", b.radius);
        positive(*s, "radius", b.radius);
        b.min_norm = s->number("min_norm", b.min_norm);
        positive(*s, "min_norm", b.min_norm);
        b.max_norm = s->number("max_norm", b.max_norm);
        s->require(b.max_norm >= b.min_norm, "max_norm", "must be >= min_norm");
        b.small_norm_cutoff = s->number("small_norm_cutoff", b.small_norm_cutoff);
        positive(*s, "small_norm_cutoff", b.small_norm_cutoff);
        s->finish();
        c.h1_smoothing = b;
    }
    if (auto s = top.section("lp_bound")) {
        LpBoundBlock b;
        b.eps = s->number("eps", b.eps);
        s->require(b.eps > 0.0 && b.eps < 1.0, "eps", "must lie in (0, 1)");
        b.horizon = s->number("horizon", b.horizon);
        s->require(b.horizon > b.eps, "horizon", "must exceed eps");
        b.k_max = positive_int(*s, "k_max", b.k_max);
        b.l2_norm = s->number("l2_norm", b.l2_norm);
        positive(*s, "l2_norm", b.l2_norm);
        b.lp_norms = positive_list(*s, "lp_norms", b.lp_norms);
        b.windows = positive_list(*s, "windows", b.windows);
        b.center = s->number("center", b.center);
        positive(*s, "center", b.center);
        b.record_stride = positive_int(*s, "record_stride", b.record_stride);
        s->finish();
        c.lp_bound = b;
    }
    if (auto s = top.section("energy")) {
        EnergyBlock b;
        b.runs = positive_int(*s, "runs", b.runs);
        b.radius = s->number("radius", b.radius);
        positive(*s, "radius", b.radius);
        b.t_end = s->number("t_end", b.t_end);
        positive(*s, "t_end", b.t_end);
        b.record_stride = positive_int(*s, "record_stride", b.record_stride);
        s->finish();
        c.energy = b;
    }
    if (auto s = top.section("attractor")) {
        AttractorBlock b;
        auto& a = b.sampling;
        a.ensemble_size = positive_int(*s, "ensemble_size", static_cast<long long>(a.ensemble_size));
        a.t_spin = s->number("t_spin", a.t_spin);
        positive(*s, "t_spin", a.t_spin);
        a.n_samples = positive_int(*s, "n_samples", static_cast<long long>(a.n_samples));
        a.sample_spacing = s->number("sample_spacing", a.sample_spacing);
        positive(*s, "sample_spacing", a.sample_spacing);
        s->require(a.sample_spacing < a.t_spin, "sample_spacing", "must be shorter than t_spin");
        a.amplitude_min = s->number("amplitude_min", a.amplitude_min);
        positive(*s, "amplitude_min", a.amplitude_min);
        a.amplitude_max = s->number("amplitude_max", a.amplitude_max);
        s->require(a.amplitude_max >= a.amplitude_min, "amplitude_max", "must be >= amplitude_min");
        a.spin_tolerance = s->number("spin_tolerance", a.spin_tolerance);
        positive(*s, "spin_tolerance", a.spin_tolerance);
        b.bundle_size = positive_int(*s, "bundle_size", b.bundle_size);
        b.bundle_radius = s->number("bundle_radius", b.bundle_radius);
        positive(*s, "bundle_radius", b.bundle_radius);
        b.t_attract = s->number("t_attract", b.t_attract);
        positive(*s, "t_attract", b.t_attract);
        b.record_interval = s->number("record_interval", b.record_interval);
        positive(*s, "record_interval", b.record_interval);
        b.eps = positive_list(*s, "eps", b.eps);
        for (double e : b.eps)
            s->require(e <= 1.0, "eps", "entries must lie in (0, 1]");
        b.transport_gamma = s->number("transport_gamma", b.transport_gamma);
        s->require(b.transport_gamma >= 2.0, "transport_gamma", "must be >= 2");
        b.smoothing_pairs = positive_int(*s, "smoothing_pairs", b.smoothing_pairs);
        b.smoothing_radius = s->number("smoothing_radius", b.smoothing_radius);
        positive(*s, "smoothing_radius", b.smoothing_radius);
        b.bound_gammas = positive_list(*s, "bound_gammas", b.bound_gammas);
        for (double g : b.bound_gammas)
            s->require(g >= 2.0, "bound_gammas", "entries must be >= 2");
        b.synthetic_points = positive_int(*s, "synthetic_points", b.synthetic_points);
        s->finish();
        c.attractor = b;
    }
    top.finish();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const StateError& e) {
        throw ConfigError(0, "", e.what());
    }
    return parse_config(text);
}

/// Git blob hash: SHA-1 of "blob <size>\0" + content, as lowercase hex.
inline std::string content_hash(const std::string& content) {
    const std::string data = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw StateError("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

} // namespace rdlab

#endif

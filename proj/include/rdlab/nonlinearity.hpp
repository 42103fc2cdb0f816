#ifndef RDLAB_NONLINEARITY_HPP
#define RDLAB_NONLINEARITY_HPP

// Polynomial nonlinearities f, certification of the dissipativity conditions
//   (f1)  f'(s)   >= kappa |s|^{p-2} - l
//   (f2)  f(s) s  >= alpha |s|^p - beta
//   (f3)  |f(s)|  <= sigma |s|^{p-1} + sigma
//   (2.4) alpha   <= kappa / (p-1)
// on a scan grid plus a leading-term argument for |s| beyond the grid, and the
// splitting f = f1 + f2 with f1(s) = (alpha/2)|s|^{p-2}s - sigma.

#include "rdlab/domain.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdlab {

/// f(s) = sum_j b_j s^j with coefficients stored by ascending power.
struct NonlinearitySpec {
    std::vector<double> coefficients;
    /// Growth exponent p; defaults to degree + 1.
    std::optional<double> exponent;

    int degree() const {
        for (int j = static_cast<int>(coefficients.size()) - 1; j >= 0; --j)
            if (coefficients[j] != 0.0)
                return j;
        return -1;
    }

    double p() const { return exponent ? *exponent : degree() + 1.0; }

    double leading() const {
        const int d = degree();
        return d < 0 ? 0.0 : coefficients[d];
    }

    /// Checks p > 2 and a positive leading coefficient.
    void validate_dissipative() const {
        if (!(p() > 2.0))
            throw ParameterError("nonlinearity needs p > 2, got p = " + std::to_string(p()));
        if (!(leading() > 0.0))
            throw ParameterError("nonlinearity needs a positive leading coefficient");
    }

    bool is_zero() const { return degree() < 0; }
};

namespace detail {

template <class T>
T horner(std::span<const double> b, T s) {
    T acc = 0;
    for (std::size_t j = b.size(); j-- > 0;)
        acc = acc * s + static_cast<T>(b[j]);
    return acc;
}

template <class T>
T horner_derivative(std::span<const double> b, T s) {
    T acc = 0;
    for (std::size_t j = b.size(); j-- > 1;)
        acc = acc * s + static_cast<T>(j) * static_cast<T>(b[j]);
    return acc;
}

inline double checked(double v, const char* what) {
    if (!std::isfinite(v))
        throw EvaluationError(std::string(what) + " overflowed to a non-finite value");
    return v;
}

} // namespace detail

inline double evaluate(const NonlinearitySpec& f, double s) {
    return detail::checked(detail::horner<double>(f.coefficients, s), "nonlinearity evaluation");
}

inline double evaluate_derivative(const NonlinearitySpec& f, double s) {
    return detail::checked(detail::horner_derivative<double>(f.coefficients, s), "nonlinearity derivative");
}

/// f(a+h) - f(a) from the Taylor coefficients of f at a, so every term carries a factor h.
inline double exact_difference(const NonlinearitySpec& f, double a, double h) {
    const int d = f.degree();
    if (d < 1 || h == 0.0)
        return 0.0;
    // Taylor shift: q[m] = f^{(m)}(a) / m!
    double q[32];
    std::vector<double> big;
    double* c = q;
    if (d >= 32) {
        big.resize(d + 1);
        c = big.data();
    }
    for (int j = 0; j <= d; ++j)
        c[j] = f.coefficients[j];
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j)
            c[j] += a * c[j + 1];
    double acc = c[d];
    for (int m = d - 1; m >= 1; --m)
        acc = acc * h + c[m];
    return detail::checked(acc * h, "exact difference");
}

struct DissipativityConstants {
    double p = 4.0;
    double kappa = 0.0;
    double l = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;

    void validate() const {
        if (!(p > 2.0))
            throw ParameterError("dissipativity constants need p > 2");
        for (double v : {kappa, l, alpha, beta, sigma})
            if (!(v > 0.0) || !std::isfinite(v))
                throw ParameterError("dissipativity constants must be positive and finite");
    }

    double alpha_margin() const { return kappa / (p - 1.0) - alpha; }
};

/// Constants of |f'(s)| <= kappa0 |s|^{p-2} + l0.
struct LipschitzGrowthConstants {
    double kappa0 = 0.0;
    double l0 = 0.0;
};

struct ScanSpec {
    double half_range = 50.0;
    double step = 1e-3;

    void validate() const {
        if (!(half_range > 0.0) || !(step > 0.0) || step > half_range || !std::isfinite(half_range))
            throw ParameterError("invalid scan range");
        if (2.0 * half_range / step > 2e8)
            throw ParameterError("scan grid too fine");
    }

    std::size_t points() const { return static_cast<std::size_t>(std::llround(2.0 * half_range / step)) + 1; }

    long double at(std::size_t i) const {
        return -static_cast<long double>(half_range) + static_cast<long double>(i) * step;
    }
};

// ---------------------------------------------------------------------------
// Tail certificates

/// sum_i c_i t^{e_i} for t >= S; used for |s| beyond the scan range.
class GeneralizedPolynomial {
public:
    void add(long double exponent, long double coefficient) {
        terms_[exponent] += coefficient;
        scale_ = std::max(scale_, std::abs(coefficient));
    }

    GeneralizedPolynomial& operator+=(const GeneralizedPolynomial& o) {
        for (auto [e, c] : o.terms_)
            add(e, c);
        scale_ = std::max(scale_, o.scale_);
        return *this;
    }

    GeneralizedPolynomial scaled(long double s) const {
        GeneralizedPolynomial out;
        for (auto [e, c] : terms_)
            out.add(e, s * c);
        out.scale_ = std::abs(s) * scale_;
        return out;
    }

    GeneralizedPolynomial shifted_exponent(long double by) const {
        GeneralizedPolynomial out;
        for (auto [e, c] : terms_)
            out.add(e + by, c);
        out.scale_ = scale_;
        return out;
    }

    /// Certifies q(t) >= 0 for all t >= S (S >= 1): after exact merging, either q
    /// vanishes identically or the top coefficient dominates every negative term
    /// at t = S, since t^{e_i - e_top} only decreases beyond S.
    bool nonnegative_beyond(long double S) const {
        if (S < 1.0L)
            return false;
        const long double drop = 64.0L * std::numeric_limits<long double>::epsilon() * scale_;
        std::vector<std::pair<long double, long double>> live;
        for (auto [e, c] : terms_)
            if (std::abs(c) > drop)
                live.emplace_back(e, c);
        if (live.empty())
            return true;
        const auto [e_top, c_top] = live.back();
        if (c_top <= 0.0L)
            return false;
        long double negative = 0.0L;
        for (std::size_t i = 0; i + 1 < live.size(); ++i)
            if (live[i].second < 0.0L)
                negative += -live[i].second * std::pow(S, live[i].first - e_top);
        return c_top >= negative;
    }

private:
    std::map<long double, long double> terms_;
    long double scale_ = 0.0L;
};

namespace detail {

/// f(side * t) as a polynomial in t >= 0.
inline GeneralizedPolynomial polynomial_tail(std::span<const double> b, int side) {
    GeneralizedPolynomial q;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] != 0.0)
            q.add(static_cast<long double>(j), (side < 0 && (j % 2 == 1) ? -1.0L : 1.0L) * b[j]);
    return q;
}

inline GeneralizedPolynomial polynomial_derivative_tail(std::span<const double> b, int side) {
    GeneralizedPolynomial q;
    for (std::size_t j = 1; j < b.size(); ++j)
        if (b[j] != 0.0)
            q.add(static_cast<long double>(j - 1), (side < 0 && ((j - 1) % 2 == 1) ? -1.0L : 1.0L) * j * b[j]);
    return q;
}

inline GeneralizedPolynomial monomial(long double exponent, long double coefficient) {
    GeneralizedPolynomial q;
    q.add(exponent, coefficient);
    return q;
}

} // namespace detail

/// Adapter exposing a NonlinearitySpec to the certification templates.
struct PolynomialFunction {
    const NonlinearitySpec& spec;

    long double value(long double s) const { return detail::horner<long double>(spec.coefficients, s); }
    long double derivative(long double s) const { return detail::horner_derivative<long double>(spec.coefficients, s); }
    GeneralizedPolynomial value_tail(int side) const { return detail::polynomial_tail(spec.coefficients, side); }
    GeneralizedPolynomial derivative_tail(int side) const {
        return detail::polynomial_derivative_tail(spec.coefficients, side);
    }
    /// Scan-range heuristic S >= 2 sum_{j<d} |b_j| / b_d.
    bool range_adequate(double S) const {
        const int d = spec.degree();
        if (d < 1)
            return true;
        double s = 0.0;
        for (int j = 0; j < d; ++j)
            s += std::abs(spec.coefficients[j]);
        return S >= 2.0 * s / spec.coefficients[d];
    }
};

// ---------------------------------------------------------------------------
// Certification

struct ConditionResult {
    std::string name;
    double worst_margin = 0.0;
    double argmin = 0.0;
    bool tail_certified = true;
    bool pass = false;
};

struct CertificationReport {
    std::vector<ConditionResult> conditions;
    bool scan_range_adequate = true;
    bool pass = false;

    const ConditionResult& condition(const std::string& name) const {
        for (const auto& c : conditions)
            if (c.name == name)
                return c;
        throw ParameterError("no condition named " + name);
    }
};

inline constexpr double certification_tolerance = 1e-12;

namespace detail {

struct MarginTracker {
    long double worst = std::numeric_limits<long double>::infinity();
    long double where = 0.0L;
    void update(long double margin, long double s) {
        if (margin < worst) {
            worst = margin;
            where = s;
        }
    }
};

inline ConditionResult finish(std::string name, const MarginTracker& m, bool tail) {
    ConditionResult r;
    r.name = std::move(name);
    r.worst_margin = static_cast<double>(m.worst);
    r.argmin = static_cast<double>(m.where);
    r.tail_certified = tail;
    r.pass = tail && r.worst_margin >= -certification_tolerance;
    return r;
}

inline long double abs_pow_ld(long double s, long double e) {
    const long double a = std::abs(s);
    if (e == 0.0L)
        return 1.0L;
    if (e == std::floor(e) && e > 0.0L && e <= 32.0L) {
        long double r = 1.0L;
        for (int i = 0; i < static_cast<int>(e); ++i)
            r *= a;
        return r;
    }
    return std::pow(a, e);
}

} // namespace detail

/// Certifies (f1)-(f3) and (2.4) for any function exposing value/derivative and their tails.
/// Condition names are prefix+"1".."3" and the (2.4)-type bound is named alpha_name.
template <class Fn>
CertificationReport certify_dissipativity(const Fn& f, const DissipativityConstants& c, const ScanSpec& scan,
                                          const std::string& prefix, const std::string& alpha_name) {
    c.validate();
    scan.validate();
    const long double p = c.p;
    detail::MarginTracker m1, m2, m3;
    const std::size_t n = scan.points();
    for (std::size_t i = 0; i < n; ++i) {
        const long double s = scan.at(i);
        const long double v = f.value(s);
        const long double dv = f.derivative(s);
        m1.update(dv - (c.kappa * detail::abs_pow_ld(s, p - 2) - c.l), s);
        m2.update(v * s - (c.alpha * detail::abs_pow_ld(s, p) - c.beta), s);
        m3.update(c.sigma * detail::abs_pow_ld(s, p - 1) + c.sigma - std::abs(v), s);
    }

    const long double S = scan.half_range;
    bool tail1 = true, tail2 = true, tail3 = true;
    for (int side : {+1, -1}) {
        GeneralizedPolynomial q1 = f.derivative_tail(side);
        q1 += detail::monomial(p - 2, -c.kappa);
        q1 += detail::monomial(0, c.l);
        tail1 = tail1 && q1.nonnegative_beyond(S);

        GeneralizedPolynomial q2 = f.value_tail(side).shifted_exponent(1).scaled(side);
        q2 += detail::monomial(p, -c.alpha);
        q2 += detail::monomial(0, c.beta);
        tail2 = tail2 && q2.nonnegative_beyond(S);

        for (int sign : {+1, -1}) {
            GeneralizedPolynomial q3 = f.value_tail(side).scaled(sign);
            q3 += detail::monomial(p - 1, c.sigma);
            q3 += detail::monomial(0, c.sigma);
            tail3 = tail3 && q3.nonnegative_beyond(S);
        }
    }

    CertificationReport report;
    report.conditions.push_back(detail::finish(prefix + "1", m1, tail1));
    report.conditions.push_back(detail::finish(prefix + "2", m2, tail2));
    report.conditions.push_back(detail::finish(prefix + "3", m3, tail3));
    ConditionResult alpha;
    alpha.name = alpha_name;
    alpha.worst_margin = c.alpha_margin();
    alpha.pass = alpha.worst_margin >= -certification_tolerance;
    report.conditions.push_back(alpha);
    if constexpr (requires { f.range_adequate(0.0); })
        report.scan_range_adequate = f.range_adequate(scan.half_range);
    report.pass = std::all_of(report.conditions.begin(), report.conditions.end(),
                              [](const ConditionResult& r) { return r.pass; });
    return report;
}

/// Certifies (f1)-(f3) and (2.4) for a polynomial nonlinearity.
inline CertificationReport certify_conditions(const NonlinearitySpec& f, const DissipativityConstants& c,
                                              const ScanSpec& scan) {
    f.validate_dissipative();
    if (std::abs(c.p - f.p()) > 1e-12)
        throw ParameterError("constants p = " + std::to_string(c.p) + " differ from nonlinearity p = " +
                             std::to_string(f.p()));
    return certify_dissipativity(PolynomialFunction{f}, c, scan, "f", "2.4");
}

/// Certifies |f'(s)| <= kappa0 |s|^{p-2} + l0.
inline CertificationReport certify_f_add(const NonlinearitySpec& f, const LipschitzGrowthConstants& k,
                                         const ScanSpec& scan) {
    f.validate_dissipative();
    scan.validate();
    if (!(k.kappa0 > 0.0) || !(k.l0 > 0.0))
        throw ParameterError("growth constants must be positive");
    const long double p = f.p();
    const PolynomialFunction fn{f};
    detail::MarginTracker m;
    for (std::size_t i = 0, n = scan.points(); i < n; ++i) {
        const long double s = scan.at(i);
        m.update(k.kappa0 * detail::abs_pow_ld(s, p - 2) + k.l0 - std::abs(fn.derivative(s)), s);
    }
    bool tail = true;
    for (int side : {+1, -1})
        for (int sign : {+1, -1}) {
            GeneralizedPolynomial q = fn.derivative_tail(side).scaled(sign);
            q += detail::monomial(p - 2, k.kappa0);
            q += detail::monomial(0, k.l0);
            tail = tail && q.nonnegative_beyond(scan.half_range);
        }
    CertificationReport report;
    report.conditions.push_back(detail::finish("f_add", m, tail));
    report.scan_range_adequate = fn.range_adequate(scan.half_range);
    report.pass = report.conditions.front().pass;
    return report;
}

// ---------------------------------------------------------------------------
// Monotonicity constants of s -> |s|^{p-2}s

struct MonotonicityConstants {
    double c1 = 0.0;     ///< sup estimate inflated by 1%
    double c4 = 0.0;     ///< inf estimate deflated by 1%
    double c1_raw = 0.0;
    double c4_raw = 0.0;
    double c4_argmin_a = 0.0;
    double c4_argmin_b = 0.0;
    std::size_t pairs = 0;
};

namespace detail {
inline double signed_power(double s, double q) { return std::copysign(std::pow(std::abs(s), q), s); }
} // namespace detail

/// Estimates c4 = inf (|a|^{p-2}a - |b|^{p-2}b)(a-b)/|a-b|^p and
/// c1 = sup ||a|^{p-2}a - |b|^{p-2}b| / ((|a|+|b|)^{p-2}|a-b|).
/// Both ratios are homogeneous of degree 0, so pairs are drawn on the unit circle
/// plus log-spaced ratios b = +-rho a and seeded random pairs.
inline MonotonicityConstants monotonicity_constant_oracle(double p, int samples, std::uint64_t seed = 0x5eedULL) {
    if (!(p > 2.0))
        throw ParameterError("monotonicity oracle needs p > 2");
    if (samples < 16)
        throw ParameterError("monotonicity oracle needs at least 16 samples");
    MonotonicityConstants out;
    double c4 = std::numeric_limits<double>::infinity();
    double c1 = 0.0;
    auto visit = [&](double a, double b) {
        const double d = a - b;
        if (d == 0.0)
            return;
        const double diff = detail::signed_power(a, p - 1) - detail::signed_power(b, p - 1);
        const double r4 = diff * d / std::pow(std::abs(d), p);
        const double r1 = std::abs(diff) / (std::pow(std::abs(a) + std::abs(b), p - 2) * std::abs(d));
        if (r4 < c4) {
            c4 = r4;
            out.c4_argmin_a = a;
            out.c4_argmin_b = b;
        }
        c1 = std::max(c1, r1);
        ++out.pairs;
    };
    for (int i = 0; i < samples; ++i) {
        const double theta = 2.0 * std::numbers::pi * (i + 0.5) / samples;
        visit(std::cos(theta), std::sin(theta));
    }
    const int log_points = std::max(16, samples / 4);
    for (int i = 0; i < log_points; ++i) {
        const double rho = std::pow(10.0, -8.0 + 8.0 * i / (log_points - 1));
        visit(1.0, rho);
        visit(1.0, -rho);
    }
    Rng rng(seed);
    for (int i = 0; i < samples; ++i)
        visit(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    out.c4_raw = c4;
    out.c1_raw = c1;
    out.c4 = 0.99 * c4;
    out.c1 = 1.01 * c1;
    return out;
}

// ---------------------------------------------------------------------------
// Decomposition f = f1 + f2

struct Decomposition {
    double p = 0.0;
    double f1_scale = 0.0; ///< alpha/2
    double f1_shift = 0.0; ///< sigma
    double alpha1 = 0.0;
    double sigma1 = 0.0;
    double kappa2 = 0.0;
    double l2 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    double beta2_offset = 0.0; ///< scan max of f1(s)s - (3 alpha/4)|s|^p
    double sigma2 = 0.0;       ///< single constant with |f2| <= sigma2 |s|^{p-1} + sigma2
    double sigma2_power = 0.0; ///< sigma + alpha/2
    double sigma2_const = 0.0; ///< 2 sigma
    MonotonicityConstants monotonicity;

    double f1(double s) const { return f1_scale * detail::signed_power(s, p - 1) - f1_shift; }
    double f1_derivative(double s) const { return f1_scale * (p - 1) * std::pow(std::abs(s), p - 2); }

    DissipativityConstants f2_constants() const {
        return DissipativityConstants{p, kappa2, l2, alpha2, beta2, sigma2};
    }
};

/// f2 = f - f1 exposed to the certification templates.
struct RemainderFunction {
    const NonlinearitySpec& f;
    const Decomposition& d;

    long double value(long double s) const {
        const long double f1 = d.f1_scale * std::copysign(detail::abs_pow_ld(s, d.p - 1), s) - d.f1_shift;
        return detail::horner<long double>(f.coefficients, s) - f1;
    }
    long double derivative(long double s) const {
        return detail::horner_derivative<long double>(f.coefficients, s) -
               d.f1_scale * (d.p - 1) * detail::abs_pow_ld(s, d.p - 2);
    }
    GeneralizedPolynomial value_tail(int side) const {
        GeneralizedPolynomial q = detail::polynomial_tail(f.coefficients, side);
        q += detail::monomial(d.p - 1, -side * static_cast<long double>(d.f1_scale));
        q += detail::monomial(0, d.f1_shift);
        return q;
    }
    GeneralizedPolynomial derivative_tail(int side) const {
        GeneralizedPolynomial q = detail::polynomial_derivative_tail(f.coefficients, side);
        q += detail::monomial(d.p - 2, -static_cast<long double>(d.f1_scale) * (d.p - 1));
        return q;
    }
};

struct DecompositionResult {
    Decomposition decomposition;
    CertificationReport f_report;  ///< (f1)-(f3), (2.4) for f
    CertificationReport f2_report; ///< (f21)-(f24) for f2
};

/// Builds f1, f2 and their constants; requires f to pass certification on `scan`.
inline DecompositionResult decompose(const NonlinearitySpec& f, const DissipativityConstants& c, const ScanSpec& scan,
                                     int oracle_samples = 20000) {
    DecompositionResult out;
    out.f_report = certify_conditions(f, c, scan);
    if (!out.f_report.pass)
        throw PreconditionError("decompose requires f to pass (f1)-(f3) and (2.4)");

    Decomposition& d = out.decomposition;
    d.p = c.p;
    d.f1_scale = 0.5 * c.alpha;
    d.f1_shift = c.sigma;
    d.kappa2 = c.kappa - 0.5 * c.alpha * (c.p - 1.0);
    if (!(d.kappa2 > 0.0))
        throw ParameterError("kappa2 = kappa - (alpha/2)(p-1) must be positive");
    d.alpha2 = 0.25 * c.alpha;
    d.l2 = c.l;

    // f1(s)s <= (3 alpha/4)|s|^p + offset; the offset is the scan maximum.
    long double offset = 0.0L;
    for (std::size_t i = 0, n = scan.points(); i < n; ++i) {
        const long double s = scan.at(i);
        const long double f1s = d.f1_scale * std::copysign(detail::abs_pow_ld(s, d.p - 1), s) - d.f1_shift;
        offset = std::max(offset, f1s * s - 0.75L * c.alpha * detail::abs_pow_ld(s, d.p));
    }
    d.beta2_offset = static_cast<double>(offset);
    d.beta2 = c.beta + d.beta2_offset;
    d.sigma2_power = c.sigma + 0.5 * c.alpha;
    d.sigma2_const = 2.0 * c.sigma;
    d.sigma2 = std::max(d.sigma2_power, d.sigma2_const);

    d.monotonicity = monotonicity_constant_oracle(c.p, oracle_samples);
    d.alpha1 = d.f1_scale * d.monotonicity.c4;
    // (|s1|+|s2|)^{p-2} <= max(1, 2^{p-3}) (|s1|^{p-2} + |s2|^{p-2}) <= ... (1 + |s1|^{p-2} + |s2|^{p-2})
    d.sigma1 = d.f1_scale * d.monotonicity.c1 * std::max(1.0, std::pow(2.0, c.p - 3.0));

    out.f2_report = certify_dissipativity(RemainderFunction{f, d}, d.f2_constants(), scan,
                                          "f2", "f24");
    return out;
}

inline double evaluate_f2(const NonlinearitySpec& f, const Decomposition& d, double s) {
    return evaluate(f, s) - d.f1(s);
}

// ---------------------------------------------------------------------------
// Corollary: (f(s1)-f(s2))(s1-s2)|s1-s2|^r >= alpha1 |s1-s2|^{p+r} - l2 |s1-s2|^{r+2}

struct CorollaryTriple {
    double s1 = 0.0;
    double s2 = 0.0;
    double r = 0.0;
};

struct ViolationReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_relative_margin = std::numeric_limits<double>::infinity();
    CorollaryTriple witness{};

    bool pass() const { return violations == 0; }
};

inline ViolationReport check_corollary(const NonlinearitySpec& f, const Decomposition& d,
                                       std::span<const CorollaryTriple> triples) {
    ViolationReport report;
    for (const auto& t : triples) {
        if (!(t.r >= 0.0))
            throw ParameterError("corollary exponent r must be >= 0");
        const double h = t.s1 - t.s2;
        const double ah = std::abs(h);
        const double diff = exact_difference(f, t.s2, h);
        const double lhs = diff * h * abs_pow(h, t.r);
        const double rhs = d.alpha1 * abs_pow(h, d.p + t.r) - d.l2 * abs_pow(ah, t.r + 2.0);
        const double scale = std::abs(lhs) + std::abs(rhs);
        const double margin = lhs - rhs;
        const double rel = scale > 0.0 ? margin / scale : 0.0;
        ++report.checked;
        if (rel < report.worst_relative_margin) {
            report.worst_relative_margin = rel;
            report.witness = t;
        }
        if (margin < -certification_tolerance * scale)
            ++report.violations;
    }
    return report;
}

inline std::vector<CorollaryTriple> random_corollary_triples(std::size_t n, double s_range, double r_max,
                                                             std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CorollaryTriple> out(n);
    for (auto& t : out) {
        t.s1 = rng.uniform(-s_range, s_range);
        t.s2 = rng.uniform(-s_range, s_range);
        t.r = rng.uniform(0.0, r_max);
    }
    return out;
}

} // namespace rdlab

#endif

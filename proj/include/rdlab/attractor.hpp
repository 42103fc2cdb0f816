#ifndef RDLAB_ATTRACTOR_HPP
#define RDLAB_ATTRACTOR_HPP

// Finite samples of the global attractor, epsilon-nets under L^gamma / H^1_0
// metrics, transport of nets through the time-1 map, and correlation-sum
// dimension estimates.
//
// Correlation dimension lower-bounds the fractal dimension, so a passing upper
// bound here is a necessary condition, not a proof.

#include "rdlab/domain.hpp"
#include "rdlab/ensemble.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/initial_data.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/random.hpp"
#include "rdlab/solver.hpp"
#include "rdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rdlab {

/// Metric on fields: ||.||_gamma or ||grad .||.
struct NormTag {
    enum class Kind { lebesgue, h1 } kind = Kind::lebesgue;
    double gamma = 2.0;

    static NormTag lebesgue(double gamma) {
        detail::require_gamma(gamma);
        return NormTag{Kind::lebesgue, gamma};
    }
    static NormTag h1() { return NormTag{Kind::h1, 0.0}; }

    std::string name() const {
        if (kind == Kind::h1)
            return "H1";
        const double r = std::round(gamma);
        return "L" + (r == gamma ? std::to_string(static_cast<long>(r)) : std::to_string(gamma));
    }

    friend bool operator==(const NormTag&, const NormTag&) = default;
};

inline double field_norm(const Field& f, const NormTag& tag) {
    return tag.kind == NormTag::Kind::h1 ? h1_seminorm(f) : lebesgue_norm(f, tag.gamma);
}

inline double distance(const Field& a, const Field& b, const NormTag& tag) { return field_norm(a - b, tag); }

// ---------------------------------------------------------------------------
// Point clouds

struct PointCloud {
    std::vector<Field> states;
    std::vector<double> times;        ///< sampling time of each state
    std::vector<std::size_t> member;  ///< generating ensemble member
    double t_spin = 0.0;
    double sample_spacing = 0.0;
    std::uint64_t seed = 0;
    double max_spin_increment = 0.0;  ///< max over members of ||u(T_spin) - u(T_spin - spacing)||
    bool spin_up_stabilized = true;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }

    /// A - z0, same metadata.
    PointCloud translated(const Field& z0) const {
        PointCloud out = *this;
        for (auto& s : out.states)
            s -= z0;
        return out;
    }

    static PointCloud from_states(std::vector<Field> states) {
        PointCloud c;
        c.times.assign(states.size(), 0.0);
        c.member.resize(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            c.member[i] = i;
        c.states = std::move(states);
        return c;
    }
};

/// Condensed symmetric matrix of pairwise distances.
class DistanceMatrix {
public:
    DistanceMatrix(const PointCloud& cloud, const NormTag& tag, unsigned threads = 1) : n_(cloud.size()), tag_(tag) {
        d_.assign(n_ * (n_ > 0 ? n_ - 1 : 0) / 2, 0.0);
        if (n_ < 2)
            return;
        if (tag.kind == NormTag::Kind::h1) {
            // Differences of sine coefficients weighted by the eigenvalues.
            std::vector<SpectralField> c;
            c.reserve(n_);
            for (const auto& s : cloud.states)
                c.push_back(transform_forward(s));
            const auto mu = laplacian_eigenvalues(cloud.states.front().domain());
            const double w = cloud.states.front().domain().parseval_weight();
            fill_rows(threads, [&](std::size_t i, std::size_t j) {
                double s = 0.0;
                for (std::size_t k = 0; k < mu.size(); ++k) {
                    const double e = c[i][k] - c[j][k];
                    s += mu[k] * e * e;
                }
                return std::sqrt(w * s);
            });
        } else {
            fill_rows(threads, [&](std::size_t i, std::size_t j) {
                return distance(cloud.states[i], cloud.states[j], tag);
            });
        }
    }

    std::size_t size() const { return n_; }
    const NormTag& tag() const { return tag_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j)
            return 0.0;
        if (i > j)
            std::swap(i, j);
        return d_[index(i, j)];
    }

    const std::vector<double>& condensed() const { return d_; }

    double diameter() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }

private:
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_ - i * (i + 1) / 2 + (j - i - 1); }

    template <class Fn>
    void fill_rows(unsigned threads, Fn&& dist) {
        auto rows = parallel_map(n_ - 1, threads, [&](std::size_t i) {
            std::vector<double> row;
            row.reserve(n_ - i - 1);
            for (std::size_t j = i + 1; j < n_; ++j)
                row.push_back(dist(i, j));
            return row;
        });
        for (std::size_t i = 0; i + 1 < n_; ++i)
            std::copy(rows[i].begin(), rows[i].end(), d_.begin() + index(i, i + 1));
    }

    std::size_t n_;
    NormTag tag_;
    std::vector<double> d_;
};

struct AttractorSampling {
    std::size_t ensemble_size = 20;
    double t_spin = 2.0;
    std::size_t n_samples = 40;
    double sample_spacing = 0.5;
    double amplitude_min = 1e-9; ///< initial L^2 norms are log-uniform in [amplitude_min, amplitude_max]
    double amplitude_max = 1e-2;
    std::uint64_t seed = 1;
    double dt = 1e-4;
    Scheme scheme = Scheme::imex_cn_ab2;
    double spin_tolerance = 0.1; ///< bound on ||u(T_spin) - u(T_spin - spacing)||
    unsigned threads = 1;

    void validate() const {
        if (ensemble_size < 1 || n_samples < 1)
            throw ParameterError("attractor sampling needs at least one member and one sample");
        if (!(t_spin > 0.0) || !(sample_spacing > 0.0) || !(dt > 0.0))
            throw ParameterError("spin-up time, sample spacing and dt must be positive");
        if (!(sample_spacing < t_spin))
            throw ParameterError("sample spacing must be shorter than the spin-up time");
        if (!(amplitude_min > 0.0) || amplitude_max < amplitude_min)
            throw ParameterError("initial amplitudes need 0 < min <= max");
    }
};

/// Evolves `ensemble_size` random initial data past T_spin and records every member at
/// T_spin + j * spacing, j < n_samples. Small log-uniform amplitudes start members near
/// the origin so the cloud also traces orbits leaving unstable equilibria.
inline PointCloud sample_attractor(const ProblemSpec& prob, const AttractorSampling& opt) {
    opt.validate();
    const DomainSpec& d = prob.domain();
    struct MemberRun {
        std::vector<Field> states;
        std::vector<double> times;
        double increment = 0.0;
    };
    auto runs = parallel_map(opt.ensemble_size, opt.threads, [&](std::size_t i) {
        Rng rng = Rng::for_member(opt.seed, i);
        const double amp = rng.log_uniform(opt.amplitude_min, opt.amplitude_max);
        Field u = sample_family(static_cast<InitialFamily>(i % 3), d, rng, amp);
        auto advance = [&](double span) {
            if (span > 0.0)
                u = integrate(u, prob, SolverConfig{std::min(opt.dt, span), span, opt.scheme, 1, false}, nullptr);
        };
        MemberRun r;
        advance(opt.t_spin - opt.sample_spacing);
        const Field before = u;
        advance(opt.sample_spacing);
        r.increment = l2_norm(u - before);
        for (std::size_t j = 0; j < opt.n_samples; ++j) {
            if (j > 0)
                advance(opt.sample_spacing);
            r.states.push_back(u);
            r.times.push_back(opt.t_spin + j * opt.sample_spacing);
        }
        return r;
    });
    PointCloud cloud;
    cloud.t_spin = opt.t_spin;
    cloud.sample_spacing = opt.sample_spacing;
    cloud.seed = opt.seed;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        cloud.max_spin_increment = std::max(cloud.max_spin_increment, runs[i].increment);
        for (std::size_t j = 0; j < runs[i].states.size(); ++j) {
            cloud.states.push_back(std::move(runs[i].states[j]));
            cloud.times.push_back(runs[i].times[j]);
            cloud.member.push_back(i);
        }
    }
    cloud.spin_up_stabilized = cloud.max_spin_increment <= opt.spin_tolerance;
    return cloud;
}

struct DistancePoint {
    double t = 0.0;
    double dist = 0.0;
};

/// dist(t) = max over bundle members of min over the cloud of the tagged distance.
/// An H^1_0 tag requires a passing growth certification for f'.
inline std::vector<DistancePoint> attraction_distance(const std::vector<Trajectory>& bundle, const PointCloud& cloud,
                                                      const NormTag& tag,
                                                      const CertificationReport* f_add = nullptr,
                                                      unsigned threads = 1) {
    if (bundle.empty() || cloud.empty())
        throw ParameterError("attraction distance needs a bundle and a cloud");
    if (tag.kind == NormTag::Kind::h1 && !(f_add && f_add->pass))
        throw PreconditionError("H^1_0 attraction requires a certified growth bound on f'");
    const std::size_t nt = bundle.front().times.size();
    for (const auto& tr : bundle)
        if (tr.times.size() != nt)
            throw ParameterError("bundle trajectories must share their recording times");
    std::vector<SpectralField> cloud_coeffs;
    std::vector<double> mu;
    if (tag.kind == NormTag::Kind::h1) {
        for (const auto& s : cloud.states)
            cloud_coeffs.push_back(transform_forward(s));
        mu = laplacian_eigenvalues(cloud.states.front().domain());
    }
    auto per_time = parallel_map(nt, threads, [&](std::size_t k) {
        double worst = 0.0;
        for (const auto& tr : bundle) {
            double best = std::numeric_limits<double>::infinity();
            if (tag.kind == NormTag::Kind::h1) {
                const SpectralField c = transform_forward(tr.states[k]);
                const double w = c.domain().parseval_weight();
                for (const auto& q : cloud_coeffs) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < mu.size(); ++i)
                        s += mu[i] * (c[i] - q[i]) * (c[i] - q[i]);
                    best = std::min(best, std::sqrt(w * s));
                }
            } else {
                for (const auto& s : cloud.states)
                    best = std::min(best, distance(tr.states[k], s, tag));
            }
            worst = std::max(worst, best);
        }
        return DistancePoint{bundle.front().times[k], worst};
    });
    return per_time;
}

/// Earliest recorded time after which dist stays below `threshold`; NaN if the final value is not below.
inline double settling_time(const std::vector<DistancePoint>& series, double threshold) {
    double t = std::numeric_limits<double>::quiet_NaN();
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
        if (!(it->dist < threshold))
            break;
        t = it->t;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Epsilon-nets

struct EpsilonNet {
    std::vector<std::size_t> indices; ///< into the cloud
    std::vector<std::size_t> cover;   ///< per cloud point, the covering net point (cloud index)
    double eps = 0.0;
    NormTag tag;
    double max_cover_distance = 0.0;  ///< max over cloud of distance to its cover; < eps

    std::size_t size() const { return indices.size(); }
};

/// True iff every cloud point lies strictly within eps of some net point.
inline bool covers(const DistanceMatrix& dist, const std::vector<std::size_t>& net, double eps) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
        bool ok = false;
        for (std::size_t j : net)
            if (dist(i, j) < eps) {
                ok = true;
                break;
            }
        if (!ok)
            return false;
    }
    return true;
}

/// Farthest-first net: repeatedly adds the point farthest from the current net until
/// every point is strictly within eps.
inline EpsilonNet greedy_epsilon_net(const DistanceMatrix& dist, double eps) {
    if (!(eps > 0.0))
        throw ParameterError("eps must be positive");
    EpsilonNet net;
    net.eps = eps;
    net.tag = dist.tag();
    const std::size_t n = dist.size();
    if (n == 0)
        return net;
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    net.cover.assign(n, 0);
    std::size_t next = 0;
    while (true) {
        net.indices.push_back(next);
        for (std::size_t i = 0; i < n; ++i) {
            const double di = dist(i, next);
            if (di < dmin[i]) {
                dmin[i] = di;
                net.cover[i] = next;
            }
        }
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (dmin[i] > dmin[far])
                far = i;
        if (dmin[far] < eps)
            break;
        next = far;
    }
    net.max_cover_distance = *std::max_element(dmin.begin(), dmin.end());
    if (!covers(dist, net.indices, eps))
        throw StateError("constructed net fails the covering check");
    return net;
}

inline EpsilonNet greedy_epsilon_net(const PointCloud& cloud, double eps, const NormTag& tag, unsigned threads = 1) {
    return greedy_epsilon_net(DistanceMatrix(cloud, tag, threads), eps);
}

struct TransportReport {
    double eps = 0.0;
    double holder_constant = 0.0;  ///< L
    double holder_exponent = 0.0;  ///< delta
    double radius = 0.0;           ///< L eps^delta
    NormTag source;
    NormTag target;
    std::size_t covered = 0;
    std::size_t points = 0;
    double coverage = 0.0;         ///< covered / points
    double worst_ratio = 0.0;      ///< max ||M(a) - M(a0)||_Y / ||a - a0||_X^delta over a and its cover a0
    double max_target_distance = 0.0;
    bool pass() const { return points > 0 && covered == points; }
};

/// Time-1 images of every cloud state.
inline std::vector<Field> time_one_images(const PointCloud& cloud, const ProblemSpec& prob, double dt = 1e-4,
                                          Scheme scheme = Scheme::imex_cn_ab2, unsigned threads = 1) {
    return parallel_map(cloud.size(), threads, [&](std::size_t i) {
        return integrate(cloud.states[i], prob, SolverConfig{dt, 1.0, scheme, 1, false}, nullptr);
    });
}

/// Checks that M(E) is an L eps^delta net of M(A) in the target metric, given images M(a).
inline TransportReport transport_net(const PointCloud& cloud, const EpsilonNet& net, const std::vector<Field>& images,
                                     double L, double delta, const NormTag& target) {
    if (!(net.eps > 0.0 && net.eps <= 1.0))
        throw PreconditionError("net transport needs eps in (0, 1]");
    if (!(L > 0.0) || !(delta > 0.0))
        throw ParameterError("Hoelder constants must be positive");
    if (images.size() != cloud.size() || net.cover.size() != cloud.size())
        throw ParameterError("images and net must match the cloud");
    TransportReport r;
    r.eps = net.eps;
    r.holder_constant = L;
    r.holder_exponent = delta;
    r.radius = L * std::pow(net.eps, delta);
    r.source = net.tag;
    r.target = target;
    r.points = cloud.size();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j : net.indices)
            best = std::min(best, i == j ? 0.0 : distance(images[i], images[j], target));
        r.max_target_distance = std::max(r.max_target_distance, best);
        if (best < r.radius)
            ++r.covered;
        const std::size_t a0 = net.cover[i];
        if (a0 != i) {
            const double dx = distance(cloud.states[i], cloud.states[a0], net.tag);
            if (dx > 0.0)
                r.worst_ratio =
                    std::max(r.worst_ratio, distance(images[i], images[a0], target) / std::pow(dx, delta));
        }
    }
    r.coverage = static_cast<double>(r.covered) / static_cast<double>(r.points);
    return r;
}

inline TransportReport transport_net(const PointCloud& cloud, const EpsilonNet& net, const ProblemSpec& prob, double L,
                                     double delta, const NormTag& target, double dt = 1e-4, unsigned threads = 1) {
    return transport_net(cloud, net, time_one_images(cloud, prob, dt, Scheme::imex_cn_ab2, threads), L, delta, target);
}

// ---------------------------------------------------------------------------
// Correlation dimension

struct DimensionEstimate {
    NormTag tag;
    std::size_t points = 0;
    std::vector<double> scales;      ///< eps, log-spaced between the smallest positive and the largest distance
    std::vector<double> correlation; ///< C(eps) = fraction of distinct pairs with distance < eps
    std::size_t window_begin = 0;    ///< fitted scales [window_begin, window_end)
    std::size_t window_end = 0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    double dimension = 0.0;
    double r_squared = 0.0;
    double band = 0.0;               ///< two standard errors of the slope
    bool degenerate = false;         ///< all points coincide
    bool no_linear_regime = false;   ///< fewer than min_window usable scales
    bool small_sample = false;       ///< fewer than 500 points
};

struct DimensionOptions {
    int scales = 20;
    std::size_t min_window = 5;
    double min_pairs = 20.0;         ///< scales with fewer pairs are too noisy
    double max_correlation = 0.2;    ///< scales above are dominated by the cloud's extent
    double min_r_squared = 0.995;
};

/// Slope of log C(eps) against log eps over the longest window of consecutive usable scales
/// with R^2 >= min_r_squared (the best-R^2 window of min_window scales if none qualifies).
inline DimensionEstimate correlation_dimension(const DistanceMatrix& dist, const DimensionOptions& opt = {}) {
    DimensionEstimate est;
    est.tag = dist.tag();
    est.points = dist.size();
    est.small_sample = dist.size() < 500;
    std::vector<double> d = dist.condensed();
    if (d.empty() || dist.diameter() == 0.0) {
        est.degenerate = true;
        return est;
    }
    std::sort(d.begin(), d.end());
    const double lo = *std::upper_bound(d.begin(), d.end(), 0.0);
    const double hi = d.back();
    const double pairs = static_cast<double>(d.size());
    if (!(hi > lo)) {
        est.no_linear_regime = true;
        return est;
    }
    est.scales = logspace(lo, hi, opt.scales);
    for (double e : est.scales)
        est.correlation.push_back(static_cast<double>(std::lower_bound(d.begin(), d.end(), e) - d.begin()) / pairs);

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < est.scales.size(); ++i)
        if (est.correlation[i] * pairs >= opt.min_pairs && est.correlation[i] <= opt.max_correlation)
            usable.push_back(i);
    // Usable scales form a contiguous run since C is monotone.
    if (usable.size() < opt.min_window) {
        est.no_linear_regime = true;
        return est;
    }
    auto fit_window = [&](std::size_t b, std::size_t e) {
        std::vector<double> x, y;
        for (std::size_t i = b; i < e; ++i) {
            x.push_back(std::log(est.scales[i]));
            y.push_back(std::log(est.correlation[i]));
        }
        return linear_fit(x, y);
    };
    const std::size_t first = usable.front(), last = usable.back() + 1;
    std::optional<LinearFit> best;
    std::size_t best_b = first, best_e = first + opt.min_window;
    for (std::size_t len = last - first; len >= opt.min_window && !best; --len) {
        for (std::size_t b = first; b + len <= last; ++b) {
            const LinearFit f = fit_window(b, b + len);
            if (f.r_squared >= opt.min_r_squared && (!best || f.r_squared > best->r_squared)) {
                best = f;
                best_b = b;
                best_e = b + len;
            }
        }
    }
    if (!best) {
        for (std::size_t b = first; b + opt.min_window <= last; ++b) {
            const LinearFit f = fit_window(b, b + opt.min_window);
            if (!best || f.r_squared > best->r_squared) {
                best = f;
                best_b = b;
                best_e = b + opt.min_window;
            }
        }
    }
    est.window_begin = best_b;
    est.window_end = best_e;
    est.eps_min = est.scales[best_b];
    est.eps_max = est.scales[best_e - 1];
    est.dimension = best->slope;
    est.r_squared = best->r_squared;
    est.band = 2.0 * best->slope_stderr;
    return est;
}

inline DimensionEstimate correlation_dimension(const PointCloud& cloud, const NormTag& tag,
                                               const DimensionOptions& opt = {}, unsigned threads = 1) {
    return correlation_dimension(DistanceMatrix(cloud, tag, threads), opt);
}

struct BoundCheckEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct BoundCheckReport {
    double p = 4.0;
    double gamma = 4.0;
    DimensionEstimate l2;
    DimensionEstimate lp;
    DimensionEstimate lgamma_translated;
    DimensionEstimate h1;
    std::vector<BoundCheckEntry> bounds;
    bool degenerate = false;
    bool pass = false;
};

/// d_{L^p} <= (p/2) d_{L^2}, d_{L^gamma}(A - z0) <= (gamma/2) d_{L^2}, d_{H^1} <= (p-1) d_{L^2},
/// each with tolerance the sum of the two confidence bands.
inline BoundCheckReport dimension_bound_check(const PointCloud& cloud, double p, double gamma, const Field& z0,
                                              const DimensionOptions& opt = {}, unsigned threads = 1) {
    if (!(p > 2.0) || !(gamma >= 2.0))
        throw ParameterError("dimension bounds need p > 2 and gamma >= 2");
    if (cloud.empty())
        throw ParameterError("empty cloud");
    BoundCheckReport r;
    r.p = p;
    r.gamma = gamma;
    r.l2 = correlation_dimension(cloud, NormTag::lebesgue(2.0), opt, threads);
    r.lp = correlation_dimension(cloud, NormTag::lebesgue(p), opt, threads);
    r.lgamma_translated = correlation_dimension(cloud.translated(z0), NormTag::lebesgue(gamma), opt, threads);
    r.h1 = correlation_dimension(cloud, NormTag::h1(), opt, threads);
    r.degenerate = r.l2.degenerate || r.lp.degenerate || r.lgamma_translated.degenerate || r.h1.degenerate;
    auto add = [&](std::string name, const DimensionEstimate& lhs, double factor) {
        BoundCheckEntry e{std::move(name), lhs.dimension, factor * r.l2.dimension, lhs.band + factor * r.l2.band};
        e.pass = e.lhs <= e.rhs + e.tolerance;
        r.bounds.push_back(e);
    };
    add("Lp_vs_L2", r.lp, 0.5 * p);
    add("Lgamma_translated_vs_L2", r.lgamma_translated, 0.5 * gamma);
    add("H1_vs_L2", r.h1, p - 1.0);
    r.pass = std::all_of(r.bounds.begin(), r.bounds.end(), [](const BoundCheckEntry& e) { return e.pass; });
    return r;
}

// ---------------------------------------------------------------------------
// Synthetic manifolds with known dimension

/// u = s * phi, s uniform on [0, 1].
inline PointCloud line_segment_cloud(const Field& phi, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Field> states;
    for (std::size_t i = 0; i < n; ++i)
        states.push_back(rng.uniform() * phi);
    return PointCloud::from_states(std::move(states));
}

/// Flat 2-torus (cos a, sin a, cos b, sin b) on the first four eigenmodes, angles uniform.
inline PointCloud torus_cloud(const DomainSpec& d, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Field> e;
    for (int k = 1; k <= 4; ++k)
        e.push_back(d.dimension == 1 ? eigenmode(d, k) : eigenmode(d, k, 1));
    std::vector<Field> states;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), b = rng.uniform(0.0, 2.0 * std::numbers::pi);
        Field u = std::cos(a) * e[0];
        u += std::sin(a) * e[1];
        u += std::cos(b) * e[2];
        u += std::sin(b) * e[3];
        states.push_back(std::move(u));
    }
    return PointCloud::from_states(std::move(states));
}

} // namespace rdlab

#endif

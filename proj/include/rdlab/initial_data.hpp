#ifndef RDLAB_INITIAL_DATA_HPP
#define RDLAB_INITIAL_DATA_HPP

// Initial-data families bounded in L^2: eigenmode mixtures, narrow bumps and
// random-coefficient fields on the grid, plus analytic one-dimensional profiles
// whose L^p norm can exceed anything a grid of spacing h can carry
// (||u||_4 <= h^{-1/4} ||u||_2 on the grid).
//
// An analytic profile enters the grid solver through an initial layer: over
// [0, t0] the linear problem is solved exactly in the sine basis, and t0 is
// chosen so that every mode the grid cannot carry is damped below 1e-16. The
// reaction term over the layer is not integrated; its size is estimated by
// int_0^t0 ||f(u_lin(s))||_2 ds and reported.

#include "rdlab/domain.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/random.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace rdlab {

/// Rescales f to L^2 norm r; a zero field stays zero.
inline Field normalized_to(Field f, double r) {
    const double n = l2_norm(f);
    if (n > 0.0)
        f *= r / n;
    return f;
}

inline Field from_coefficients(const DomainSpec& d, const std::vector<double>& c) {
    return transform_inverse(SpectralField(d, c));
}

/// sum_k a_k e_k over the first `modes` wave numbers per axis, a_k ~ N(0,1)/|k|^2, scaled to L^2 norm r.
inline Field eigenmode_mixture(const DomainSpec& d, Rng& rng, double r, int modes = 8) {
    std::vector<double> c(d.size(), 0.0);
    const int m = d.points_per_axis;
    const int kmax = std::min(modes, m);
    if (d.dimension == 1) {
        for (int k = 0; k < kmax; ++k)
            c[k] = rng.normal() / ((k + 1.0) * (k + 1.0));
    } else {
        for (int i = 0; i < kmax; ++i)
            for (int j = 0; j < kmax; ++j)
                c[static_cast<std::size_t>(i) * m + j] = rng.normal() / ((i + 1.0) * (i + 1.0) + (j + 1.0) * (j + 1.0));
    }
    return normalized_to(from_coefficients(d, c), r);
}

/// Narrow Gaussian bump of width `width_cells` grid spacings at a random interior point, scaled to L^2 norm r.
inline Field spiky_bump(const DomainSpec& d, Rng& rng, double r, double width_cells = 2.0) {
    const double L = d.side_length;
    const double w = width_cells * d.spacing();
    const double cx = rng.uniform(0.2 * L, 0.8 * L);
    const double cy = rng.uniform(0.2 * L, 0.8 * L);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const Field f = Field::sample(d, [&](Point p) {
        const double q = (p.x - cx) * (p.x - cx) + (d.dimension == 2 ? (p.y - cy) * (p.y - cy) : 0.0);
        return sign * std::exp(-q / (2.0 * w * w));
    });
    return normalized_to(f, r);
}

/// Random sine coefficients with decay |k|^{-smoothness}, scaled to L^2 norm r.
inline Field random_coefficient_field(const DomainSpec& d, Rng& rng, double r, double smoothness = 1.0) {
    std::vector<double> c(d.size());
    const int m = d.points_per_axis;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        double k2 = 0.0;
        if (d.dimension == 1) {
            k2 = std::pow(idx + 1.0, 2);
        } else {
            const double i = static_cast<double>(idx / m) + 1.0, j = static_cast<double>(idx % m) + 1.0;
            k2 = i * i + j * j;
        }
        c[idx] = rng.normal() * std::pow(k2, -0.5 * smoothness);
    }
    return normalized_to(from_coefficients(d, c), r);
}

enum class InitialFamily { eigenmode_mixture, spiky, random_coefficients };

inline const char* family_name(InitialFamily f) {
    switch (f) {
    case InitialFamily::eigenmode_mixture:
        return "eigenmode_mixture";
    case InitialFamily::spiky:
        return "spiky";
    default:
        return "random_coefficients";
    }
}

inline Field sample_family(InitialFamily family, const DomainSpec& d, Rng& rng, double r) {
    switch (family) {
    case InitialFamily::eigenmode_mixture:
        return eigenmode_mixture(d, rng, r);
    case InitialFamily::spiky:
        return spiky_bump(d, rng, r);
    default:
        return random_coefficient_field(d, rng, r);
    }
}

/// Member `index` of a round-robin ensemble over the three families.
inline Field ensemble_member(const DomainSpec& d, std::uint64_t seed, std::uint64_t index, double r) {
    Rng rng = Rng::for_member(seed, index);
    return sample_family(static_cast<InitialFamily>(index % 3), d, rng, r);
}

// ---------------------------------------------------------------------------
// Analytic one-dimensional profiles

/// u0 = value on (0, L) (type constant) or amplitude * exp(-(x-center)^2 / (2 width^2)) (type gaussian).
/// Gaussian norms use the whole-line integrals; the neglected tails are below
/// exp(-min(center, L-center)^2 / (2 width^2)).
struct AnalyticProfile {
    enum class Kind { constant, gaussian } kind = Kind::constant;
    double value = 1.0;  ///< constant value or Gaussian amplitude
    double center = 0.5;
    double width = 0.1;
    double side_length = 1.0;

    static AnalyticProfile constant(double value, double side_length = 1.0) {
        return AnalyticProfile{Kind::constant, value, 0.5 * side_length, 0.0, side_length};
    }

    /// Gaussian at `center` with prescribed ||u0||_2 and ||u0||_p.
    static AnalyticProfile gaussian_with_norms(double l2, double lp, double p, double center, double side_length = 1.0) {
        if (!(p > 2.0) || !(l2 > 0.0) || !(lp > 0.0))
            throw ParameterError("gaussian profile needs p > 2 and positive norms");
        // ||u||_q^q = A^q w sqrt(2 pi / q).
        const double ratio = std::pow(lp, p) / (l2 * l2 * std::sqrt(2.0 / p));
        const double amplitude = std::pow(ratio, 1.0 / (p - 2.0));
        const double width = l2 * l2 / (amplitude * amplitude * std::sqrt(std::numbers::pi));
        const double margin = std::min(center, side_length - center);
        if (!(margin > 8.0 * width))
            throw ParameterError("gaussian profile is too wide for the interval");
        return AnalyticProfile{Kind::gaussian, amplitude, center, width, side_length};
    }

    /// ||u0||_gamma.
    double lebesgue_norm(double gamma) const {
        if (kind == Kind::constant)
            return std::abs(value) * std::pow(side_length, 1.0 / gamma);
        return std::abs(value) * std::pow(width * std::sqrt(2.0 * std::numbers::pi / gamma), 1.0 / gamma);
    }

    /// Coefficient of sin(k pi x / L) in the sine expansion of u0.
    double sine_coefficient(int k) const {
        const double w = k * std::numbers::pi / side_length;
        if (kind == Kind::constant)
            return k % 2 == 1 ? 4.0 * value / (k * std::numbers::pi) : 0.0;
        const double mass = value * width * std::sqrt(2.0 * std::numbers::pi);
        return 2.0 / side_length * mass * std::exp(-0.5 * w * w * width * width) * std::sin(w * center);
    }
};

struct InitialLayer {
    Field state;             ///< grid state at time t0
    double t0 = 0.0;
    double reaction_estimate = 0.0; ///< int_0^t0 ||f(u_lin)||_2 ds
};

/// Smallest layer time damping every mode above the grid by exp(-36).
inline double initial_layer_time(const DomainSpec& d, double lambda) {
    return 36.0 / (lambda + axis_eigenvalue(d, d.points_per_axis));
}

/// Exact linear evolution of the analytic profile (with forcing g) to t0 on a one-dimensional grid.
inline InitialLayer initial_layer(const AnalyticProfile& u0, const DomainSpec& d, double lambda, const Field& g,
                                  const NonlinearitySpec& f, double t0) {
    if (d.dimension != 1)
        throw ParameterError("analytic profiles are one-dimensional");
    if (std::abs(d.side_length - u0.side_length) > 1e-14 * d.side_length)
        throw ParameterError("profile and domain lengths differ");
    if (!(t0 > 0.0))
        throw ParameterError("initial layer time must be positive");
    const SpectralField gh = transform_forward(g);
    std::vector<double> c(d.size());
    for (int k = 1; k <= d.points_per_axis; ++k) {
        const double a = lambda + axis_eigenvalue(d, k);
        const double decay = std::exp(-a * t0);
        c[k - 1] = u0.sine_coefficient(k) * decay + gh[k - 1] * (1.0 - decay) / a;
    }
    InitialLayer out{from_coefficients(d, c), t0, 0.0};

    // |u_g(s)| <= s max|g|; Minkowski on (|u_spike| + delta)^j.
    const double gmax = g.max_abs();
    const double L = d.side_length;
    auto power_l2 = [&](double s, int j) {
        // ||u_lin^j||_2 for the homogeneous part.
        if (u0.kind == AnalyticProfile::Kind::constant)
            return std::pow(std::abs(u0.value), j) * std::sqrt(L);
        const double sigma = std::sqrt(u0.width * u0.width + 2.0 * s);
        const double amp = std::abs(u0.value) * u0.width / sigma * std::exp(-lambda * s);
        return std::pow(amp, j) * std::sqrt(sigma * std::sqrt(std::numbers::pi / j));
    };
    auto integrand = [&](double s) {
        const double delta = s * gmax;
        double total = 0.0;
        for (std::size_t j = 0; j < f.coefficients.size(); ++j) {
            if (f.coefficients[j] == 0.0)
                continue;
            double norm = 0.0, binom = 1.0;
            for (std::size_t i = 0; i <= j; ++i) {
                const double spike = i == 0 ? std::sqrt(L) : power_l2(s, static_cast<int>(i));
                norm += binom * std::pow(delta, static_cast<double>(j - i)) * spike;
                binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
            }
            total += std::abs(f.coefficients[j]) * norm;
        }
        return total;
    };
    // The Gaussian integrand varies on the scale width^2, so integrate on a log grid.
    const double s_min = u0.kind == AnalyticProfile::Kind::gaussian ? std::min(1e-3 * u0.width * u0.width, 1e-3 * t0)
                                                                    : 1e-6 * t0;
    double integral = integrand(0.0) * s_min;
    const int n = 4000;
    double prev_s = s_min, prev_v = integrand(s_min);
    for (int i = 1; i <= n; ++i) {
        const double s = s_min * std::pow(t0 / s_min, static_cast<double>(i) / n);
        const double v = integrand(s);
        integral += 0.5 * (v + prev_v) * (s - prev_s);
        prev_s = s;
        prev_v = v;
    }
    out.reaction_estimate = integral;
    return out;
}

} // namespace rdlab

#endif

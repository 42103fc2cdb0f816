#ifndef RDLAB_DOMAIN_HPP
#define RDLAB_DOMAIN_HPP

// Box domains (0,L)^N with homogeneous Dirichlet data, grid fields, Lebesgue and
// H^1_0 norms, and the sine transform that diagonalizes the Dirichlet Laplacian.
//
// Grid: M interior points per axis at x_i = i*h, h = L/(M+1), i = 1..M. Boundary
// values are zero and never stored. For N = 2 the storage is row-major with the
// first axis (x) slowest.
//
// Spectral convention: u(x) = sum_k c_k prod_d sin(k_d pi x_d / L), k_d = 1..M.
// With this scaling the rectangle-rule L^2 norm satisfies
//     ||u||_2^2 = (L/2)^N sum_k c_k^2
// exactly (discrete orthogonality of DST-I).

#include "rdlab/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rdlab {

enum class EigenvalueConvention {
    continuum, ///< (k pi / L)^2 per axis
    discrete   ///< eigenvalues of the second-difference operator, (4/h^2) sin^2(k pi / (2(M+1)))
};

struct DomainSpec {
    int dimension = 1;
    double side_length = 1.0;
    int points_per_axis = 255;
    EigenvalueConvention eigenvalues = EigenvalueConvention::continuum;

    void validate() const {
        if (dimension != 1 && dimension != 2)
            throw ParameterError("domain dimension must be 1 or 2, got " + std::to_string(dimension));
        if (!(side_length > 0.0) || !std::isfinite(side_length))
            throw ParameterError("domain side length must be positive and finite");
        if (points_per_axis < 8)
            throw ParameterError("need at least 8 grid points per axis, got " + std::to_string(points_per_axis));
    }

    double spacing() const { return side_length / (points_per_axis + 1); }

    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < dimension; ++d)
            n *= static_cast<std::size_t>(points_per_axis);
        return n;
    }

    /// Quadrature weight h^N of the rectangle rule.
    double cell_volume() const { return std::pow(spacing(), dimension); }

    /// Coordinate of the zero-based interior index along one axis.
    double coordinate(int index) const { return (index + 1) * spacing(); }

    /// (L/2)^N: factor relating squared sine coefficients to the squared L^2 norm.
    double parseval_weight() const { return std::pow(0.5 * side_length, dimension); }

    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Real function on the interior grid of a DomainSpec.
class Field {
public:
    explicit Field(const DomainSpec& domain) : domain_(domain), values_(domain.size(), 0.0) {
        domain_.validate();
    }

    Field(const DomainSpec& domain, std::vector<double> values) : domain_(domain), values_(std::move(values)) {
        domain_.validate();
        if (values_.size() != domain_.size())
            throw StateError("field has " + std::to_string(values_.size()) + " values, domain needs " +
                             std::to_string(domain_.size()));
        if (!is_finite())
            throw StateError("field contains non-finite values");
    }

    /// Samples fn(Point) at every interior grid point.
    template <class Fn>
    static Field sample(const DomainSpec& domain, Fn&& fn) {
        Field out(domain);
        const int m = domain.points_per_axis;
        if (domain.dimension == 1) {
            for (int i = 0; i < m; ++i)
                out.values_[i] = fn(Point{domain.coordinate(i), 0.0});
        } else {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    out.values_[static_cast<std::size_t>(i) * m + j] =
                        fn(Point{domain.coordinate(i), domain.coordinate(j)});
        }
        if (!out.is_finite())
            throw StateError("sampled field contains non-finite values");
        return out;
    }

    const DomainSpec& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    bool is_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_)
            m = std::max(m, std::abs(v));
        return m;
    }

    Field& operator+=(const Field& other) {
        require_same_domain(other);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] += other.values_[i];
        return *this;
    }

    Field& operator-=(const Field& other) {
        require_same_domain(other);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] -= other.values_[i];
        return *this;
    }

    Field& operator*=(double s) {
        for (double& v : values_)
            v *= s;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }
    friend Field operator*(Field a, double s) { return a *= s; }

    friend bool operator==(const Field& a, const Field& b) {
        return a.domain_ == b.domain_ && a.values_ == b.values_;
    }

    void require_same_domain(const Field& other) const {
        if (!(domain_ == other.domain_))
            throw StateError("fields live on different domains");
    }

private:
    DomainSpec domain_;
    std::vector<double> values_;
};

/// Sine coefficients of a Field; index layout matches Field (wave number = index + 1 per axis).
class SpectralField {
public:
    explicit SpectralField(const DomainSpec& domain) : domain_(domain), coefficients_(domain.size(), 0.0) {}

    SpectralField(const DomainSpec& domain, std::vector<double> coefficients)
        : domain_(domain), coefficients_(std::move(coefficients)) {
        if (coefficients_.size() != domain_.size())
            throw StateError("spectral field size does not match its domain");
    }

    const DomainSpec& domain() const { return domain_; }
    std::size_t size() const { return coefficients_.size(); }
    double operator[](std::size_t i) const { return coefficients_[i]; }
    double& operator[](std::size_t i) { return coefficients_[i]; }
    std::span<const double> coefficients() const { return coefficients_; }
    std::span<double> coefficients() { return coefficients_; }
    double* data() { return coefficients_.data(); }
    const double* data() const { return coefficients_.data(); }

private:
    DomainSpec domain_;
    std::vector<double> coefficients_;
};

namespace detail {

// FFTW plans are created once per (dimension, points) and shared. Planning is
// serialized; fftw_execute_r2r on distinct arrays is thread safe.
class DstPlanCache {
public:
    static DstPlanCache& instance() {
        static DstPlanCache cache;
        return cache;
    }

    fftw_plan get(int dimension, int points) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_pair(dimension, points);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        std::size_t n = dimension == 1 ? points : static_cast<std::size_t>(points) * points;
        double* in = fftw_alloc_real(n);
        double* out = fftw_alloc_real(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dimension == 1
                             ? fftw_plan_r2r_1d(points, in, out, FFTW_RODFT00, flags)
                             : fftw_plan_r2r_2d(points, points, in, out, FFTW_RODFT00, FFTW_RODFT00, flags);
        fftw_free(in);
        fftw_free(out);
        if (plan == nullptr)
            throw StateError("FFTW failed to create a DST-I plan");
        plans_.emplace(key, plan);
        return plan;
    }

    DstPlanCache(const DstPlanCache&) = delete;
    DstPlanCache& operator=(const DstPlanCache&) = delete;

private:
    DstPlanCache() = default;
    ~DstPlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

/// Unnormalized DST-I (FFTW RODFT00) along every axis; in and out must differ.
inline void dst1(const DomainSpec& domain, const double* in, double* out) {
    fftw_plan plan = DstPlanCache::instance().get(domain.dimension, domain.points_per_axis);
    fftw_execute_r2r(plan, const_cast<double*>(in), out);
}

} // namespace detail

inline SpectralField transform_forward(const Field& f) {
    const DomainSpec& d = f.domain();
    SpectralField c(d);
    detail::dst1(d, f.data(), c.data());
    const double scale = 1.0 / std::pow(d.points_per_axis + 1.0, d.dimension);
    for (double& v : c.coefficients())
        v *= scale;
    return c;
}

inline Field transform_inverse(const SpectralField& c) {
    const DomainSpec& d = c.domain();
    std::vector<double> values(d.size());
    detail::dst1(d, c.data(), values.data());
    const double scale = std::pow(0.5, d.dimension);
    for (double& v : values)
        v *= scale;
    return Field(d, std::move(values));
}

/// One-dimensional Dirichlet eigenvalue for wave number k under the domain's convention.
inline double axis_eigenvalue(const DomainSpec& d, int k) {
    if (d.eigenvalues == EigenvalueConvention::continuum) {
        const double w = k * std::numbers::pi / d.side_length;
        return w * w;
    }
    const double h = d.spacing();
    const double s = std::sin(k * std::numbers::pi / (2.0 * (d.points_per_axis + 1)));
    return 4.0 / (h * h) * s * s;
}

/// Eigenvalues of -Laplace with Dirichlet data, laid out like SpectralField coefficients.
inline std::vector<double> laplacian_eigenvalues(const DomainSpec& d) {
    d.validate();
    const int m = d.points_per_axis;
    std::vector<double> axis(m);
    for (int k = 0; k < m; ++k)
        axis[k] = axis_eigenvalue(d, k + 1);
    if (d.dimension == 1)
        return axis;
    std::vector<double> mu(d.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            mu[static_cast<std::size_t>(i) * m + j] = axis[i] + axis[j];
    return mu;
}

/// |x|^gamma with an exact multiplication path for small integer exponents.
inline double abs_pow(double x, double gamma) {
    const double a = std::abs(x);
    if (gamma == 2.0)
        return a * a;
    if (gamma >= 1.0 && gamma <= 32.0 && gamma == std::floor(gamma)) {
        unsigned n = static_cast<unsigned>(gamma);
        double result = 1.0, base = a;
        while (n) {
            if (n & 1u)
                result *= base;
            base *= base;
            n >>= 1u;
        }
        return result;
    }
    return std::pow(a, gamma);
}

namespace detail {
inline void require_gamma(double gamma) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw ParameterError("Lebesgue exponent must be >= 1, got " + std::to_string(gamma));
}
inline void require_finite(const Field& f) {
    if (!f.is_finite())
        throw StateError("norm of a field with non-finite values");
}
} // namespace detail

/// ||f||_gamma^gamma = h^N sum |f_i|^gamma.
inline double lebesgue_power(const Field& f, double gamma) {
    detail::require_gamma(gamma);
    detail::require_finite(f);
    double s = 0.0;
    for (double v : f.values())
        s += abs_pow(v, gamma);
    return f.domain().cell_volume() * s;
}

/// ||f||_gamma = (h^N sum |f_i|^gamma)^(1/gamma), evaluated with max-scaling so large gamma cannot overflow.
inline double lebesgue_norm(const Field& f, double gamma) {
    detail::require_gamma(gamma);
    detail::require_finite(f);
    const double m = f.max_abs();
    if (m == 0.0)
        return 0.0;
    double s = 0.0;
    for (double v : f.values())
        s += abs_pow(v / m, gamma);
    return m * std::pow(f.domain().cell_volume() * s, 1.0 / gamma);
}

inline double l2_norm(const Field& f) { return lebesgue_norm(f, 2.0); }

/// ||grad f|| from sine coefficients: (L/2)^N sum mu_k c_k^2.
inline double h1_seminorm(const SpectralField& c, std::span<const double> eigenvalues) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        s += eigenvalues[i] * c[i] * c[i];
    return std::sqrt(c.domain().parseval_weight() * s);
}

inline double h1_seminorm(const SpectralField& c) {
    const auto mu = laplacian_eigenvalues(c.domain());
    return h1_seminorm(c, mu);
}

inline double h1_seminorm(const Field& f) {
    detail::require_finite(f);
    return h1_seminorm(transform_forward(f));
}

/// Coefficient-side L^2 norm; equals l2_norm of the inverse transform (Parseval).
inline double spectral_l2_norm(const SpectralField& c) {
    double s = 0.0;
    for (double v : c.coefficients())
        s += v * v;
    return std::sqrt(c.domain().parseval_weight() * s);
}

/// Rectangle-rule L^2 inner product.
inline double inner_product(const Field& a, const Field& b) {
    a.require_same_domain(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return a.domain().cell_volume() * s;
}

/// Eigenmode prod_d sin(k_d pi x_d / L) with wave numbers (k1, k2); k2 ignored for N = 1.
inline Field eigenmode(const DomainSpec& d, int k1, int k2 = 1) {
    const double w = std::numbers::pi / d.side_length;
    if (d.dimension == 1)
        return Field::sample(d, [&](Point p) { return std::sin(k1 * w * p.x); });
    return Field::sample(d, [&](Point p) { return std::sin(k1 * w * p.x) * std::sin(k2 * w * p.y); });
}

} // namespace rdlab

#endif

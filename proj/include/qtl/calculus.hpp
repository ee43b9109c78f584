// calculus.hpp - finite differences and cumulative quadrature on uniform grids
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qtl/errors.hpp"

namespace qtl {

/// Samples on a uniform grid t_k = k dt, k = -halo .. count + halo - 1.
/// The halo samples lie outside [0, t_max] and exist only so that centred
/// stencils are available at the first and last interior sample.
template <typename T>
class Series {
public:
    Series() = default;
    Series(long halo, std::size_t count, T fill = T{})
        : halo_(halo), count_(count), values_(count + 2 * static_cast<std::size_t>(halo), std::move(fill)) {}
    Series(long halo, std::vector<T> values) : halo_(halo), values_(std::move(values)) {
        if (values_.size() < 2 * static_cast<std::size_t>(halo)) throw DimensionError("Series: fewer values than halo");
        count_ = values_.size() - 2 * static_cast<std::size_t>(halo);
    }

    long halo() const noexcept { return halo_; }
    /// Number of interior samples.
    std::size_t size() const noexcept { return count_; }
    long first() const noexcept { return -halo_; }
    long last() const noexcept { return static_cast<long>(count_) + halo_ - 1; }
    bool contains(long k) const noexcept { return k >= first() && k <= last(); }

    T& operator[](long k) { return values_[static_cast<std::size_t>(k + halo_)]; }
    const T& operator[](long k) const { return values_[static_cast<std::size_t>(k + halo_)]; }

    std::vector<T>& raw() noexcept { return values_; }
    const std::vector<T>& raw() const noexcept { return values_; }

    /// Copy of the interior samples 0 .. size()-1.
    std::vector<T> interior() const {
        return std::vector<T>(values_.begin() + halo_, values_.begin() + halo_ + static_cast<long>(count_));
    }

private:
    long halo_ = 0;
    std::size_t count_ = 0;
    std::vector<T> values_;
};

enum class StencilOrder { Second = 2, Fourth = 4, Sixth = 6 };

/// Derivative of f at sample k. Uses the centred stencil of the requested
/// order when it fits inside the series, otherwise the next lower centred
/// stencil, otherwise a one-sided three-point stencil.
template <typename T>
T derivative_at(const Series<T>& f, long k, double dt, StencilOrder order) {
    const bool c6 = f.contains(k - 3) && f.contains(k + 3);
    const bool c4 = f.contains(k - 2) && f.contains(k + 2);
    const bool c2 = f.contains(k - 1) && f.contains(k + 1);
    if (order == StencilOrder::Sixth && c6)
        return (f[k + 3] - f[k - 3] + 9.0 * (f[k - 2] - f[k + 2]) + 45.0 * (f[k + 1] - f[k - 1])) * (1.0 / (60.0 * dt));
    if (order != StencilOrder::Second && c4)
        return (f[k - 2] - f[k + 2] + 8.0 * (f[k + 1] - f[k - 1])) * (1.0 / (12.0 * dt));
    if (c2) return (f[k + 1] - f[k - 1]) * (1.0 / (2.0 * dt));
    if (f.contains(k + 2)) return (-3.0 * f[k] + 4.0 * f[k + 1] - f[k + 2]) * (1.0 / (2.0 * dt));
    if (f.contains(k - 2)) return (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) * (1.0 / (2.0 * dt));
    throw DimensionError("derivative_at: series has fewer than three samples");
}

template <typename T>
Series<T> differentiate(const Series<T>& f, double dt, StencilOrder order = StencilOrder::Second) {
    std::vector<T> out;
    out.reserve(f.raw().size());
    for (long k = f.first(); k <= f.last(); ++k) out.push_back(derivative_at(f, k, dt, order));
    return Series<T>(f.halo(), std::move(out));
}

/// Derivative restricted to samples where `valid` is set. Stencils never
/// reach across an invalid sample; where no stencil fits the result is NaN.
Series<double> differentiate_masked(const Series<double>& f, const Series<unsigned char>& valid, double dt,
                                    StencilOrder order = StencilOrder::Fourth);

enum class QuadratureRule {
    Trapezoid, // exact for linear fluxes
    Cubic,     // local cubic through four neighbouring samples, fourth order
};

/// Cumulative integral of flux samples f_0 .. f_{M} on a uniform grid, with
/// result[0] = 0. Interval [k, k+1] contributes only when both endpoints are
/// valid; otherwise the running total is held. The cubic rule falls back to
/// the trapezoid on intervals whose four-point neighbourhood is incomplete.
std::vector<double> integrate_cumulative(std::span<const double> f, double dt, QuadratureRule rule = QuadratureRule::Trapezoid,
                                         std::span<const unsigned char> valid = {});

} // namespace qtl

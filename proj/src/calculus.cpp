// calculus.cpp - masked differentiation and cumulative quadrature
#include "qtl/calculus.hpp"

namespace qtl {

Series<double> differentiate_masked(const Series<double>& f, const Series<unsigned char>& valid, double dt,
                                    StencilOrder order) {
    if (f.halo() != valid.halo() || f.size() != valid.size())
        throw DimensionError("differentiate_masked: mask does not match series");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto ok = [&](long k) { return f.contains(k) && valid[k] != 0; };
    Series<double> out(f.halo(), f.size(), nan);
    for (long k = f.first(); k <= f.last(); ++k) {
        if (!ok(k)) continue;
        auto span_ok = [&](long r) {
            for (long j = 1; j <= r; ++j)
                if (!ok(k - j) || !ok(k + j)) return false;
            return true;
        };
        if (order == StencilOrder::Sixth && span_ok(3))
            out[k] = (f[k + 3] - f[k - 3] + 9.0 * (f[k - 2] - f[k + 2]) + 45.0 * (f[k + 1] - f[k - 1])) / (60.0 * dt);
        else if (order != StencilOrder::Second && span_ok(2))
            out[k] = (f[k - 2] - f[k + 2] + 8.0 * (f[k + 1] - f[k - 1])) / (12.0 * dt);
        else if (ok(k - 1) && ok(k + 1))
            out[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
        else if (ok(k + 1) && ok(k + 2))
            out[k] = (-3.0 * f[k] + 4.0 * f[k + 1] - f[k + 2]) / (2.0 * dt);
        else if (ok(k - 1) && ok(k - 2))
            out[k] = (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * dt);
    }
    return out;
}

std::vector<double> integrate_cumulative(std::span<const double> f, double dt, QuadratureRule rule,
                                         std::span<const unsigned char> valid) {
    const std::size_t n = f.size();
    if (!valid.empty() && valid.size() != n) throw DimensionError("integrate_cumulative: mask length differs");
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    auto ok = [&](std::size_t k) { return valid.empty() || valid[k] != 0; };
    auto ok_range = [&](std::size_t a, std::size_t b) {
        for (std::size_t k = a; k <= b; ++k)
            if (!ok(k)) return false;
        return true;
    };
    const double h = dt / 24.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double step = 0.0;
        if (ok(k) && ok(k + 1)) {
            step = 0.5 * dt * (f[k] + f[k + 1]);
            if (rule == QuadratureRule::Cubic && n >= 4) {
                if (k >= 1 && k + 2 < n && ok_range(k - 1, k + 2))
                    step = h * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
                else if (k + 3 < n && ok_range(k, k + 3))
                    step = h * (9.0 * f[k] + 19.0 * f[k + 1] - 5.0 * f[k + 2] + f[k + 3]);
                else if (k >= 2 && ok_range(k - 2, k + 1))
                    step = h * (f[k - 2] - 5.0 * f[k - 1] + 19.0 * f[k] + 9.0 * f[k + 1]);
            }
        }
        out[k + 1] = out[k] + step;
    }
    return out;
}

} // namespace qtl

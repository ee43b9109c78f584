// analytic_rates.cpp - closed-form generator rates for a diagonal field
//
// In every case rho_eg(t) = G(t) rho_eg(0) with a scalar G, so
// A = Re(G'/G) and B = Im(G'/G). Here G carries the bare rotation
// e^{-i omega_S t}; in a frame rotating with the qubit B would lose the -omega_S.
//
// Jaynes-Cummings: with Delta = omega_S - omega_E, Omega_m = sqrt(Delta^2 + 4 g^2 m)
// and c_m(t) = cos(Omega_m t / 2) - i Delta sin(Omega_m t / 2) / Omega_m,
//   G     = e^{-i omega_E t} sum_n p_n c_n c_{n+1}
//   eta   = sum_n p_n |c_n|^2      (ground level stays ground)
//   kappa = sum_n p_n |c_{n+1}|^2  (excited level stays excited)
//   (X - Y) / 2 = ((eta - 1) kappa' - kappa eta') / (eta + kappa - 1)
//  -(X + Y) / 2 = ((kappa - 1) eta' - eta kappa') / (eta + kappa - 1)
#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "qtl/frameworks.hpp"

namespace qtl {

std::string_view to_string(DisplacedRateVariant v) {
    switch (v) {
    case DisplacedRateVariant::AsPrinted: return "as_printed";
    case DisplacedRateVariant::PrintedLogDerivative: return "printed_log_derivative";
    case DisplacedRateVariant::ExactLogDerivative: return "exact_log_derivative";
    }
    return "unknown";
}

std::optional<DisplacedRateVariant> parse_displaced_variant(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "as_printed") return DisplacedRateVariant::AsPrinted;
    if (s == "printed_log_derivative") return DisplacedRateVariant::PrintedLogDerivative;
    if (s == "exact_log_derivative") return DisplacedRateVariant::ExactLogDerivative;
    return std::nullopt;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Amplitude {
    Complex c;
    Complex c_dot;
};

Amplitude jc_amplitude(double delta, double g, double m, double t) {
    const double omega = std::sqrt(delta * delta + 4.0 * g * g * m);
    const double ph = 0.5 * omega * t;
    const double cs = std::cos(ph);
    // sin(Omega t / 2) / Omega, continuous at Omega = 0
    const double sinc = omega > 0.0 ? std::sin(ph) / omega : 0.5 * t;
    Amplitude a;
    a.c = Complex(cs, -delta * sinc);
    a.c_dot = Complex(-0.5 * omega * std::sin(ph), -0.5 * delta * cs);
    return a;
}

GeneratorRates jc_rates(const ModelConfig& cfg, const std::vector<double>& p, double t) {
    const double delta = cfg.omega_s - cfg.omega_e;
    Complex s{}, s_dot{};
    double eta = 0.0, eta_dot = 0.0, kappa = 0.0, kappa_dot = 0.0;
    Amplitude lower = jc_amplitude(delta, cfg.g, 0.0, t);
    for (std::size_t n = 0; n < p.size(); ++n) {
        const Amplitude upper = jc_amplitude(delta, cfg.g, static_cast<double>(n + 1), t);
        const double pn = p[n];
        if (pn != 0.0) {
            s += pn * lower.c * upper.c;
            s_dot += pn * (lower.c_dot * upper.c + lower.c * upper.c_dot);
            eta += pn * std::norm(lower.c);
            eta_dot += pn * 2.0 * (std::conj(lower.c) * lower.c_dot).real();
            kappa += pn * std::norm(upper.c);
            kappa_dot += pn * 2.0 * (std::conj(upper.c) * upper.c_dot).real();
        }
        lower = upper;
    }
    GeneratorRates r;
    if (std::abs(s) > 0.0) {
        const Complex log_dot = Complex(0, -cfg.omega_e) + s_dot / s;
        r.a = log_dot.real();
        r.b = log_dot.imag();
    } else {
        r.a = r.b = kNaN;
    }
    const double den = eta + kappa - 1.0;
    if (den != 0.0) {
        const double half_diff = ((eta - 1.0) * kappa_dot - kappa * eta_dot) / den; // (X - Y) / 2
        const double half_sum = -((kappa - 1.0) * eta_dot - eta * kappa_dot) / den; // (X + Y) / 2
        r.x = half_sum + half_diff;
        r.y = half_sum - half_diff;
    } else {
        r.x = r.y = kNaN;
    }
    return r;
}

GeneratorRates displaced_rates(const ModelConfig& cfg, double t, DisplacedRateVariant variant) {
    const double w = cfg.omega_e;
    if (!(w > 0)) throw ConfigError("analytic_rates: displaced coupling needs omega_e > 0");
    const double coth = 1.0 / std::tanh(0.5 * cfg.beta * w);
    const double g2 = cfg.g * cfg.g;
    GeneratorRates r;
    r.b = -cfg.omega_s;
    switch (variant) {
    case DisplacedRateVariant::AsPrinted: r.a = 2.0 * g2 * coth * (1.0 - std::cos(w * t)) / (w * w); break;
    case DisplacedRateVariant::PrintedLogDerivative: r.a = -2.0 * g2 * coth * std::sin(w * t) / w; break;
    case DisplacedRateVariant::ExactLogDerivative: r.a = -4.0 * g2 * coth * std::sin(w * t) / w; break;
    }
    return r;
}

GeneratorRates dispersive_rates(const ModelConfig& cfg, double t) {
    // G'/G = -i omega_S - 2 i g / (e^{beta omega_E + 2 i g t} - 1)
    const Complex e = std::exp(Complex(cfg.beta * cfg.omega_e, 2.0 * cfg.g * t));
    const Complex lambda = Complex(0, -2.0 * cfg.g) / (e - 1.0);
    GeneratorRates r;
    r.a = lambda.real();
    r.b = -cfg.omega_s + lambda.imag();
    return r;
}

} // namespace

GeneratorRates analytic_rates(const ModelConfig& cfg, const ComplexMatrix& rho_e0, double t,
                              DisplacedRateVariant variant) {
    validate(cfg);
    if (!rho_e0.is_square()) throw DimensionError("analytic_rates: field state is not square");
    for (std::size_t i = 0; i < rho_e0.rows(); ++i)
        for (std::size_t j = 0; j < rho_e0.cols(); ++j)
            if (i != j && std::abs(rho_e0(i, j)) > 1e-14)
                throw ConfigError("analytic_rates: the closed forms require a diagonal initial field state");
    if (cfg.coupling == CouplingKind::JaynesCummings) {
        std::vector<double> p(rho_e0.rows());
        for (std::size_t n = 0; n < p.size(); ++n) p[n] = rho_e0(n, n).real();
        return jc_rates(cfg, p, t);
    }
    const ComplexMatrix thermal = thermal_state(cfg.omega_e, cfg.beta, rho_e0.rows());
    if ((thermal - rho_e0).max_abs() > 1e-12)
        throw ConfigError("analytic_rates: the displaced and dispersive closed forms assume the thermal field");
    if (cfg.coupling == CouplingKind::Displaced) return displaced_rates(cfg, t, variant);
    return dispersive_rates(cfg, t);
}

GeneratorRates analytic_rates(const ModelConfig& cfg, double t, DisplacedRateVariant variant) {
    return analytic_rates(cfg, thermal_state(cfg.omega_e, cfg.beta, resolved_truncation(cfg)), t, variant);
}

} // namespace qtl

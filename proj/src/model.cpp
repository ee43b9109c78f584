// model.cpp - Hamiltonians, initial states and truncation
#include "qtl/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qtl {

std::string_view to_string(CouplingKind kind) {
    switch (kind) {
    case CouplingKind::JaynesCummings: return "jc";
    case CouplingKind::Displaced: return "displaced";
    case CouplingKind::Dispersive: return "dispersive";
    }
    return "unknown";
}

std::optional<CouplingKind> parse_coupling(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "jc" || s == "jaynes_cummings" || s == "jaynes-cummings") return CouplingKind::JaynesCummings;
    if (s == "displaced") return CouplingKind::Displaced;
    if (s == "dispersive") return CouplingKind::Dispersive;
    return std::nullopt;
}

std::vector<std::string> validation_errors(const ModelConfig& cfg) {
    std::vector<std::string> errs;
    auto finite = [&](double v, const char* name) {
        if (!std::isfinite(v)) {
            errs.push_back(std::string(name) + " must be finite");
            return false;
        }
        return true;
    };
    if (finite(cfg.omega_s, "omega_s") && cfg.omega_s < 0) errs.push_back("omega_s must be >= 0");
    if (finite(cfg.omega_e, "omega_e") && cfg.omega_e < 0) errs.push_back("omega_e must be >= 0");
    if (finite(cfg.g, "g") && cfg.g < 0) errs.push_back("g must be >= 0");
    if (finite(cfg.beta, "beta") && cfg.beta <= 0) errs.push_back("beta must be > 0");
    if (finite(cfg.p_e, "p_e") && (cfg.p_e < 0 || cfg.p_e > 1)) errs.push_back("p_e must lie in [0, 1]");
    finite(cfg.p_eg.real(), "p_eg (real part)");
    finite(cfg.p_eg.imag(), "p_eg (imaginary part)");
    if (std::norm(cfg.p_eg) > cfg.p_e * (1.0 - cfg.p_e) + 1e-15) {
        std::ostringstream os;
        os << "initial qubit state is not positive semidefinite: |p_eg|^2 = " << std::norm(cfg.p_eg)
           << " exceeds p_e * p_g = " << cfg.p_e * (1.0 - cfg.p_e);
        errs.push_back(os.str());
    }
    if (cfg.n_levels == 1) errs.push_back("n_levels must be >= 2 (or 0 for automatic)");
    if (cfg.n_levels == 0 && !(cfg.beta * cfg.omega_e > 0))
        errs.push_back("automatic truncation needs beta * omega_e > 0; set n_levels explicitly");
    if (finite(cfg.dt, "dt") && cfg.dt <= 0) errs.push_back("dt must be > 0");
    if (finite(cfg.t_max, "t_max") && cfg.t_max < 0) errs.push_back("t_max must be >= 0");
    finite(cfg.alpha_s, "alpha_s");
    if (!(cfg.tail_epsilon > 0 && cfg.tail_epsilon < 1)) errs.push_back("tail_epsilon must lie in (0, 1)");
    return errs;
}

void validate(const ModelConfig& cfg) {
    const auto errs = validation_errors(cfg);
    if (errs.empty()) return;
    std::string msg = "invalid model configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
}

std::size_t choose_truncation(double beta, double omega_e, double eps_tail, std::size_t headroom) {
    if (!(eps_tail > 0 && eps_tail < 1)) throw ConfigError("choose_truncation: eps_tail must lie in (0, 1)");
    const double x = beta * omega_e;
    if (!(x > 0) || !std::isfinite(x)) throw ConfigError("choose_truncation: beta * omega_e must be positive");
    const double n0 = std::ceil(-std::log(eps_tail) / x);
    return static_cast<std::size_t>(std::max(1.0, n0)) + headroom;
}

std::size_t resolved_truncation(const ModelConfig& cfg) {
    if (cfg.n_levels != 0) return cfg.n_levels;
    return choose_truncation(cfg.beta, cfg.omega_e, cfg.tail_epsilon, cfg.headroom);
}

namespace ops {

ComplexMatrix sigma_minus() { return ComplexMatrix(2, 2, {0, 0, 1, 0}); }
ComplexMatrix sigma_plus() { return ComplexMatrix(2, 2, {0, 1, 0, 0}); }
ComplexMatrix sigma_x() { return ComplexMatrix(2, 2, {0, 1, 1, 0}); }
ComplexMatrix sigma_y() { return ComplexMatrix(2, 2, {0, Complex(0, -1), Complex(0, 1), 0}); }
ComplexMatrix sigma_z() { return ComplexMatrix(2, 2, {1, 0, 0, -1}); }
ComplexMatrix excited_projector() { return ComplexMatrix(2, 2, {1, 0, 0, 0}); }

ComplexMatrix annihilation(std::size_t n) {
    ComplexMatrix a(n, n);
    for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

ComplexMatrix number(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
    return m;
}

} // namespace ops

Hamiltonians build_hamiltonians(const ModelConfig& cfg) {
    validate(cfg);
    const std::size_t n = resolved_truncation(cfg);
    Hamiltonians h;
    h.dim_e = n;
    h.h_s_local = cfg.omega_s * ops::excited_projector();
    h.h_e_local = cfg.omega_e * ops::number(n);
    const auto i_s = ComplexMatrix::identity(2);
    const auto i_e = ComplexMatrix::identity(n);
    h.h_s = kron(h.h_s_local, i_e);
    h.h_e = kron(i_s, h.h_e_local);

    const ComplexMatrix a = ops::annihilation(n);
    const ComplexMatrix ad = a.adjoint();
    switch (cfg.coupling) {
    case CouplingKind::JaynesCummings:
        h.terms.push_back({cfg.g * ops::sigma_minus(), ad});
        h.terms.push_back({cfg.g * ops::sigma_plus(), a});
        break;
    case CouplingKind::Displaced:
        h.terms.push_back({cfg.g * ops::sigma_z(), a + ad});
        break;
    case CouplingKind::Dispersive:
        h.terms.push_back({cfg.g * ops::sigma_z(), ops::number(n)});
        break;
    }
    h.h_se = ComplexMatrix(2 * n, 2 * n);
    for (const auto& term : h.terms) h.h_se += kron(term.system, term.environment);
    h.h = h.h_s + h.h_e + h.h_se;
    return h;
}

ComplexMatrix thermal_state(double omega_e, double beta, std::size_t n) {
    if (n < 2) throw ConfigError("thermal_state: N must be >= 2");
    if (!(beta > 0)) throw ConfigError("thermal_state: beta must be > 0");
    std::vector<double> p(n);
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        p[k] = std::exp(-beta * omega_e * static_cast<double>(k));
        z += p[k];
    }
    for (auto& v : p) v /= z;
    return ComplexMatrix::diagonal(std::span<const double>(p));
}

ComplexMatrix qubit_state(double p_e, Complex p_eg) {
    if (!(p_e >= 0 && p_e <= 1)) throw ConfigError("qubit_state: p_e must lie in [0, 1]");
    if (std::norm(p_eg) > p_e * (1.0 - p_e) + 1e-15)
        throw ConfigError("qubit_state: |p_eg|^2 exceeds p_e * p_g, state is not positive semidefinite");
    return ComplexMatrix(2, 2, {p_e, p_eg, std::conj(p_eg), 1.0 - p_e});
}

ComplexMatrix initial_state(const ModelConfig& cfg) {
    validate(cfg);
    return kron(qubit_state(cfg.p_e, cfg.p_eg), thermal_state(cfg.omega_e, cfg.beta, resolved_truncation(cfg)));
}

ComplexMatrix correction_hamiltonian_system(const Hamiltonians& h, const ComplexMatrix& rho_e) {
    ComplexMatrix out(h.dim_s, h.dim_s);
    for (const auto& term : h.terms) out += trace_product(term.environment, rho_e) * term.system;
    return out;
}

ComplexMatrix correction_hamiltonian_environment(const Hamiltonians& h, const ComplexMatrix& rho_s) {
    ComplexMatrix out(h.dim_e, h.dim_e);
    for (const auto& term : h.terms) out += trace_product(term.system, rho_s) * term.environment;
    return out;
}

} // namespace qtl

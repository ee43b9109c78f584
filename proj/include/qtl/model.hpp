// model.hpp - qubit coupled to a truncated bosonic mode
//
// Basis conventions: the qubit basis is ordered (e, g) so index 0 is the
// excited level; composite index is i * N + n with the qubit first.
// Energies are in units of omega_S and times in units of 1/omega_S.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtl/linalg.hpp"

namespace qtl {

enum class CouplingKind { JaynesCummings, Displaced, Dispersive };

std::string_view to_string(CouplingKind kind);
/// Accepts "jc", "jaynes_cummings", "displaced", "dispersive" (case-insensitive).
std::optional<CouplingKind> parse_coupling(std::string_view name);

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct ModelConfig {
    double omega_s = 1.0;
    double omega_e = 0.9;
    double g = 0.1;
    double beta = 1.0;
    CouplingKind coupling = CouplingKind::JaynesCummings;
    double p_e = 0.25;
    Complex p_eg{0.0, 0.1};
    std::size_t n_levels = 0; // 0 selects choose_truncation
    double dt = 0.005 * kTwoPi;
    double t_max = 100.0;
    double alpha_s = 0.0;
    double tail_epsilon = 1e-10;
    std::size_t headroom = 10;
};

/// Human-readable problems with `cfg`; empty when valid.
std::vector<std::string> validation_errors(const ModelConfig& cfg);
/// Throws ConfigError listing every problem.
void validate(const ModelConfig& cfg);

/// Smallest N whose thermal tail e^{-beta omega N} is below eps_tail, plus
/// `headroom` levels for excitation exchange.
std::size_t choose_truncation(double beta, double omega_e, double eps_tail = 1e-10, std::size_t headroom = 10);

/// Truncation actually used for `cfg`.
std::size_t resolved_truncation(const ModelConfig& cfg);

namespace ops {

ComplexMatrix sigma_minus(); // |g><e|
ComplexMatrix sigma_plus();  // |e><g|
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix excited_projector(); // sigma_plus * sigma_minus
ComplexMatrix annihilation(std::size_t n);
ComplexMatrix number(std::size_t n);

} // namespace ops

/// One product term S (x) E of the interaction Hamiltonian.
struct CouplingTerm {
    ComplexMatrix system;
    ComplexMatrix environment;
};

struct Hamiltonians {
    std::size_t dim_s = 2;
    std::size_t dim_e = 0;
    ComplexMatrix h_s_local; // 2x2
    ComplexMatrix h_e_local; // NxN
    ComplexMatrix h_s;       // embedded
    ComplexMatrix h_e;
    ComplexMatrix h_se;
    ComplexMatrix h;
    /// H_SE = sum_m system_m (x) environment_m
    std::vector<CouplingTerm> terms;
};

Hamiltonians build_hamiltonians(const ModelConfig& cfg);

/// Gibbs state of omega a^dagger a on N levels, renormalised after truncation.
ComplexMatrix thermal_state(double omega_e, double beta, std::size_t n);

/// [[p_e, p_eg], [conj(p_eg), 1 - p_e]]; throws ConfigError if not PSD.
ComplexMatrix qubit_state(double p_e, Complex p_eg);

ComplexMatrix initial_state(const ModelConfig& cfg);

/// Tr_E(H_SE (1 (x) rho_E)) from the coupling terms.
ComplexMatrix correction_hamiltonian_system(const Hamiltonians& h, const ComplexMatrix& rho_e);
/// Tr_S(H_SE (rho_S (x) 1))
ComplexMatrix correction_hamiltonian_environment(const Hamiltonians& h, const ComplexMatrix& rho_s);

} // namespace qtl

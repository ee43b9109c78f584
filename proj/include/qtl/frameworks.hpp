// frameworks.hpp - four energy-accounting schemes over a trajectory
//
//   A  LEMBAS: heat is the entropy-changing part of dU, measured against the
//      energy basis of the bare system Hamiltonian.
//   B  non-local: the interaction is shared between system, environment and
//      a binding energy held in the correlations.
//   C  decomposition: heat from the change of the eigenvalues of rho_S,
//      work from the rotation of its eigenvectors.
//   D  minimal dissipation: split of the time-local generator into an
//      effective Hamiltonian and a dissipator with traceless jump operators.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtl/calculus.hpp"
#include "qtl/propagation.hpp"

namespace qtl {

enum class Framework { A, B, C, D };

char framework_letter(Framework f);

/// Energies in omega_S, times in 1/omega_S. Per-sample vectors cover the
/// interior samples t_0 = 0 .. t_M.
struct EnergyLedger {
    Framework framework = Framework::A;
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> w_flux;
    std::vector<double> q_flux;
    std::vector<double> w_cum;
    std::vector<double> q_cum;
    std::vector<unsigned char> valid;      // sample entered the integrals
    std::vector<unsigned char> unreliable; // cumulative sums miss a gap before this sample
    std::vector<double> det_f;             // D only
    std::vector<unsigned char> singular;   // D only
    std::vector<double> u_chi;             // B only
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return t.size(); }
    /// max |U - U(0) - W_cum - Q_cum| over reliable samples.
    double first_law_residual() const;
};

struct LedgerOptions {
    QuadratureRule rule = QuadratureRule::Cubic;
};

/// Fills w_cum, q_cum and unreliable from the fluxes and validity flags.
void integrate_ledger(EnergyLedger& ledger, double dt, QuadratureRule rule);

/// H_S'(t_k) = Tr_E(H_SE (1 (x) rho_E(t_k)))
ComplexMatrix correction_hamiltonian(const Trajectory& traj, long k);

/// Projects operators onto the part that is block diagonal in the eigenbasis
/// of a fixed Hermitian reference (degenerate levels form one block).
class EnergyBasisProjector {
public:
    explicit EnergyBasisProjector(const ComplexMatrix& reference, double degeneracy_tol = 1e-9);
    ComplexMatrix diagonal_part(const ComplexMatrix& op) const;

private:
    ComplexMatrix vectors_;
    std::vector<std::vector<unsigned char>> keep_;
};

// --- A ------------------------------------------------------------------------

struct PairedLedgers {
    EnergyLedger system;
    EnergyLedger environment;
};

PairedLedgers lembas_ledgers(const Trajectory& traj, const LedgerOptions& options = {});
EnergyLedger lembas_ledger(const Trajectory& traj, const LedgerOptions& options = {});

// --- B ------------------------------------------------------------------------

struct NonlocalLedgers {
    EnergyLedger system;
    EnergyLedger environment;
    std::vector<double> c;       // Tr(H_SE rho_S (x) rho_E)
    std::vector<double> c_dot;
    std::vector<double> u_chi;   // Tr(H_SE chi_SE)
    std::vector<double> u_chi_dot;
};

/// alpha_E = 1 - alpha_S.
NonlocalLedgers nonlocal_ledgers(const Trajectory& traj, double alpha_s, const LedgerOptions& options = {});
EnergyLedger nonlocal_ledger(const Trajectory& traj, double alpha_s, const LedgerOptions& options = {});

// --- C ------------------------------------------------------------------------

struct TrackedSpectrum {
    Series<std::vector<double>> r;          // eigenvalues in tracked order
    Series<ComplexMatrix> vectors;          // columns |r_k>, parallel-transported phases
    Series<unsigned char> degenerate;       // smallest gap below eps_deg
    std::vector<std::string> warnings;
};

inline constexpr double kDegeneracyEpsilon = 1e-6;
inline constexpr double kRateGuard = 1e-12;

/// Eigen-decomposition of each state with eigenpairs ordered by maximal
/// overlap with the previous sample and phases fixed so that
/// <r_k(t - dt)|r_k(t)> is real and positive.
TrackedSpectrum spectral_track(const Series<ComplexMatrix>& states, double eps_deg = kDegeneracyEpsilon);

struct LindbladChannel {
    ComplexMatrix op;
    double rate = 0.0;
};

struct DecompositionGenerator {
    ComplexMatrix k_s;
    std::vector<LindbladChannel> channels; // L_kj = |r_k><r_j|, j with r_j above the guard
};

/// K_S = i sum_k (|r_k'><r_k| - <r_k|r_k'> |r_k><r_k|),
/// c_kj = (1 - delta_{r_j,0}) / d * r_k' / r_j.
DecompositionGenerator decomposition_generator(const std::vector<double>& r, const ComplexMatrix& vectors,
                                               const std::vector<double>& r_dot, const ComplexMatrix& vectors_dot,
                                               double r_guard = kRateGuard);

/// sum_j rate_j (L_j rho L_j^dagger - {L_j^dagger L_j, rho} / 2)
ComplexMatrix apply_dissipator(const std::vector<LindbladChannel>& channels, const ComplexMatrix& rho);
/// -i [H, rho] + dissipator
ComplexMatrix apply_generator(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels,
                              const ComplexMatrix& rho);

struct DecompositionAnalysis {
    EnergyLedger ledger;
    TrackedSpectrum spectrum;
    /// ||-i[K_S, rho_S] + D[rho_S] - d rho_S/dt||_max per interior sample
    /// (NaN on degenerate samples).
    std::vector<double> reconstruction_error;
    /// |Tr(H_S D[rho_S]) - sum_k r_k' <r_k|H_S|r_k>| per interior sample.
    std::vector<double> heat_mismatch;
};

DecompositionAnalysis decomposition_analysis(const Trajectory& traj, const LedgerOptions& options = {});
EnergyLedger decomposition_ledger(const Trajectory& traj, const LedgerOptions& options = {});

// --- D ------------------------------------------------------------------------

struct GeneratorRates {
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double y = 0.0;
};

GeneratorRates rates_from_generator(const Matrix4& l);

struct MinimalDissipation {
    GeneratorRates rates;
    ComplexMatrix h_d;                      // -B sigma^dagger sigma
    std::array<LindbladChannel, 3> channels; // sigma^dagger, sigma, sigma_z
};

MinimalDissipation minimal_dissipation_split(const Matrix4& l);

/// Pauli-basis matrix of rho -> -i[H, rho] + D[rho].
Matrix4 generator_matrix(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels);

/// Entries of L outside the {A, B, X, Y} pattern, max abs.
double off_structure_defect(const Matrix4& l);

struct MinimalDissipationOptions {
    LedgerOptions ledger;
    GeneratorOptions generator{StencilOrder::Sixth, 1e-6};
};

/// Generator recomputed from the trajectory's map series.
EnergyLedger minimal_dissipation_ledger(const Trajectory& traj, const MinimalDissipationOptions& options = {});
EnergyLedger minimal_dissipation_ledger(const Trajectory& traj, const GeneratorSeries& generator,
                                        const LedgerOptions& options = {});

// --- closed-form rates ----------------------------------------------------------

/// Readings of the displaced-coupling A(t) closed form; all are kept.
enum class DisplacedRateVariant {
    AsPrinted,            // the cumulative exponent 2 g^2 coth(b w / 2) (1 - cos w t) / w^2
    PrintedLogDerivative, // its time derivative with a minus sign: -2 g^2 coth(b w / 2) sin(w t) / w
    ExactLogDerivative,   // from the exact coherence decay: -4 g^2 coth(b w / 2) sin(w t) / w
};

inline constexpr DisplacedRateVariant kDefaultDisplacedVariant = DisplacedRateVariant::ExactLogDerivative;

std::string_view to_string(DisplacedRateVariant v);
std::optional<DisplacedRateVariant> parse_displaced_variant(std::string_view name);

/// Lab-frame rates (A, B, X, Y) of the generator for a thermal field. B
/// includes the bare rotation -omega_S. Returns NaN entries where the
/// closed form is singular.
GeneratorRates analytic_rates(const ModelConfig& cfg, double t,
                              DisplacedRateVariant variant = kDefaultDisplacedVariant);

/// Same, for an explicitly supplied initial field state. Throws ConfigError
/// unless the field is diagonal; the displaced and dispersive closed forms
/// additionally require the thermal state of cfg.
GeneratorRates analytic_rates(const ModelConfig& cfg, const ComplexMatrix& rho_e0, double t,
                              DisplacedRateVariant variant = kDefaultDisplacedVariant);

} // namespace qtl

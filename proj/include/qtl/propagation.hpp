// propagation.hpp - exact composite evolution, reduced states and the
// Pauli-basis dynamical map
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qtl/calculus.hpp"
#include "qtl/linalg.hpp"
#include "qtl/model.hpp"

namespace qtl {

/// Dense real 4x4 matrix, row-major.
struct Matrix4 {
    std::array<double, 16> a{};

    double& operator()(int i, int j) noexcept { return a[static_cast<std::size_t>(4 * i + j)]; }
    double operator()(int i, int j) const noexcept { return a[static_cast<std::size_t>(4 * i + j)]; }

    static Matrix4 identity();
    Matrix4& operator+=(const Matrix4& o) noexcept;
    Matrix4& operator-=(const Matrix4& o) noexcept;
    Matrix4& operator*=(double s) noexcept;
    double max_abs() const noexcept;
    bool operator==(const Matrix4&) const = default;
};

Matrix4 operator+(Matrix4 a, const Matrix4& b) noexcept;
Matrix4 operator-(Matrix4 a, const Matrix4& b) noexcept;
Matrix4 operator*(double s, Matrix4 a) noexcept;
Matrix4 operator*(Matrix4 a, double s) noexcept;
Matrix4 operator*(const Matrix4& a, const Matrix4& b) noexcept;
std::array<double, 4> operator*(const Matrix4& m, const std::array<double, 4>& v) noexcept;

/// Determinant by partially pivoted elimination.
double determinant(const Matrix4& m);
/// Inverse by Gauss-Jordan; throws NumericalError on an exactly singular pivot.
Matrix4 inverse(const Matrix4& m);

/// Orthonormal Hermitian basis X = {1, sigma_x, sigma_y, sigma_z} / sqrt(2).
const std::array<ComplexMatrix, 4>& pauli_basis();
/// v_k = Tr(X_k rho), so v = (1, x, y, z) / sqrt(2) for a unit-trace state.
std::array<double, 4> coherence_vector(const ComplexMatrix& rho_s);
ComplexMatrix state_from_coherence(const std::array<double, 4>& v);

/// Per-sample data kept by a trajectory. The composite state is not stored;
/// Trajectory::composite_state rebuilds it on demand.
struct StateSample {
    double t = 0.0;
    ComplexMatrix rho_s;  // Tr_E rho
    ComplexMatrix rho_e;  // Tr_S rho
    ComplexMatrix comm_s; // Tr_E [H_SE, rho]
    ComplexMatrix comm_e; // Tr_S [H_SE, rho]
    Matrix4 f;            // Pauli-basis map matrix
    double energy = 0.0;   // Tr(H rho)
    double trace = 0.0;    // Tr(rho)
    double se_energy = 0.0; // Tr(H_SE rho)
    double se_power = 0.0;  // d/dt Tr(H_SE rho) = -i Tr([H_SE, H] rho)
    double s_total = 0.0;   // von Neumann entropy of rho (NaN when not computed)
    double leak = 0.0;      // population in the top two oscillator levels
};

struct EvolveOptions {
    bool parallel = true;        // OpenMP over time samples; results identical to serial
    bool total_entropy = true;   // spectrum of the composite state at every sample
    long halo = 6;               // extra samples on each side of [0, t_max]; a 7-point stencil of a 7-point stencil fits
    double leak_threshold = 1e-8;
};

class Trajectory {
public:
    Trajectory(ModelConfig cfg, Hamiltonians h, EigenSystem spectrum, ComplexMatrix rho0, Series<StateSample> samples,
               std::vector<std::string> warnings);

    const ModelConfig& config() const noexcept { return cfg_; }
    const Hamiltonians& hamiltonians() const noexcept { return h_; }
    double dt() const noexcept { return cfg_.dt; }
    /// Interior samples t_0 = 0 .. t_{M}.
    std::size_t size() const noexcept { return samples_.size(); }
    long halo() const noexcept { return samples_.halo(); }
    const StateSample& operator[](long k) const { return samples_[k]; }
    const Series<StateSample>& samples() const noexcept { return samples_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// rho(t_k), recomputed from the stored spectrum of H.
    ComplexMatrix composite_state(long k) const;
    /// chi_SE(t_k) = rho - rho_S (x) rho_E
    ComplexMatrix correlation(long k) const;

    /// d rho_S / dt = -i [H_S, rho_S] - i Tr_E[H_SE, rho], exact.
    ComplexMatrix drho_s(long k) const;
    ComplexMatrix drho_e(long k) const;

    /// Series helpers over all samples, halo included.
    Series<Matrix4> map_series() const;
    Series<ComplexMatrix> rho_s_series() const;

private:
    ModelConfig cfg_;
    Hamiltonians h_;
    EigenSystem spectrum_;
    ComplexMatrix rho0_;
    Series<StateSample> samples_;
    std::vector<std::string> warnings_;
};

/// Number of interior samples for cfg: round(t_max / dt) + 1.
std::size_t sample_count(const ModelConfig& cfg);

Trajectory evolve(const ModelConfig& cfg, const EvolveOptions& options = {});

/// F_kl = Tr(X_k Tr_E(U (X_l (x) rho_E(0)) U^dagger)) at a single time.
Matrix4 dynamical_map_matrix(const ModelConfig& cfg, double t);

struct SingularWindow {
    long first = 0; // sample indices, inclusive
    long last = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct GeneratorOptions {
    StencilOrder order = StencilOrder::Second;
    double delta_sing = 1e-6;
};

struct GeneratorSeries {
    Series<Matrix4> l;                // NaN entries on singular samples
    Series<double> det_f;
    Series<unsigned char> singular;
    std::vector<SingularWindow> windows; // interior samples only
    StencilOrder order = StencilOrder::Second;
    /// Samples whose derivative used the full centred stencil of `order`.
    bool full_stencil(long k) const noexcept {
        const long r = static_cast<long>(order) / 2;
        return k - r >= l.first() && k + r <= l.last();
    }
};

/// L = dF/dt F^{-1}. Samples with |det F| < delta_sing are flagged and never
/// inverted.
GeneratorSeries generator_from_map(const Series<Matrix4>& f, double dt, const GeneratorOptions& options = {});

/// Contiguous runs of set flags among the interior samples.
std::vector<SingularWindow> flagged_windows(const Series<unsigned char>& flags, double dt);

} // namespace qtl

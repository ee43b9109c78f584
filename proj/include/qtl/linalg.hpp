// linalg.hpp - dense complex matrices and the operations the simulator needs
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qtl/errors.hpp"

namespace qtl {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Entries are stored as interleaved
/// (re, im) pairs of doubles.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> values);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix diagonal(std::span<const Complex> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    Complex* data() noexcept { return data_.data(); }
    const Complex* data() const noexcept { return data_.data(); }
    std::span<Complex> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    Complex trace() const;

    /// max_ij |M_ij|
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scalar);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// lhs * rhs^dagger
ComplexMatrix multiply_adjoint(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(a b) in O(n^2) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |M_ij - conj(M_ji)|
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

/// (A (x) B)[(i dB + k), (j dB + l)] = A[i,j] B[k,l]
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { System, Environment };

/// Partial trace of an operator on H_S (x) H_E. `keep` names the factor that
/// survives: keep=System returns Tr_E(M), keep=Environment returns Tr_S(M).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_s, std::size_t dim_e, Subsystem keep);

/// Compressed-row sparse operator used for the (very sparse) model
/// Hamiltonians when they multiply dense composite states.
class SparseMatrix {
public:
    SparseMatrix() = default;
    static SparseMatrix from_dense(const ComplexMatrix& m, double drop_tol = 0.0);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    ComplexMatrix to_dense() const;

    /// this * m
    ComplexMatrix left_multiply(const ComplexMatrix& m) const;
    /// m * this
    ComplexMatrix right_multiply(const ComplexMatrix& m) const;
    /// Tr(this * m)
    Complex trace_product(const ComplexMatrix& m) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_index_;
    std::vector<Complex> values_;
};

/// [S, m] for sparse S.
ComplexMatrix commutator(const SparseMatrix& s, const ComplexMatrix& m);

struct EigenSystem {
    std::vector<double> values;   // ascending
    ComplexMatrix vectors;        // orthonormal columns
};

/// Hermitian eigendecomposition by Householder tridiagonalisation followed by
/// implicit QL. Throws NumericalError if `m` is not Hermitian within `tol`.
EigenSystem hermitian_eig(const ComplexMatrix& m, double tol = 1e-10);

/// Eigenvalues only (no eigenvector accumulation), ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol = 1e-10);

/// Cyclic complex Jacobi. Slower than hermitian_eig; kept as an independent
/// reference. Sweeps until the off-diagonal Frobenius norm drops below
/// `off_tol` times the matrix norm.
EigenSystem jacobi_eig(const ComplexMatrix& m, double off_tol = 1e-12, double tol = 1e-10);

/// V f(Lambda) V^dagger for a scalar function evaluated on the spectrum.
template <typename F>
ComplexMatrix spectral_apply(const EigenSystem& es, F&& f);

/// U rho0 U^dagger with U = exp(-i H t), from one spectral decomposition of H.
ComplexMatrix unitary_evolution(const ComplexMatrix& h, const ComplexMatrix& rho0, double t);

/// Eigenvalues in [-psd_clamp, 0) are treated as zero.
inline constexpr double kPsdClamp = 1e-10;

/// -sum lambda ln lambda in nats with 0 ln 0 = 0. Throws NumericalError on an
/// eigenvalue below -kPsdClamp.
double von_neumann_entropy(const ComplexMatrix& rho);
double von_neumann_entropy_from_spectrum(std::span<const double> eigenvalues);

// ---------------------------------------------------------------------------

template <typename F>
ComplexMatrix spectral_apply(const EigenSystem& es, F&& f) {
    const std::size_t n = es.values.size();
    ComplexMatrix scaled = es.vectors;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex fj = f(es.values[j]);
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= fj;
    }
    return multiply_adjoint(scaled, es.vectors);
}

} // namespace qtl

// linalg.cpp - ComplexMatrix, Kronecker products, partial traces, sparse products
#include "qtl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtl/kernels.hpp"

namespace qtl {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()) + ")");
}

kernels::MatrixView view(const ComplexMatrix& m) { return {m.data(), m.rows(), m.cols()}; }
kernels::MutableMatrixView mutable_view(ComplexMatrix& m) { return {m.data(), m.rows(), m.cols()}; }

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> values)
    : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) throw DimensionError("ComplexMatrix: initializer size does not match shape");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace of a non-square matrix");
    Complex t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) noexcept {
    for (auto& z : data_) z *= scalar;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }
ComplexMatrix operator*(ComplexMatrix m, Complex scalar) { return m *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw DimensionError("matrix product: inner dimensions differ");
    ComplexMatrix out(lhs.rows(), rhs.cols());
    kernels::serial::gemm(view(lhs), view(rhs), mutable_view(out));
    return out;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.cols()) throw DimensionError("multiply_adjoint: column counts differ");
    const ComplexMatrix rt = rhs.transpose();
    ComplexMatrix out(lhs.rows(), rhs.rows());
    kernels::serial::gemm_conj(view(lhs), view(rt), mutable_view(out));
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: shapes incompatible");
    Complex t{};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    return t;
}

double hermiticity_defect(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("hermiticity check on a non-square matrix");
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return m.is_square() && hermiticity_defect(m) < tol; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rb = b.rows(), cb = b.cols();
    ComplexMatrix out(a.rows() * rb, a.cols() * cb);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_s, std::size_t dim_e, Subsystem keep) {
    const std::size_t n = dim_s * dim_e;
    if (m.rows() != n || m.cols() != n)
        throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected " + std::to_string(n) + "x" + std::to_string(n));
    if (keep == Subsystem::System) {
        ComplexMatrix out(dim_s, dim_s);
        for (std::size_t a = 0; a < dim_s; ++a)
            for (std::size_t b = 0; b < dim_s; ++b) {
                Complex s{};
                for (std::size_t k = 0; k < dim_e; ++k) s += m(a * dim_e + k, b * dim_e + k);
                out(a, b) = s;
            }
        return out;
    }
    ComplexMatrix out(dim_e, dim_e);
    for (std::size_t a = 0; a < dim_s; ++a)
        for (std::size_t k = 0; k < dim_e; ++k)
            for (std::size_t l = 0; l < dim_e; ++l) out(k, l) += m(a * dim_e + k, a * dim_e + l);
    return out;
}

// --- sparse ----------------------------------------------------------------

SparseMatrix SparseMatrix::from_dense(const ComplexMatrix& m, double drop_tol) {
    SparseMatrix s;
    s.rows_ = m.rows();
    s.cols_ = m.cols();
    s.row_start_.reserve(m.rows() + 1);
    s.row_start_.push_back(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > drop_tol) {
                s.col_index_.push_back(j);
                s.values_.push_back(m(i, j));
            }
        s.row_start_.push_back(s.values_.size());
    }
    return s;
}

ComplexMatrix SparseMatrix::to_dense() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) m(i, col_index_[p]) = values_[p];
    return m;
}

ComplexMatrix SparseMatrix::left_multiply(const ComplexMatrix& m) const {
    if (cols_ != m.rows()) throw DimensionError("SparseMatrix::left_multiply: shape mismatch");
    ComplexMatrix out(rows_, m.cols());
    for (std::size_t i = 0; i < rows_; ++i) {
        auto orow = out.row(i);
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
            const Complex v = values_[p];
            auto mrow = m.row(col_index_[p]);
            for (std::size_t j = 0; j < m.cols(); ++j) orow[j] += v * mrow[j];
        }
    }
    return out;
}

ComplexMatrix SparseMatrix::right_multiply(const ComplexMatrix& m) const {
    if (m.cols() != rows_) throw DimensionError("SparseMatrix::right_multiply: shape mismatch");
    ComplexMatrix out(m.rows(), cols_);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto mrow = m.row(r);
        auto orow = out.row(r);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Complex mi = mrow[i];
            if (mi == Complex{}) continue;
            for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) orow[col_index_[p]] += mi * values_[p];
        }
    }
    return out;
}

Complex SparseMatrix::trace_product(const ComplexMatrix& m) const {
    if (m.rows() != cols_ || m.cols() != rows_) throw DimensionError("SparseMatrix::trace_product: shape mismatch");
    Complex t{};
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) t += values_[p] * m(col_index_[p], i);
    return t;
}

ComplexMatrix commutator(const SparseMatrix& s, const ComplexMatrix& m) {
    return s.left_multiply(m) - s.right_multiply(m);
}

// --- evolution and entropy --------------------------------------------------

ComplexMatrix unitary_evolution(const ComplexMatrix& h, const ComplexMatrix& rho0, double t) {
    if (h.rows() != rho0.rows() || !rho0.is_square()) throw DimensionError("unitary_evolution: H and rho0 differ in shape");
    if (t == 0.0) return rho0;
    const EigenSystem es = hermitian_eig(h);
    const ComplexMatrix u = spectral_apply(es, [t](double e) { return std::polar(1.0, -e * t); });
    return multiply_adjoint(u * rho0, u);
}

double von_neumann_entropy_from_spectrum(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (double lam : eigenvalues) {
        if (lam < -kPsdClamp)
            throw NumericalError("von_neumann_entropy: eigenvalue " + std::to_string(lam) + " below -" +
                                 std::to_string(kPsdClamp));
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return std::max(s, 0.0);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    const auto values = hermitian_eigenvalues(rho);
    return von_neumann_entropy_from_spectrum(values);
}

} // namespace qtl

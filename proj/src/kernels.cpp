// kernels.cpp - complex matrix products, serial reference and OpenMP variant
#include "qtl/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include <omp.h>

namespace qtl::kernels {

namespace {

void check_shapes(MatrixView a, MatrixView b, MutableMatrixView c) {
    if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
        throw std::invalid_argument("gemm: shape mismatch");
}

// One output row. The interleaved re/im layout lets the compiler vectorise
// the inner loop without the NaN-aware complex multiply helper.
template <bool Conjugate>
inline void gemm_row(const Complex* arow, std::size_t inner, const Complex* b, std::size_t ncols, Complex* crow) {
    double* c = reinterpret_cast<double*>(crow);
    std::fill(c, c + 2 * ncols, 0.0);
    for (std::size_t k = 0; k < inner; ++k) {
        const double ar = arow[k].real();
        const double ai = arow[k].imag();
        if (ar == 0.0 && ai == 0.0) continue;
        const double* brow = reinterpret_cast<const double*>(b + k * ncols);
        for (std::size_t j = 0; j < ncols; ++j) {
            const double br = brow[2 * j];
            const double bi = Conjugate ? -brow[2 * j + 1] : brow[2 * j + 1];
            c[2 * j] += ar * br - ai * bi;
            c[2 * j + 1] += ar * bi + ai * br;
        }
    }
}

} // namespace

namespace serial {

void gemm(MatrixView a, MatrixView b, MutableMatrixView c) {
    check_shapes(a, b, c);
    for (std::size_t i = 0; i < a.rows; ++i)
        gemm_row<false>(a.data + i * a.cols, a.cols, b.data, b.cols, c.data + i * c.cols);
}

void gemm_conj(MatrixView a, MatrixView b, MutableMatrixView c) {
    check_shapes(a, b, c);
    for (std::size_t i = 0; i < a.rows; ++i)
        gemm_row<true>(a.data + i * a.cols, a.cols, b.data, b.cols, c.data + i * c.cols);
}

} // namespace serial

namespace parallel {

void gemm(MatrixView a, MatrixView b, MutableMatrixView c) {
    check_shapes(a, b, c);
    const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        gemm_row<false>(a.data + i * a.cols, a.cols, b.data, b.cols, c.data + i * c.cols);
}

void gemm_conj(MatrixView a, MatrixView b, MutableMatrixView c) {
    check_shapes(a, b, c);
    const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
        gemm_row<true>(a.data + i * a.cols, a.cols, b.data, b.cols, c.data + i * c.cols);
}

} // namespace parallel

int max_threads() { return omp_get_max_threads(); }

} // namespace qtl::kernels

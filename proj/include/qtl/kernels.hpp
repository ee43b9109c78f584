// kernels.hpp - hot loops with a serial reference and an OpenMP variant
//
// Both variants perform the same arithmetic in the same order for every
// output element, so results are bit-identical regardless of thread count.
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qtl::kernels {

using Complex = std::complex<double>;

/// Row-major view used by the raw kernels.
struct MatrixView {
    const Complex* data;
    std::size_t rows;
    std::size_t cols;
};

struct MutableMatrixView {
    Complex* data;
    std::size_t rows;
    std::size_t cols;
};

namespace serial {

/// c = a * b
void gemm(MatrixView a, MatrixView b, MutableMatrixView c);

/// c = a * b, where b is used row-by-row with conjugation: c = a * conj(b).
/// Together with an explicit transpose this yields a * b^dagger.
void gemm_conj(MatrixView a, MatrixView b, MutableMatrixView c);

} // namespace serial

namespace parallel {

void gemm(MatrixView a, MatrixView b, MutableMatrixView c);
void gemm_conj(MatrixView a, MatrixView b, MutableMatrixView c);

} // namespace parallel

/// Number of threads the parallel kernels will use.
int max_threads();

} // namespace qtl::kernels

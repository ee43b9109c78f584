// support.hpp - shared fixtures for the unit tests
#pragma once

#include <random>

#include "qtl/linalg.hpp"
#include "qtl/model.hpp"

namespace qtl::test {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = {d(rng), d(rng)};
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    const ComplexMatrix a = random_matrix(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

/// Random full-rank density matrix A A^dagger / Tr.
inline ComplexMatrix random_state(std::size_t n, std::mt19937_64& rng) {
    const ComplexMatrix a = random_matrix(n, n, rng);
    ComplexMatrix rho = multiply_adjoint(a, a);
    rho *= 1.0 / rho.trace().real();
    return rho;
}

/// Small, fast model: short horizon and a low truncation.
inline ModelConfig small_config(CouplingKind kind = CouplingKind::JaynesCummings) {
    ModelConfig cfg;
    cfg.coupling = kind;
    cfg.n_levels = 12;
    cfg.t_max = 6.0;
    cfg.g = 0.2;
    return cfg;
}

} // namespace qtl::test

// ledger.cpp - pieces shared by the four accounting schemes
#include <algorithm>
#include <cmath>

#include "qtl/frameworks.hpp"

namespace qtl {

char framework_letter(Framework f) {
    switch (f) {
    case Framework::A: return 'A';
    case Framework::B: return 'B';
    case Framework::C: return 'C';
    case Framework::D: return 'D';
    }
    return '?';
}

double EnergyLedger::first_law_residual() const {
    double worst = 0.0;
    if (u.empty()) return worst;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!unreliable.empty() && unreliable[k]) continue;
        if (!valid.empty() && !valid[k]) continue;
        worst = std::max(worst, std::abs(u[k] - u[0] - w_cum[k] - q_cum[k]));
    }
    return worst;
}

void integrate_ledger(EnergyLedger& ledger, double dt, QuadratureRule rule) {
    const std::size_t n = ledger.size();
    if (ledger.valid.empty()) ledger.valid.assign(n, 1);
    ledger.w_cum = integrate_cumulative(ledger.w_flux, dt, rule, ledger.valid);
    ledger.q_cum = integrate_cumulative(ledger.q_flux, dt, rule, ledger.valid);
    ledger.unreliable.assign(n, 0);
    bool gap = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (!ledger.valid[k]) gap = true;
        ledger.unreliable[k] = gap ? 1 : 0;
    }
}

ComplexMatrix correction_hamiltonian(const Trajectory& traj, long k) {
    return correction_hamiltonian_system(traj.hamiltonians(), traj[k].rho_e);
}

EnergyBasisProjector::EnergyBasisProjector(const ComplexMatrix& reference, double degeneracy_tol) {
    const EigenSystem es = hermitian_eig(reference);
    vectors_ = es.vectors;
    const std::size_t n = es.values.size();
    keep_.assign(n, std::vector<unsigned char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            keep_[i][j] = std::abs(es.values[i] - es.values[j]) <= degeneracy_tol ? 1 : 0;
}

ComplexMatrix EnergyBasisProjector::diagonal_part(const ComplexMatrix& op) const {
    ComplexMatrix rotated = vectors_.adjoint() * op * vectors_;
    for (std::size_t i = 0; i < rotated.rows(); ++i)
        for (std::size_t j = 0; j < rotated.cols(); ++j)
            if (!keep_[i][j]) rotated(i, j) = 0.0;
    return multiply_adjoint(vectors_ * rotated, vectors_);
}

} // namespace qtl

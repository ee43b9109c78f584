// lembas.cpp - framework A
//
// With the correction Hamiltonian split into its part diagonal in the bare
// energy basis (a) and the rest (b), the effective Hamiltonian is
// H^A = H_S + H'_a and
//   U = Tr(H^A rho_S)
//   Q' = -i Tr(H^A Tr_E[H_SE, chi])
//   W' = Tr(dH'_a/dt rho_S) - i Tr([H^A, H'_b] rho_S).
// The environment ledger mirrors this with the roles exchanged. All rates use
// the exact equations of motion, so no finite differences enter.
#include "qtl/frameworks.hpp"

namespace qtl {

namespace {

struct Side {
    const ComplexMatrix& h_bare;
    const EnergyBasisProjector& projector;
};

// One sample of one side. `correction` is H', `correction_dot` its exact
// time derivative, `comm` the partial trace of [H_SE, rho].
void lembas_sample(const Side& side, const ComplexMatrix& rho, const ComplexMatrix& comm,
                   const ComplexMatrix& correction, const ComplexMatrix& correction_dot, double& u, double& w,
                   double& q) {
    const ComplexMatrix h_a = side.projector.diagonal_part(correction);
    const ComplexMatrix h_b = correction - h_a;
    const ComplexMatrix h_eff = side.h_bare + h_a;
    const ComplexMatrix chi_comm = comm - commutator(correction, rho);
    const Complex minus_i(0, -1);
    u = trace_product(h_eff, rho).real();
    q = (minus_i * trace_product(h_eff, chi_comm)).real();
    w = (trace_product(side.projector.diagonal_part(correction_dot), rho) +
         minus_i * trace_product(commutator(h_eff, h_b), rho))
            .real();
}

EnergyLedger empty_ledger(std::size_t n) {
    EnergyLedger l;
    l.framework = Framework::A;
    l.t.resize(n);
    l.u.resize(n);
    l.w_flux.resize(n);
    l.q_flux.resize(n);
    return l;
}

} // namespace

PairedLedgers lembas_ledgers(const Trajectory& traj, const LedgerOptions& options) {
    const Hamiltonians& h = traj.hamiltonians();
    const EnergyBasisProjector ps(h.h_s_local);
    const EnergyBasisProjector pe(h.h_e_local);
    const Side sys{h.h_s_local, ps};
    const Side env{h.h_e_local, pe};
    const std::size_t n = traj.size();
    PairedLedgers out{empty_ledger(n), empty_ledger(n)};

    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        const StateSample& s = traj[k];
        const ComplexMatrix drs = traj.drho_s(k);
        const ComplexMatrix dre = traj.drho_e(k);
        out.system.t[i] = out.environment.t[i] = s.t;
        lembas_sample(sys, s.rho_s, s.comm_s, correction_hamiltonian_system(h, s.rho_e),
                      correction_hamiltonian_system(h, dre), out.system.u[i], out.system.w_flux[i],
                      out.system.q_flux[i]);
        lembas_sample(env, s.rho_e, s.comm_e, correction_hamiltonian_environment(h, s.rho_s),
                      correction_hamiltonian_environment(h, drs), out.environment.u[i], out.environment.w_flux[i],
                      out.environment.q_flux[i]);
    }
    integrate_ledger(out.system, traj.dt(), options.rule);
    integrate_ledger(out.environment, traj.dt(), options.rule);
    return out;
}

EnergyLedger lembas_ledger(const Trajectory& traj, const LedgerOptions& options) {
    return lembas_ledgers(traj, options).system;
}

} // namespace qtl

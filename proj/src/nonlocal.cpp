// nonlocal.cpp - framework B
//
// With c = Tr(H_SE rho_S (x) rho_E) the effective Hamiltonians are
// H^B_S = H_S + H'_S - alpha_S c and H^B_E = H_E + H'_E - alpha_E c, with
// alpha_S + alpha_E = 1. The remainder Tr(H_SE chi) is the binding energy.
#include "qtl/frameworks.hpp"

namespace qtl {

NonlocalLedgers nonlocal_ledgers(const Trajectory& traj, double alpha_s, const LedgerOptions& options) {
    const Hamiltonians& h = traj.hamiltonians();
    const double alpha_e = 1.0 - alpha_s;
    const std::size_t n = traj.size();
    const Complex minus_i(0, -1);

    NonlocalLedgers out;
    for (EnergyLedger* l : {&out.system, &out.environment}) {
        l->framework = Framework::B;
        l->t.resize(n);
        l->u.resize(n);
        l->w_flux.resize(n);
        l->q_flux.resize(n);
    }
    out.c.resize(n);
    out.c_dot.resize(n);
    out.u_chi.resize(n);
    out.u_chi_dot.resize(n);

    const auto id_s = ComplexMatrix::identity(h.dim_s);
    const auto id_e = ComplexMatrix::identity(h.dim_e);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        const StateSample& s = traj[k];
        const ComplexMatrix drs = traj.drho_s(k);
        const ComplexMatrix dre = traj.drho_e(k);
        const ComplexMatrix hs_corr = correction_hamiltonian_system(h, s.rho_e);
        const ComplexMatrix he_corr = correction_hamiltonian_environment(h, s.rho_s);
        const double c = trace_product(hs_corr, s.rho_s).real();
        const double c_dot = (trace_product(hs_corr, drs) + trace_product(he_corr, dre)).real();

        const ComplexMatrix hb_s = h.h_s_local + hs_corr - (alpha_s * c) * id_s;
        const ComplexMatrix hb_e = h.h_e_local + he_corr - (alpha_e * c) * id_e;
        const ComplexMatrix chi_s = s.comm_s - commutator(hs_corr, s.rho_s);
        const ComplexMatrix chi_e = s.comm_e - commutator(he_corr, s.rho_e);

        out.system.t[i] = out.environment.t[i] = s.t;
        out.system.u[i] = trace_product(hb_s, s.rho_s).real();
        out.system.w_flux[i] = trace_product(correction_hamiltonian_system(h, dre), s.rho_s).real() - alpha_s * c_dot;
        out.system.q_flux[i] = (minus_i * trace_product(hb_s, chi_s)).real();
        out.environment.u[i] = trace_product(hb_e, s.rho_e).real();
        out.environment.w_flux[i] =
            trace_product(correction_hamiltonian_environment(h, drs), s.rho_e).real() - alpha_e * c_dot;
        out.environment.q_flux[i] = (minus_i * trace_product(hb_e, chi_e)).real();

        out.c[i] = c;
        out.c_dot[i] = c_dot;
        out.u_chi[i] = s.se_energy - c;
        out.u_chi_dot[i] = s.se_power - c_dot;
    }
    integrate_ledger(out.system, traj.dt(), options.rule);
    integrate_ledger(out.environment, traj.dt(), options.rule);
    out.system.u_chi = out.u_chi;
    out.environment.u_chi = out.u_chi;
    return out;
}

EnergyLedger nonlocal_ledger(const Trajectory& traj, double alpha_s, const LedgerOptions& options) {
    return nonlocal_ledgers(traj, alpha_s, options).system;
}

} // namespace qtl

// observables.cpp - entropy record
#include "qtl/observables.hpp"

#include <cmath>
#include <limits>

namespace qtl {

EntropyRecord entropy_record(const Trajectory& traj, std::span<const EnergyLedger> ledgers, double beta) {
    const std::size_t n = traj.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EntropyRecord rec;
    rec.t.resize(n);
    rec.s_s.resize(n);
    rec.s_e.resize(n);
    rec.s_total.resize(n);
    rec.i_se.resize(n);
    rec.ds_s.resize(n);
    for (auto& s : rec.sigma) s.assign(n, nan);

    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        const StateSample& s = traj[k];
        rec.t[i] = s.t;
        rec.s_s[i] = von_neumann_entropy(s.rho_s);
        rec.s_e[i] = von_neumann_entropy(s.rho_e);
        rec.s_total[i] = std::isnan(s.s_total) ? von_neumann_entropy(traj.composite_state(k)) : s.s_total;
        rec.i_se[i] = rec.s_s[i] + rec.s_e[i] - rec.s_total[i];
        rec.ds_s[i] = rec.s_s[i] - rec.s_s[0];
    }
    for (const EnergyLedger& l : ledgers) {
        if (l.size() != n) throw DimensionError("entropy_record: ledger length differs from trajectory");
        auto& sigma = rec.sigma[static_cast<std::size_t>(l.framework)];
        for (std::size_t i = 0; i < n; ++i) sigma[i] = rec.ds_s[i] - beta * l.q_cum[i];
    }
    return rec;
}

} // namespace qtl

// observables.hpp - entropies, mutual information and entropy production
#pragma once

#include <array>
#include <span>
#include <vector>

#include "qtl/frameworks.hpp"

namespace qtl {

/// All entropies in nats, per interior sample.
struct EntropyRecord {
    std::vector<double> t;
    std::vector<double> s_s;
    std::vector<double> s_e;
    std::vector<double> s_total;
    std::vector<double> i_se; // S_S + S_E - S_total
    std::vector<double> ds_s; // S_S(t) - S_S(0)
    /// Sigma_S = dS_S - beta Q_cum for frameworks A..D; NaN where a
    /// framework's ledger was not supplied or its Q_cum is undefined.
    std::array<std::vector<double>, 4> sigma;
};

EntropyRecord entropy_record(const Trajectory& traj, std::span<const EnergyLedger> ledgers, double beta);

} // namespace qtl

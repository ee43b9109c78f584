// minimal_dissipation.cpp - framework D
//
// The generator L = dF/dt F^{-1} has the pattern
//   (0 0 0 0; 0 A B 0; 0 -B A 0; X 0 0 Y)
// and in operator form reads
//   -i[-B s+s, rho] + (X-Y)/2 D_{s+}[rho] - (X+Y)/2 D_{s}[rho] + (Y-2A)/4 D_{sz}[rho]
// with s = sigma. All three jump operators are traceless, so the split is the
// minimal one and H^D = -B s+s.
#include <cmath>
#include <limits>
#include <sstream>

#include "qtl/frameworks.hpp"

namespace qtl {

GeneratorRates rates_from_generator(const Matrix4& l) { return {l(1, 1), l(1, 2), l(3, 0), l(3, 3)}; }

MinimalDissipation minimal_dissipation_split(const Matrix4& l) {
    MinimalDissipation md;
    md.rates = rates_from_generator(l);
    const auto& r = md.rates;
    md.h_d = -r.b * ops::excited_projector();
    md.channels = {LindbladChannel{ops::sigma_plus(), 0.5 * (r.x - r.y)},
                   LindbladChannel{ops::sigma_minus(), -0.5 * (r.x + r.y)},
                   LindbladChannel{ops::sigma_z(), 0.25 * (r.y - 2.0 * r.a)}};
    return md;
}

Matrix4 generator_matrix(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels) {
    const auto& x = pauli_basis();
    Matrix4 l;
    for (int c = 0; c < 4; ++c) {
        const ComplexMatrix image = apply_generator(h, channels, x[static_cast<std::size_t>(c)]);
        for (int r = 0; r < 4; ++r) l(r, c) = trace_product(x[static_cast<std::size_t>(r)], image).real();
    }
    return l;
}

double off_structure_defect(const Matrix4& l) {
    static constexpr bool pattern[4][4] = {
        {false, false, false, false}, {false, true, true, false}, {false, true, true, false}, {true, false, false, true}};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!pattern[i][j]) worst = std::max(worst, std::abs(l(i, j)));
    worst = std::max(worst, std::abs(l(1, 1) - l(2, 2)));
    worst = std::max(worst, std::abs(l(1, 2) + l(2, 1)));
    return worst;
}

EnergyLedger minimal_dissipation_ledger(const Trajectory& traj, const MinimalDissipationOptions& options) {
    return minimal_dissipation_ledger(traj, generator_from_map(traj.map_series(), traj.dt(), options.generator),
                                      options.ledger);
}

EnergyLedger minimal_dissipation_ledger(const Trajectory& traj, const GeneratorSeries& generator,
                                        const LedgerOptions& options) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Series<Matrix4>& l = generator.l;
    if (l.size() != traj.size() || l.halo() > traj.halo())
        throw DimensionError("minimal_dissipation_ledger: generator series does not match the trajectory");

    Series<double> b(l.halo(), l.size(), nan);
    Series<unsigned char> ok(l.halo(), l.size(), 0);
    for (long k = l.first(); k <= l.last(); ++k) {
        // edge samples with a lower-order generator would spoil the stencil for dB/dt
        if (generator.singular[k] || !generator.full_stencil(k)) continue;
        b[k] = l[k](1, 2);
        ok[k] = std::isfinite(b[k]) ? 1 : 0;
    }
    const Series<double> b_dot = differentiate_masked(b, ok, traj.dt(), StencilOrder::Sixth);

    const std::size_t n = traj.size();
    EnergyLedger out;
    out.framework = Framework::D;
    out.t.resize(n);
    out.u.assign(n, nan);
    out.w_flux.assign(n, nan);
    out.q_flux.assign(n, nan);
    out.valid.assign(n, 0);
    out.det_f.resize(n);
    out.singular.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        const StateSample& s = traj[k];
        out.t[i] = s.t;
        out.det_f[i] = generator.det_f[k];
        out.singular[i] = generator.singular[k];
        if (!ok[k] || !std::isfinite(b_dot[k])) continue;
        const MinimalDissipation md = minimal_dissipation_split(l[k]);
        const double p_e = s.rho_s(0, 0).real();
        const std::vector<LindbladChannel> channels(md.channels.begin(), md.channels.end());
        out.u[i] = -md.rates.b * p_e;
        out.w_flux[i] = -b_dot[k] * p_e;
        out.q_flux[i] = trace_product(md.h_d, apply_dissipator(channels, s.rho_s)).real();
        out.valid[i] = 1;
    }
    integrate_ledger(out, traj.dt(), options.rule);
    if (!generator.windows.empty()) {
        std::ostringstream os;
        os << generator.windows.size() << " singular window(s) of the dynamical map; cumulative D values after t = "
           << generator.windows.front().t_begin << " are unreliable";
        out.warnings.push_back(os.str());
    }
    return out;
}

} // namespace qtl

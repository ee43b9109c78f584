// qtl_acceptance - one PASS/FAIL line per acceptance criterion
//
// Reference parameters throughout: omega_E = 0.9, k_B T = 1, g = 0.1, p_e = 0.25,
// p_eg = 0.1i, t in [0, 100], dt = 0.005 * 2 pi (units of omega_S).
// Tolerances are pinned below; the detail after each line reports the
// measured value next to its bound.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qtl/frameworks.hpp"
#include "qtl/observables.hpp"

using namespace qtl;

namespace {

// Conservation
constexpr double kEnergyTol = 1e-9;
constexpr double kTraceTol = 1e-11;
// First law
constexpr double kFirstLawTol = 1e-6;
// Non-local sum rules
constexpr double kWorkSumTol = 1e-8;
constexpr double kHeatSumTol = 1e-7;
// Gauge independence
constexpr double kGaugeTol = 1e-10;
// Resonance
constexpr double kResonanceTol = 1e-7;
// Zero-flux theorems
constexpr double kZeroLedgerTol = 1e-10;  // dispersive A and B
constexpr double kZeroHeatDTol = 1e-10;   // dispersive D heat
constexpr double kZeroCFluxTol = 1e-8;    // dispersive C, |Q' + W'|
constexpr double kDisplacedZeroTol = 1e-9; // displaced A heat, D work and heat, C delta U
// Null work for a diagonal initial state
constexpr double kNullWorkTol = 1e-9;
// Analytic vs numeric generator
constexpr double kRateRelTol = 1e-3;
constexpr double kRateFloor = 1e-6;
constexpr double kConvergenceLow = 3.5;
constexpr double kConvergenceHigh = 4.5;
constexpr double kConvergenceNoise = 1e-10; // entries whose error stays below this are identically zero
// Singularity phenomenology
constexpr double kSingularDet = 1e-6;
constexpr double kAdjacentDet = 1e-4;
constexpr std::size_t kPeaksChecked = 5;
// Entropy suite
constexpr double kEntropyConstTol = 1e-9;
constexpr double kMutualInfoFloor = -1e-10;
constexpr double kNullEntropyTol = 1e-9;
// sigma_z null heat
constexpr double kNullHeatTol = 1e-15;
constexpr int kRandomStates = 1000;
// Framework-C reconstruction
constexpr double kReconstructionTol = 1e-7;

int failures = 0;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  (" << detail << ")" << std::endl;
    if (!pass) ++failures;
}

ModelConfig reference(CouplingKind kind) {
    ModelConfig cfg;
    cfg.coupling = kind;
    return cfg;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        if (std::isfinite(x)) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_sum(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>* c = nullptr) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] + b[i] + (c ? (*c)[i] : 0.0)));
    return m;
}

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double spread(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
}

double flux_and_cum(const EnergyLedger& l, bool work) {
    return work ? std::max(max_abs(l.w_flux), max_abs(l.w_cum)) : std::max(max_abs(l.q_flux), max_abs(l.q_cum));
}

Trajectory run(const ModelConfig& cfg, bool entropy = true) {
    EvolveOptions options;
    options.total_entropy = entropy;
    return evolve(cfg, options);
}

// Interior samples k with a strict local extremum of x.
std::vector<long> extrema(const std::vector<double>& x, double min_step) {
    std::vector<long> out;
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        const double left = x[k] - x[k - 1];
        const double right = x[k + 1] - x[k];
        if (left * right < 0 && std::max(std::abs(left), std::abs(right)) > min_step) out.push_back(static_cast<long>(k));
    }
    return out;
}

// Every entry of `a` has a partner in `b` at most `reach` samples away.
bool matched(const std::vector<long>& a, const std::vector<long>& b, long reach) {
    for (long k : a) {
        const bool found = std::any_of(b.begin(), b.end(), [&](long j) { return std::abs(j - k) <= reach; });
        if (!found) return false;
    }
    return true;
}

struct RateErrors {
    std::array<double, 4> rel{};
    std::array<double, 4> abs{};
};

// Compares analytic rates with generator_from_map at the samples t = k * stride * dt.
RateErrors compare_rates(const Trajectory& traj, StencilOrder order, long stride) {
    const GeneratorSeries gen = generator_from_map(traj.map_series(), traj.dt(), {order, kSingularDet});
    const ModelConfig& cfg = traj.config();
    const ComplexMatrix field = thermal_state(cfg.omega_e, cfg.beta, traj.hamiltonians().dim_e);
    RateErrors e;
    for (long k = 0; k < static_cast<long>(traj.size()); k += stride) {
        if (gen.singular[k]) continue;
        const GeneratorRates n = rates_from_generator(gen.l[k]);
        const GeneratorRates a = analytic_rates(cfg, field, traj[k].t);
        const std::array<double, 4> av{a.a, a.b, a.x, a.y}, nv{n.a, n.b, n.x, n.y};
        for (std::size_t i = 0; i < 4; ++i) {
            if (!std::isfinite(av[i])) continue;
            const double d = std::abs(av[i] - nv[i]);
            e.abs[i] = std::max(e.abs[i], d);
            e.rel[i] = std::max(e.rel[i], d / std::max(std::abs(av[i]), kRateFloor));
        }
    }
    return e;
}

std::string rates_detail(const std::array<double, 4>& v) {
    return "A " + fmt(v[0]) + ", B " + fmt(v[1]) + ", X " + fmt(v[2]) + ", Y " + fmt(v[3]);
}

} // namespace

int main() {
    const char* names[] = {"jc", "displaced", "dispersive"};
    const CouplingKind kinds[] = {CouplingKind::JaynesCummings, CouplingKind::Displaced, CouplingKind::Dispersive};
    std::map<CouplingKind, Trajectory> base;
    for (CouplingKind kind : kinds) base.emplace(kind, run(reference(kind)));
    const Trajectory& jc = base.at(CouplingKind::JaynesCummings);
    const Trajectory& displaced = base.at(CouplingKind::Displaced);
    const Trajectory& dispersive = base.at(CouplingKind::Dispersive);

    // Conservation
    {
        bool pass = true;
        std::string detail;
        for (std::size_t c = 0; c < 3; ++c) {
            const Trajectory& t = base.at(kinds[c]);
            double de = 0.0, dtr = 0.0;
            for (long k = 0; k < static_cast<long>(t.size()); ++k) {
                de = std::max(de, std::abs(t[k].energy - t[0].energy));
                dtr = std::max(dtr, std::abs(t[k].trace - 1.0));
            }
            pass = pass && de < kEnergyTol && dtr < kTraceTol;
            detail += std::string(c ? "; " : "") + names[c] + ": dE " + fmt(de) + ", dTr " + fmt(dtr);
        }
        report("conservation of energy and trace", pass, detail + "; bounds " + fmt(kEnergyTol) + ", " + fmt(kTraceTol));
    }

    // First law on the JC reference config
    const EnergyLedger a_jc = lembas_ledger(jc);
    const NonlocalLedgers b_jc = nonlocal_ledgers(jc, 0.0);
    const DecompositionAnalysis c_jc = decomposition_analysis(jc);
    const EnergyLedger d_jc = minimal_dissipation_ledger(jc);
    {
        bool pass = true;
        std::string detail;
        const EnergyLedger* ls[] = {&a_jc, &b_jc.system, &c_jc.ledger, &d_jc};
        for (const EnergyLedger* l : ls) {
            double worst = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < l->size(); ++i) {
                const double r = l->u[i] - l->u[0] - l->w_cum[i] - l->q_cum[i];
                if (!std::isfinite(r)) finite = false;
                else worst = std::max(worst, std::abs(r));
            }
            pass = pass && finite && worst < kFirstLawTol;
            detail += std::string(1, framework_letter(l->framework)) + " " + fmt(worst) + (finite ? "" : " (gaps)") + "; ";
        }
        report("first law per framework, JC", pass, detail + "bound " + fmt(kFirstLawTol));
    }

    // Non-local sum rules
    {
        const double w = max_abs_sum(b_jc.system.w_flux, b_jc.environment.w_flux);
        const double q = max_abs_sum(b_jc.system.q_flux, b_jc.environment.q_flux, &b_jc.u_chi_dot);
        report("non-local sum rules", w < kWorkSumTol && q < kHeatSumTol,
               "work " + fmt(w) + " < " + fmt(kWorkSumTol) + ", heat + dU_chi " + fmt(q) + " < " + fmt(kHeatSumTol));
    }

    // Gauge independence of framework-B heat
    {
        double worst = 0.0;
        for (double alpha : {0.5, 1.0})
            worst = std::max(worst, max_deviation(nonlocal_ledger(jc, alpha).q_cum, b_jc.system.q_cum));
        report("framework-B heat independent of alpha_S", worst <= kGaugeTol,
               "max |dQ_cum| " + fmt(worst) + " <= " + fmt(kGaugeTol));
    }

    // JC on resonance
    {
        ModelConfig cfg = reference(CouplingKind::JaynesCummings);
        cfg.omega_e = cfg.omega_s;
        const PairedLedgers l = lembas_ledgers(run(cfg, false));
        const double w = max_abs_sum(l.system.w_flux, l.environment.w_flux);
        const double q = max_abs_sum(l.system.q_flux, l.environment.q_flux);
        report("LEMBAS fluxes balance on JC resonance", w < kResonanceTol && q < kResonanceTol,
               "work " + fmt(w) + ", heat " + fmt(q) + " < " + fmt(kResonanceTol));
    }

    // Zero-flux theorems
    {
        const EnergyLedger a = lembas_ledger(dispersive);
        const EnergyLedger b = nonlocal_ledger(dispersive, 0.0);
        const EnergyLedger c = decomposition_ledger(dispersive);
        const EnergyLedger d = minimal_dissipation_ledger(dispersive);
        const double ab = std::max({flux_and_cum(a, true), flux_and_cum(a, false), flux_and_cum(b, true),
                                    flux_and_cum(b, false)});
        const double dq = flux_and_cum(d, false);
        const double cqw = max_abs_sum(c.q_flux, c.w_flux);
        report("zero fluxes, dispersive", ab < kZeroLedgerTol && dq < kZeroHeatDTol && cqw < kZeroCFluxTol,
               "A,B " + fmt(ab) + " < " + fmt(kZeroLedgerTol) + "; D heat " + fmt(dq) + " < " + fmt(kZeroHeatDTol) +
                   "; C |Q'+W'| " + fmt(cqw) + " < " + fmt(kZeroCFluxTol));
    }
    {
        const EnergyLedger a = lembas_ledger(displaced);
        const EnergyLedger c = decomposition_ledger(displaced);
        const EnergyLedger d = minimal_dissipation_ledger(displaced);
        const double aq = flux_and_cum(a, false);
        const double dw = flux_and_cum(d, true);
        const double dq = flux_and_cum(d, false);
        double du = 0.0;
        for (double u : c.u) du = std::max(du, std::abs(u - c.u[0]));
        report("zero fluxes, displaced", std::max({aq, dw, dq, du}) < kDisplacedZeroTol,
               "A heat " + fmt(aq) + "; D work " + fmt(dw) + ", heat " + fmt(dq) + "; C dU " + fmt(du) + "; bound " +
                   fmt(kDisplacedZeroTol));
    }

    // Null work for a diagonal initial state
    {
        ModelConfig cfg = reference(CouplingKind::JaynesCummings);
        cfg.p_eg = 0.0;
        const Trajectory t = run(cfg, false);
        const double a = flux_and_cum(lembas_ledger(t), true);
        const double b = flux_and_cum(nonlocal_ledger(t, 0.0), true);
        const double c = flux_and_cum(decomposition_ledger(t), true);
        report("no work for a diagonal initial state, JC", std::max({a, b, c}) < kNullWorkTol,
               "A " + fmt(a) + ", B " + fmt(b) + ", C " + fmt(c) + " < " + fmt(kNullWorkTol));
    }

    // Analytic vs numeric generator. The gate uses the 6th-order stencil the
    // ledgers use; convergence is measured on the 2nd-order one, whose
    // leading error term is what halving dt should divide by four.
    {
        bool gate = true, converge = true;
        std::string gate_detail, cd4_detail, cd2_detail, conv_detail;
        for (std::size_t c = 0; c < 3; ++c) {
            const Trajectory& coarse = base.at(kinds[c]);
            ModelConfig half_cfg = coarse.config();
            half_cfg.dt *= 0.5;
            const Trajectory fine = run(half_cfg, false);

            const RateErrors cd6 = compare_rates(coarse, StencilOrder::Sixth, 1);
            const RateErrors cd4 = compare_rates(coarse, StencilOrder::Fourth, 1);
            const RateErrors cd2 = compare_rates(coarse, StencilOrder::Second, 1);
            const RateErrors cd2_half = compare_rates(fine, StencilOrder::Second, 2);
            const double worst = *std::max_element(cd6.rel.begin(), cd6.rel.end());
            gate = gate && worst < kRateRelTol;
            const std::string sep = c ? "; " : "";
            gate_detail += sep + names[c] + " " + rates_detail(cd6.rel);
            cd4_detail += sep + names[c] + " " + rates_detail(cd4.rel);
            cd2_detail += sep + names[c] + " " + rates_detail(cd2.rel);
            std::array<double, 4> ratio{};
            for (std::size_t i = 0; i < 4; ++i) {
                if (cd2.abs[i] < kConvergenceNoise) continue;
                ratio[i] = cd2.abs[i] / cd2_half.abs[i];
                converge = converge && ratio[i] > kConvergenceLow && ratio[i] < kConvergenceHigh;
            }
            conv_detail += sep + names[c] + " " + rates_detail(ratio);
        }
        report("analytic generator rates match the numeric generator", gate,
               "6th-order stencil, max rel error " + gate_detail + "; bound " + fmt(kRateRelTol) + ", floor " +
                   fmt(kRateFloor));
        std::cout << "INFO  4th-order stencil: max rel error " << cd4_detail << std::endl;
        std::cout << "INFO  2nd-order stencil: max rel error " << cd2_detail << std::endl;
        report("2nd-order generator error shrinks ~4x when dt is halved", converge,
               "max abs error ratio " + conv_detail + " (0 = identically zero); band [" + fmt(kConvergenceLow) + ", " +
                   fmt(kConvergenceHigh) + "]");
    }

    // Singularity phenomenology. A peak is adjacent to a window when the
    // connected |det F| < kAdjacentDet region around it contains or borders
    // a flagged window. The gate checks the global maximum of |W'_D| at every
    // sweep point with windows; the top few local maxima are reported.
    {
        bool monotone = true, maxima_ok = true;
        std::size_t previous = 0;
        std::string detail, info;
        for (double ratio : {0.5, 0.9, 0.99}) {
            ModelConfig cfg = reference(CouplingKind::JaynesCummings);
            cfg.omega_e = ratio * cfg.omega_s;
            std::optional<Trajectory> other;
            const Trajectory& owned = ratio == 0.9 ? jc : other.emplace(run(cfg, false));
            const GeneratorSeries gen =
                generator_from_map(owned.map_series(), owned.dt(), {StencilOrder::Sixth, kSingularDet});
            const EnergyLedger d = minimal_dissipation_ledger(owned, gen);
            const std::size_t count = gen.windows.size();
            if (count < previous) monotone = false;
            previous = count;

            const std::vector<double>& w = d.w_flux;
            const long n = static_cast<long>(w.size());
            auto adjacent = [&](long k) {
                if ((k > 0 && !std::isfinite(w[k - 1])) || (k + 1 < n && !std::isfinite(w[k + 1]))) return true;
                if (std::abs(gen.det_f[k]) >= kAdjacentDet) return false;
                long lo = k, hi = k;
                while (lo > 0 && std::abs(gen.det_f[lo - 1]) < kAdjacentDet) --lo;
                while (hi + 1 < n && std::abs(gen.det_f[hi + 1]) < kAdjacentDet) ++hi;
                return std::any_of(gen.windows.begin(), gen.windows.end(),
                                   [&](const SingularWindow& sw) { return sw.last >= lo - 1 && sw.first <= hi + 1; });
            };
            std::vector<long> peaks;
            for (long k = 1; k + 1 < n; ++k) {
                if (!std::isfinite(w[k]) || !std::isfinite(w[k - 1]) || !std::isfinite(w[k + 1])) continue;
                if (std::abs(w[k]) >= std::abs(w[k - 1]) && std::abs(w[k]) >= std::abs(w[k + 1])) peaks.push_back(k);
            }
            std::sort(peaks.begin(), peaks.end(), [&](long x, long y) { return std::abs(w[x]) > std::abs(w[y]); });
            peaks.resize(std::min(peaks.size(), kPeaksChecked));
            std::size_t near = 0;
            for (long k : peaks) near += adjacent(k) ? 1 : 0;

            detail += "omega_E " + fmt(ratio) + ": " + std::to_string(count) + " windows";
            if (count > 0 && !peaks.empty()) {
                const bool ok = adjacent(peaks.front());
                maxima_ok = maxima_ok && ok;
                detail += ", max |W'_D| " + fmt(std::abs(w[peaks.front()])) + " at t = " + fmt(d.t[peaks.front()]) +
                          (ok ? " adjacent" : " not adjacent");
            }
            detail += "; ";
            info += "omega_E " + fmt(ratio) + ": " + std::to_string(near) + "/" + std::to_string(peaks.size()) + "; ";
        }
        report("singular windows grow toward resonance and host the D work maximum", monotone && maxima_ok,
               detail + "|det F| < " + fmt(kSingularDet) + ", basin < " + fmt(kAdjacentDet));
        std::cout << "INFO  largest " << kPeaksChecked << " local maxima of |W'_D| adjacent to a window: " << info
                  << std::endl;
    }

    // Entropy suite
    {
        bool pass = true;
        std::string detail;
        double s_spread = 0.0, i_min = 0.0;
        for (CouplingKind kind : kinds) {
            const EntropyRecord rec = entropy_record(base.at(kind), {}, 1.0);
            s_spread = std::max(s_spread, spread(rec.s_total));
            i_min = std::min(i_min, *std::min_element(rec.i_se.begin(), rec.i_se.end()));
        }
        pass = pass && s_spread < kEntropyConstTol && i_min >= kMutualInfoFloor;
        detail += "S_total spread " + fmt(s_spread) + ", min I_SE " + fmt(i_min);

        ModelConfig cfg = reference(CouplingKind::Displaced);
        cfg.p_eg = 0.0;
        const EntropyRecord diag = entropy_record(run(cfg, false), {}, 1.0);
        const double ds = max_abs(diag.ds_s);
        const double se = spread(entropy_record(dispersive, {}, 1.0).s_e);
        pass = pass && ds < kNullEntropyTol && se < kEntropyConstTol;
        detail += "; displaced p_eg=0 |dS_S| " + fmt(ds) + "; dispersive S_E spread " + fmt(se);

        const EnergyLedger ledger[] = {c_jc.ledger};
        const EntropyRecord rec = entropy_record(jc, ledger, 1.0);
        const auto q_ext = extrema(c_jc.ledger.q_cum, 0.0);
        const auto s_ext = extrema(rec.ds_s, 0.0);
        const bool align = !q_ext.empty() && matched(q_ext, s_ext, 1) && matched(s_ext, q_ext, 1);
        pass = pass && align;
        detail += "; C Q_cum extrema " + std::to_string(q_ext.size()) + ", dS_S extrema " +
                  std::to_string(s_ext.size()) + (align ? " aligned" : " misaligned");
        report("entropy suite", pass, detail);
    }

    // sigma_z dephasing carries no heat
    {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const ComplexMatrix sz = ops::sigma_z();
        const ComplexMatrix pe = ops::excited_projector();
        double worst = 0.0;
        for (int n = 0; n < kRandomStates; ++n) {
            std::array<double, 4> v{1.0 / std::sqrt(2.0), u(rng), u(rng), u(rng)};
            const double r = std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
            const double scale = std::abs(u(rng)) / (std::sqrt(2.0) * r);
            for (int i = 1; i < 4; ++i) v[static_cast<std::size_t>(i)] *= scale;
            const ComplexMatrix rho = state_from_coherence(v);
            worst = std::max(worst, std::abs(trace_product(pe, sz * rho * sz - rho)));
        }
        report("sigma_z dephasing heat vanishes", worst < kNullHeatTol,
               std::to_string(kRandomStates) + " random states, max " + fmt(worst) + " < " + fmt(kNullHeatTol));
    }

    // Framework-C reconstruction
    {
        double worst = 0.0;
        std::size_t used = 0;
        for (double e : c_jc.reconstruction_error) {
            if (!std::isfinite(e)) continue;
            worst = std::max(worst, e);
            ++used;
        }
        report("framework-C generator rebuilds drho_S/dt", used > 0 && worst < kReconstructionTol,
               std::to_string(used) + " non-degenerate samples, max " + fmt(worst) + " < " + fmt(kReconstructionTol));
    }

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}

// decomposition.cpp - framework C
//
// rho_S = sum_k r_k |r_k><r_k|. With the bare H_S static,
//   Q' = sum_k r_k' <r_k|H_S|r_k>
//   W' = sum_k r_k 2 Re <r_k|H_S|r_k'>.
// Derivatives of the tracked eigenpairs use fourth-order centred stencils.
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qtl/frameworks.hpp"

namespace qtl {

namespace {

Complex column_overlap(const ComplexMatrix& a, std::size_t i, const ComplexMatrix& b, std::size_t j) {
    Complex s{};
    for (std::size_t r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * b(r, j);
    return s;
}

ComplexMatrix outer(const ComplexMatrix& a, std::size_t i, const ComplexMatrix& b, std::size_t j) {
    ComplexMatrix m(a.rows(), b.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < b.rows(); ++c) m(r, c) = a(r, i) * std::conj(b(c, j));
    return m;
}

// <a_i| H |b_j>
Complex matrix_element(const ComplexMatrix& a, std::size_t i, const ComplexMatrix& h, const ComplexMatrix& b,
                       std::size_t j) {
    Complex s{};
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c) s += std::conj(a(r, i)) * h(r, c) * b(c, j);
    return s;
}

} // namespace

TrackedSpectrum spectral_track(const Series<ComplexMatrix>& states, double eps_deg) {
    TrackedSpectrum ts;
    const long first = states.first();
    ts.r = Series<std::vector<double>>(states.halo(), states.size());
    ts.vectors = Series<ComplexMatrix>(states.halo(), states.size());
    ts.degenerate = Series<unsigned char>(states.halo(), states.size());
    std::size_t degenerate_count = 0;

    for (long k = first; k <= states.last(); ++k) {
        const EigenSystem es = hermitian_eig(states[k]);
        const std::size_t d = es.values.size();
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < d; ++j) gap = std::min(gap, es.values[j] - es.values[j - 1]);
        ts.degenerate[k] = gap < eps_deg ? 1 : 0;
        if (ts.degenerate[k] && k >= 0 && k < static_cast<long>(states.size())) ++degenerate_count;

        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        if (k > first) {
            // Assignment maximising total overlap with the previous sample.
            const ComplexMatrix& prev = ts.vectors[k - 1];
            std::vector<std::size_t> trial = perm;
            double best = -1.0;
            do {
                double score = 0.0;
                for (std::size_t i = 0; i < d; ++i) score += std::norm(column_overlap(prev, i, es.vectors, trial[i]));
                if (score > best) {
                    best = score;
                    perm = trial;
                }
            } while (std::next_permutation(trial.begin(), trial.end()));
        }
        std::vector<double> r(d);
        ComplexMatrix v(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            r[i] = es.values[perm[i]];
            Complex phase = 1.0;
            if (k > first) {
                const Complex ov = column_overlap(ts.vectors[k - 1], i, es.vectors, perm[i]);
                if (std::abs(ov) > 0.0) phase = std::conj(ov) / std::abs(ov);
            }
            for (std::size_t row = 0; row < d; ++row) v(row, i) = es.vectors(row, perm[i]) * phase;
        }
        ts.r[k] = std::move(r);
        ts.vectors[k] = std::move(v);
    }
    if (degenerate_count > 0) {
        std::ostringstream os;
        os << degenerate_count << " samples with an eigenvalue gap of rho_S below " << eps_deg
           << "; fluxes there use Q' = Tr(H_S d rho_S/dt) and W' = 0";
        ts.warnings.push_back(os.str());
    }
    return ts;
}

DecompositionGenerator decomposition_generator(const std::vector<double>& r, const ComplexMatrix& vectors,
                                               const std::vector<double>& r_dot, const ComplexMatrix& vectors_dot,
                                               double r_guard) {
    const std::size_t d = r.size();
    DecompositionGenerator gen;
    gen.k_s = ComplexMatrix(d, d);
    const Complex i_unit(0, 1);
    for (std::size_t k = 0; k < d; ++k) {
        gen.k_s += outer(vectors_dot, k, vectors, k);
        gen.k_s -= column_overlap(vectors, k, vectors_dot, k) * outer(vectors, k, vectors, k);
    }
    gen.k_s *= i_unit;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j) {
            if (!(std::abs(r[j]) > r_guard)) continue;
            gen.channels.push_back({outer(vectors, k, vectors, j), r_dot[k] / (static_cast<double>(d) * r[j])});
        }
    return gen;
}

ComplexMatrix apply_dissipator(const std::vector<LindbladChannel>& channels, const ComplexMatrix& rho) {
    ComplexMatrix out(rho.rows(), rho.cols());
    for (const auto& ch : channels) {
        if (ch.rate == 0.0) continue;
        const ComplexMatrix ldl = ch.op.adjoint() * ch.op;
        ComplexMatrix term = multiply_adjoint(ch.op * rho, ch.op) - 0.5 * anticommutator(ldl, rho);
        out += ch.rate * term;
    }
    return out;
}

ComplexMatrix apply_generator(const ComplexMatrix& h, const std::vector<LindbladChannel>& channels,
                              const ComplexMatrix& rho) {
    return Complex(0, -1) * commutator(h, rho) + apply_dissipator(channels, rho);
}

DecompositionAnalysis decomposition_analysis(const Trajectory& traj, const LedgerOptions& options) {
    DecompositionAnalysis out;
    out.spectrum = spectral_track(traj.rho_s_series());
    const TrackedSpectrum& ts = out.spectrum;
    const double dt = traj.dt();
    const ComplexMatrix& hs = traj.hamiltonians().h_s_local;
    const std::size_t d = traj.hamiltonians().dim_s;
    const std::size_t n = traj.size();

    std::vector<Series<double>> r_series(d, Series<double>(ts.r.halo(), ts.r.size()));
    for (long k = ts.r.first(); k <= ts.r.last(); ++k)
        for (std::size_t j = 0; j < d; ++j) r_series[j][k] = ts.r[k][j];
    std::vector<Series<double>> r_dot;
    for (const auto& s : r_series) r_dot.push_back(differentiate(s, dt, StencilOrder::Fourth));
    const Series<ComplexMatrix> v_dot = differentiate(ts.vectors, dt, StencilOrder::Fourth);

    EnergyLedger& l = out.ledger;
    l.framework = Framework::C;
    l.t.resize(n);
    l.u.resize(n);
    l.w_flux.resize(n);
    l.q_flux.resize(n);
    out.reconstruction_error.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.heat_mismatch.assign(n, std::numeric_limits<double>::quiet_NaN());

    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        const StateSample& s = traj[k];
        l.t[i] = s.t;
        l.u[i] = trace_product(hs, s.rho_s).real();
        bool near_degenerate = false;
        for (long m = k - 2; m <= k + 2; ++m)
            if (ts.degenerate.contains(m) && ts.degenerate[m]) near_degenerate = true;
        if (near_degenerate) {
            l.q_flux[i] = trace_product(hs, traj.drho_s(k)).real();
            l.w_flux[i] = 0.0;
            continue;
        }
        const std::vector<double>& r = ts.r[k];
        const ComplexMatrix& v = ts.vectors[k];
        std::vector<double> rd(d);
        for (std::size_t j = 0; j < d; ++j) rd[j] = r_dot[j][k];
        double q = 0.0, w = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            q += rd[j] * matrix_element(v, j, hs, v, j).real();
            w += 2.0 * r[j] * matrix_element(v, j, hs, v_dot[k], j).real();
        }
        l.q_flux[i] = q;
        l.w_flux[i] = w;

        const DecompositionGenerator gen = decomposition_generator(r, v, rd, v_dot[k]);
        const ComplexMatrix dissipated = apply_dissipator(gen.channels, s.rho_s);
        const ComplexMatrix rebuilt = Complex(0, -1) * commutator(gen.k_s, s.rho_s) + dissipated;
        out.reconstruction_error[i] = (rebuilt - traj.drho_s(k)).max_abs();
        out.heat_mismatch[i] = std::abs(trace_product(hs, dissipated).real() - q);
    }
    integrate_ledger(l, dt, options.rule);
    l.warnings = ts.warnings;
    return out;
}

EnergyLedger decomposition_ledger(const Trajectory& traj, const LedgerOptions& options) {
    return decomposition_analysis(traj, options).ledger;
}

} // namespace qtl

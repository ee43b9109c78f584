// propagation.cpp - exact unitary evolution and the Pauli-basis map
#include "qtl/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace qtl {

// --- Matrix4 -----------------------------------------------------------------

Matrix4 Matrix4::identity() {
    Matrix4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

Matrix4& Matrix4::operator+=(const Matrix4& o) noexcept {
    for (std::size_t i = 0; i < 16; ++i) a[i] += o.a[i];
    return *this;
}

Matrix4& Matrix4::operator-=(const Matrix4& o) noexcept {
    for (std::size_t i = 0; i < 16; ++i) a[i] -= o.a[i];
    return *this;
}

Matrix4& Matrix4::operator*=(double s) noexcept {
    for (auto& v : a) v *= s;
    return *this;
}

double Matrix4::max_abs() const noexcept {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Matrix4 operator+(Matrix4 a, const Matrix4& b) noexcept { return a += b; }
Matrix4 operator-(Matrix4 a, const Matrix4& b) noexcept { return a -= b; }
Matrix4 operator*(double s, Matrix4 a) noexcept { return a *= s; }
Matrix4 operator*(Matrix4 a, double s) noexcept { return a *= s; }

Matrix4 operator*(const Matrix4& a, const Matrix4& b) noexcept {
    Matrix4 c;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

std::array<double, 4> operator*(const Matrix4& m, const std::array<double, 4>& v) noexcept {
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(i)] += m(i, j) * v[static_cast<std::size_t>(j)];
    return out;
}

double determinant(const Matrix4& m) {
    Matrix4 a = m;
    double det = 1.0;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        if (a(p, c) == 0.0) return 0.0;
        if (p != c) {
            for (int j = 0; j < 4; ++j) std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int r = c + 1; r < 4; ++r) {
            const double f = a(r, c) / a(c, c);
            for (int j = c; j < 4; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

Matrix4 inverse(const Matrix4& m) {
    Matrix4 a = m;
    Matrix4 inv = Matrix4::identity();
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        if (a(p, c) == 0.0) throw NumericalError("inverse: matrix is singular");
        if (p != c)
            for (int j = 0; j < 4; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        const double d = 1.0 / a(c, c);
        for (int j = 0; j < 4; ++j) {
            a(c, j) *= d;
            inv(c, j) *= d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = a(r, c);
            if (f == 0.0) continue;
            for (int j = 0; j < 4; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

// --- Pauli basis ---------------------------------------------------------------

const std::array<ComplexMatrix, 4>& pauli_basis() {
    static const std::array<ComplexMatrix, 4> basis = [] {
        const double s = 1.0 / std::sqrt(2.0);
        return std::array<ComplexMatrix, 4>{s * ComplexMatrix::identity(2), s * ops::sigma_x(), s * ops::sigma_y(),
                                            s * ops::sigma_z()};
    }();
    return basis;
}

std::array<double, 4> coherence_vector(const ComplexMatrix& rho_s) {
    std::array<double, 4> v{};
    const auto& x = pauli_basis();
    for (std::size_t k = 0; k < 4; ++k) v[k] = trace_product(x[k], rho_s).real();
    return v;
}

ComplexMatrix state_from_coherence(const std::array<double, 4>& v) {
    ComplexMatrix rho(2, 2);
    const auto& x = pauli_basis();
    for (std::size_t k = 0; k < 4; ++k) rho += v[k] * x[k];
    return rho;
}

// --- evolution ---------------------------------------------------------------

namespace {

ComplexMatrix column_block(const ComplexMatrix& m, std::size_t first, std::size_t count) {
    ComplexMatrix out(m.rows(), count);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, first + j);
    return out;
}

ComplexMatrix propagator(const EigenSystem& es, double t) {
    return spectral_apply(es, [t](double e) { return std::polar(1.0, -e * t); });
}

// Everything that stays fixed along a trajectory.
struct Propagator {
    const Hamiltonians& h;
    const EigenSystem& es;
    ComplexMatrix rho_s0;
    ComplexMatrix rho_e0;
    SparseMatrix h_sparse;
    SparseMatrix h_se_sparse;
    SparseMatrix power_sparse; // [H_SE, H]

    Propagator(const Hamiltonians& hams, const EigenSystem& spectrum, ComplexMatrix rs, ComplexMatrix re)
        : h(hams), es(spectrum), rho_s0(std::move(rs)), rho_e0(std::move(re)),
          h_sparse(SparseMatrix::from_dense(hams.h)), h_se_sparse(SparseMatrix::from_dense(hams.h_se)),
          power_sparse(SparseMatrix::from_dense(commutator(hams.h_se, hams.h), 1e-300)) {}

    // Images of |i><j| (x) rho_E(0) under the unitary, i, j in {e, g}.
    std::array<ComplexMatrix, 4> basis_images(double t) const {
        const std::size_t n = h.dim_e;
        const ComplexMatrix u = t == 0.0 ? ComplexMatrix::identity(2 * n) : propagator(es, t);
        const ComplexMatrix u0 = column_block(u, 0, n);
        const ComplexMatrix u1 = column_block(u, n, n);
        const ComplexMatrix y0 = u0 * rho_e0;
        const ComplexMatrix y1 = u1 * rho_e0;
        ComplexMatrix m00 = multiply_adjoint(y0, u0);
        ComplexMatrix m01 = multiply_adjoint(y0, u1);
        ComplexMatrix m10 = m01.adjoint();
        ComplexMatrix m11 = multiply_adjoint(y1, u1);
        return {std::move(m00), std::move(m01), std::move(m10), std::move(m11)};
    }

    static Matrix4 map_matrix(const std::array<ComplexMatrix, 4>& images, std::size_t n) {
        std::array<ComplexMatrix, 4> phi;
        for (std::size_t q = 0; q < 4; ++q) phi[q] = partial_trace(images[q], 2, n, Subsystem::System);
        const auto& x = pauli_basis();
        Matrix4 f;
        for (int l = 0; l < 4; ++l) {
            const ComplexMatrix& xl = x[static_cast<std::size_t>(l)];
            ComplexMatrix img(2, 2);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    if (xl(i, j) != Complex{}) img += xl(i, j) * phi[2 * i + j];
            for (int k = 0; k < 4; ++k) f(k, l) = trace_product(x[static_cast<std::size_t>(k)], img).real();
        }
        return f;
    }

    StateSample sample(double t, bool total_entropy) const {
        const std::size_t n = h.dim_e;
        const auto images = basis_images(t);
        ComplexMatrix rho(2 * n, 2 * n);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                if (rho_s0(i, j) != Complex{}) rho += rho_s0(i, j) * images[2 * i + j];

        StateSample s;
        s.t = t;
        s.f = t == 0.0 ? Matrix4::identity() : map_matrix(images, n);
        s.rho_s = partial_trace(rho, 2, n, Subsystem::System);
        s.rho_e = partial_trace(rho, 2, n, Subsystem::Environment);
        const ComplexMatrix comm = commutator(h_se_sparse, rho);
        s.comm_s = partial_trace(comm, 2, n, Subsystem::System);
        s.comm_e = partial_trace(comm, 2, n, Subsystem::Environment);
        s.energy = h_sparse.trace_product(rho).real();
        s.trace = rho.trace().real();
        s.se_energy = h_se_sparse.trace_product(rho).real();
        s.se_power = (Complex(0, -1) * power_sparse.trace_product(rho)).real();
        s.s_total = total_entropy ? von_neumann_entropy(rho) : std::numeric_limits<double>::quiet_NaN();
        s.leak = s.rho_e(n - 1, n - 1).real() + s.rho_e(n - 2, n - 2).real();
        return s;
    }
};

} // namespace

Trajectory::Trajectory(ModelConfig cfg, Hamiltonians h, EigenSystem spectrum, ComplexMatrix rho0,
                       Series<StateSample> samples, std::vector<std::string> warnings)
    : cfg_(std::move(cfg)), h_(std::move(h)), spectrum_(std::move(spectrum)), rho0_(std::move(rho0)),
      samples_(std::move(samples)), warnings_(std::move(warnings)) {}

ComplexMatrix Trajectory::composite_state(long k) const {
    const double t = samples_[k].t;
    if (t == 0.0) return rho0_;
    const ComplexMatrix u = propagator(spectrum_, t);
    return multiply_adjoint(u * rho0_, u);
}

ComplexMatrix Trajectory::correlation(long k) const {
    const auto& s = samples_[k];
    return composite_state(k) - kron(s.rho_s, s.rho_e);
}

ComplexMatrix Trajectory::drho_s(long k) const {
    const auto& s = samples_[k];
    return Complex(0, -1) * (commutator(h_.h_s_local, s.rho_s) + s.comm_s);
}

ComplexMatrix Trajectory::drho_e(long k) const {
    const auto& s = samples_[k];
    return Complex(0, -1) * (commutator(h_.h_e_local, s.rho_e) + s.comm_e);
}

Series<Matrix4> Trajectory::map_series() const {
    std::vector<Matrix4> out;
    out.reserve(samples_.raw().size());
    for (const auto& s : samples_.raw()) out.push_back(s.f);
    return Series<Matrix4>(samples_.halo(), std::move(out));
}

Series<ComplexMatrix> Trajectory::rho_s_series() const {
    std::vector<ComplexMatrix> out;
    out.reserve(samples_.raw().size());
    for (const auto& s : samples_.raw()) out.push_back(s.rho_s);
    return Series<ComplexMatrix>(samples_.halo(), std::move(out));
}

std::size_t sample_count(const ModelConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt)) + 1;
}

Trajectory evolve(const ModelConfig& cfg, const EvolveOptions& options) {
    validate(cfg);
    if (options.halo < 0) throw ConfigError("evolve: halo must be >= 0");
    Hamiltonians h = build_hamiltonians(cfg);
    EigenSystem es = hermitian_eig(h.h);
    const std::size_t n = h.dim_e;
    ComplexMatrix rho_s0 = qubit_state(cfg.p_e, cfg.p_eg);
    ComplexMatrix rho_e0 = thermal_state(cfg.omega_e, cfg.beta, n);
    ComplexMatrix rho0 = kron(rho_s0, rho_e0);

    const Propagator prop(h, es, rho_s0, rho_e0);
    Series<StateSample> samples(options.halo, sample_count(cfg));
    const long first = samples.first();
    const long last = samples.last();
    std::exception_ptr failure;

    auto compute = [&](long k) { samples[k] = prop.sample(static_cast<double>(k) * cfg.dt, options.total_entropy); };
    if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long k = first; k <= last; ++k) {
            try {
                compute(k);
            } catch (...) {
#pragma omp critical(qtl_evolve_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    } else {
        for (long k = first; k <= last; ++k) compute(k);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::string> warnings;
    double worst = 0.0, worst_t = 0.0;
    for (long k = 0; k < static_cast<long>(samples.size()); ++k)
        if (samples[k].leak > worst) {
            worst = samples[k].leak;
            worst_t = samples[k].t;
        }
    if (worst > options.leak_threshold) {
        std::ostringstream os;
        os << "truncation leak: population " << worst << " in the top two oscillator levels at t = " << worst_t
           << " exceeds " << options.leak_threshold << "; increase n_levels";
        warnings.push_back(os.str());
    }
    return Trajectory(cfg, std::move(h), std::move(es), std::move(rho0), std::move(samples), std::move(warnings));
}

Matrix4 dynamical_map_matrix(const ModelConfig& cfg, double t) {
    validate(cfg);
    const Hamiltonians h = build_hamiltonians(cfg);
    const EigenSystem es = hermitian_eig(h.h);
    const Propagator prop(h, es, qubit_state(cfg.p_e, cfg.p_eg), thermal_state(cfg.omega_e, cfg.beta, h.dim_e));
    if (t == 0.0) return Matrix4::identity();
    return Propagator::map_matrix(prop.basis_images(t), h.dim_e);
}

// --- generator -----------------------------------------------------------------

std::vector<SingularWindow> flagged_windows(const Series<unsigned char>& flags, double dt) {
    std::vector<SingularWindow> out;
    const long n = static_cast<long>(flags.size());
    for (long k = 0; k < n; ++k) {
        if (!flags[k]) continue;
        long e = k;
        while (e + 1 < n && flags[e + 1]) ++e;
        out.push_back({k, e, static_cast<double>(k) * dt, static_cast<double>(e) * dt});
        k = e;
    }
    return out;
}

GeneratorSeries generator_from_map(const Series<Matrix4>& f, double dt, const GeneratorOptions& options) {
    const Series<Matrix4> df = differentiate(f, dt, options.order);
    GeneratorSeries g;
    g.order = options.order;
    g.l = Series<Matrix4>(f.halo(), f.size());
    g.det_f = Series<double>(f.halo(), f.size());
    g.singular = Series<unsigned char>(f.halo(), f.size());
    Matrix4 nan_matrix;
    nan_matrix.a.fill(std::numeric_limits<double>::quiet_NaN());
    for (long k = f.first(); k <= f.last(); ++k) {
        const double det = determinant(f[k]);
        g.det_f[k] = det;
        if (!(std::abs(det) >= options.delta_sing)) {
            g.singular[k] = 1;
            g.l[k] = nan_matrix;
            continue;
        }
        g.l[k] = df[k] * inverse(f[k]);
    }
    g.windows = flagged_windows(g.singular, dt);
    return g;
}

} // namespace qtl

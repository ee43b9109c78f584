// eigen.cpp - Hermitian eigensolvers
//
// hermitian_eig reduces to real tridiagonal form with complex Householder
// reflectors (the final 1x1 reflector is kept so the off-diagonal comes out
// real), then diagonalises with implicit-shift QL. jacobi_eig is a slow,
// independent cross-check.
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qtl/linalg.hpp"

namespace qtl {

namespace {

constexpr int kMaxQlIterations = 60;
constexpr int kMaxJacobiSweeps = 100;

ComplexMatrix checked_hermitian_part(const ComplexMatrix& m, double tol, const char* who) {
    if (!m.is_square()) throw DimensionError(std::string(who) + ": matrix is not square");
    const double defect = hermiticity_defect(m);
    if (!(defect < tol * std::max(1.0, m.max_abs())))
        throw NumericalError(std::string(who) + ": matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    ComplexMatrix h = m;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        h(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < h.cols(); ++j) {
            const Complex avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
            h(i, j) = avg;
            h(j, i) = std::conj(avg);
        }
    }
    return h;
}

struct Tridiagonal {
    std::vector<double> d;
    std::vector<double> e; // e[k] couples k and k+1; e[n-1] = 0
    ComplexMatrix q;       // A = Q T Q^dagger when accumulated
};

// Reduces the Hermitian matrix a (modified in place) to real tridiagonal form.
Tridiagonal tridiagonalise(ComplexMatrix a, bool want_q) {
    const std::size_t n = a.rows();
    Tridiagonal t;
    t.d.assign(n, 0.0);
    t.e.assign(n, 0.0);
    std::vector<Complex> taus(n, Complex{});
    std::vector<std::vector<Complex>> reflectors(n);
    std::vector<Complex> x(n), w(n);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t m = n - k - 1;
        const Complex alpha = a(k + 1, k);
        double xnorm = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) xnorm = std::hypot(xnorm, std::abs(a(i, k)));

        std::vector<Complex> v(m, Complex{});
        v[0] = 1.0;
        Complex tau{};
        double beta = alpha.real();
        if (xnorm != 0.0 || alpha.imag() != 0.0) {
            beta = -std::copysign(std::hypot(std::abs(alpha), xnorm), alpha.real());
            tau = (beta - alpha) / beta;
            const Complex scale = 1.0 / (alpha - beta);
            for (std::size_t i = 1; i < m; ++i) v[i] = a(k + 1 + i, k) * scale;

            // x = tau * A22 * v
            for (std::size_t i = 0; i < m; ++i) {
                Complex s{};
                for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
                x[i] = tau * s;
            }
            Complex xv{};
            for (std::size_t i = 0; i < m; ++i) xv += std::conj(x[i]) * v[i];
            const Complex alpha2 = -0.5 * tau * xv;
            for (std::size_t i = 0; i < m; ++i) w[i] = x[i] + alpha2 * v[i];
            // A22 -= v w^H + w v^H
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    a(k + 1 + i, k + 1 + j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
        }
        t.e[k] = beta;
        taus[k] = tau;
        if (want_q) reflectors[k] = std::move(v);
    }
    for (std::size_t i = 0; i < n; ++i) t.d[i] = a(i, i).real();

    if (want_q) {
        t.q = ComplexMatrix::identity(n);
        std::vector<Complex> vq(n);
        for (std::size_t kk = n - 1; kk-- > 0;) {
            const Complex tau = taus[kk];
            if (tau == Complex{}) continue;
            const auto& v = reflectors[kk];
            const std::size_t off = kk + 1;
            const std::size_t m = n - off;
            // Q22 = (I - tau v v^H) Q22
            for (std::size_t j = off; j < n; ++j) {
                Complex s{};
                for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * t.q(off + i, j);
                vq[j] = tau * s;
            }
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = off; j < n; ++j) t.q(off + i, j) -= v[i] * vq[j];
        }
    }
    return t;
}

// Implicit-shift QL on a real symmetric tridiagonal matrix. Rotations are
// applied to the columns of z when z is non-null.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == kMaxQlIterations) throw NumericalError("hermitian_eig: QL iteration did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z) {
                    for (std::size_t k = 0; k < z->rows(); ++k) {
                        const Complex zf = (*z)(k, i + 1);
                        (*z)(k, i + 1) = s * (*z)(k, i) + c * zf;
                        (*z)(k, i) = c * (*z)(k, i) - s * zf;
                    }
                }
            }
            if (r == 0.0 && i >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

EigenSystem sorted(std::vector<double> values, const ComplexMatrix& vectors) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    EigenSystem es{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        es.values[j] = values[order[j]];
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, j) = vectors(i, order[j]);
    }
    return es;
}

} // namespace

EigenSystem hermitian_eig(const ComplexMatrix& m, double tol) {
    ComplexMatrix h = checked_hermitian_part(m, tol, "hermitian_eig");
    if (h.rows() == 0) return {};
    Tridiagonal t = tridiagonalise(std::move(h), true);
    tridiagonal_ql(t.d, t.e, &t.q);
    return sorted(std::move(t.d), t.q);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
    ComplexMatrix h = checked_hermitian_part(m, tol, "hermitian_eigenvalues");
    if (h.rows() == 0) return {};
    Tridiagonal t = tridiagonalise(std::move(h), false);
    tridiagonal_ql(t.d, t.e, nullptr);
    std::sort(t.d.begin(), t.d.end());
    return t.d;
}

EigenSystem jacobi_eig(const ComplexMatrix& m, double off_tol, double tol) {
    ComplexMatrix a = checked_hermitian_part(m, tol, "jacobi_eig");
    const std::size_t n = a.rows();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > off_tol * scale) {
        if (++sweep > kMaxJacobiSweeps) throw NumericalError("jacobi_eig: no convergence");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const Complex phase = a(p, q) / mag; // e^{i phi}
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double tt = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double s = tt * c;
                // W = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane
                const Complex wpp = c, wpq = s, wqp = -s * std::conj(phase), wqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * wpp + akq * wqp;
                    a(k, q) = akp * wpq + akq * wqq;
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * wpp + vkq * wqp;
                    v(k, q) = vkp * wpq + vkq * wqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
                    a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
    return sorted(std::move(values), v);
}

} // namespace qtl

#ifndef MZV_LINFIT_HPP
#define MZV_LINFIT_HPP

// Small dense least-squares machinery: one-sided Jacobi SVD (the systems
// here are tall and narrow), minimum-norm solves with singular-value
// truncation, and rational reconstruction of fitted coefficients.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mzv {

struct rank_deficient_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column-major m x n matrix.
struct Matrix {
    int m = 0, n = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int m_, int n_) : m(m_), n(n_), a(static_cast<size_t>(m_) * n_, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(j) * m + i]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(j) * m + i]; }
};

struct SvdResult {
    Matrix u;                    // m x n, orthonormal columns (scaled)
    Matrix v;                    // n x n
    std::vector<double> sigma;   // n singular values, unsorted
};

// One-sided Jacobi: rotate column pairs of A until all are orthogonal;
// accumulate the rotations in V. Plenty accurate for n <= ~40.
inline SvdResult jacobi_svd(Matrix A) {
    int m = A.m, n = A.n;
    Matrix V(n, n);
    for (int j = 0; j < n; ++j) V(j, j) = 1.0;
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (int i = 0; i < m; ++i) {
                    app += A(i, p) * A(i, p);
                    aqq += A(i, q) * A(i, q);
                    apq += A(i, p) * A(i, q);
                }
                if (std::fabs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (int i = 0; i < m; ++i) {
                    double x = A(i, p), y = A(i, q);
                    A(i, p) = c * x - s * y;
                    A(i, q) = s * x + c * y;
                }
                for (int i = 0; i < n; ++i) {
                    double x = V(i, p), y = V(i, q);
                    V(i, p) = c * x - s * y;
                    V(i, q) = s * x + c * y;
                }
            }
        if (!rotated) break;
    }
    SvdResult out;
    out.sigma.assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double s2 = 0;
        for (int i = 0; i < m; ++i) s2 += A(i, j) * A(i, j);
        out.sigma[static_cast<size_t>(j)] = std::sqrt(s2);
    }
    // normalize columns of A into U
    for (int j = 0; j < n; ++j) {
        double s = out.sigma[static_cast<size_t>(j)];
        if (s > 0)
            for (int i = 0; i < m; ++i) A(i, j) /= s;
    }
    out.u = std::move(A);
    out.v = std::move(V);
    return out;
}

struct LsqResult {
    std::vector<double> x;
    double residual_norm = 0.0;
    double cond = 0.0;   // sigma_max / sigma_min (inf-ish when rank deficient)
    int rank = 0;
};

// Minimum-norm least squares via Jacobi SVD with relative singular-value
// truncation.
inline LsqResult lsq_min_norm(const Matrix& A, const std::vector<double>& b,
                              double rel_threshold = 1e-11) {
    if (A.m < A.n) throw rank_deficient_error("lsq: need at least as many rows as columns");
    SvdResult svd = jacobi_svd(A);
    double smax = 0;
    for (double s : svd.sigma) smax = std::max(smax, s);
    if (smax == 0) throw rank_deficient_error("lsq: zero matrix");
    double smin_kept = smax;
    LsqResult out;
    out.x.assign(static_cast<size_t>(A.n), 0.0);
    for (int j = 0; j < A.n; ++j) {
        double s = svd.sigma[static_cast<size_t>(j)];
        if (s <= rel_threshold * smax) continue;
        ++out.rank;
        smin_kept = std::min(smin_kept, s);
        double utb = 0;
        for (int i = 0; i < A.m; ++i) utb += svd.u(i, j) * b[static_cast<size_t>(i)];
        double w = utb / s;
        for (int i = 0; i < A.n; ++i) out.x[static_cast<size_t>(i)] += svd.v(i, j) * w;
    }
    double smin_all = smax;
    for (double s : svd.sigma) smin_all = std::min(smin_all, s);
    out.cond = smin_all > 0 ? smax / smin_all : std::numeric_limits<double>::infinity();
    double r2 = 0;
    for (int i = 0; i < A.m; ++i) {
        double ri = b[static_cast<size_t>(i)];
        for (int j = 0; j < A.n; ++j) ri -= A(i, j) * out.x[static_cast<size_t>(j)];
        r2 += ri * ri;
    }
    out.residual_norm = std::sqrt(r2);
    return out;
}

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return double(num) / double(den); }
    bool operator==(const Rational&) const = default;
};

// Nearest rational with denominator <= max_den (continued-fraction
// convergents and intermediate fractions).
inline Rational snap_rational(double x, std::int64_t max_den = 64) {
    bool neg = x < 0;
    double y = std::fabs(x);
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = y;
    Rational best{static_cast<std::int64_t>(std::llround(y)), 1};
    double best_err = std::fabs(y - double(best.num));
    for (int it = 0; it < 40; ++it) {
        std::int64_t a = static_cast<std::int64_t>(std::floor(frac));
        std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) {
            // best intermediate fraction still within the bound
            if (q1 > 0) {
                std::int64_t amax = (max_den - q0) / q1;
                std::int64_t pi = amax * p1 + p0, qi = amax * q1 + q0;
                if (qi >= 1 && std::fabs(y - double(pi) / double(qi)) < best_err) {
                    best = {pi, qi};
                    best_err = std::fabs(y - best.value());
                }
            }
            break;
        }
        if (std::fabs(y - double(p2) / double(q2)) < best_err) {
            best = {p2, q2};
            best_err = std::fabs(y - best.value());
        }
        double rem = frac - double(a);
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    if (neg) best.num = -best.num;
    return best;
}

}  // namespace mzv

#endif  // MZV_LINFIT_HPP

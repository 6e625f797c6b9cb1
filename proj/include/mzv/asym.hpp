#ifndef MZV_ASYM_HPP
#define MZV_ASYM_HPP

// Asymptotic expansions in the basis (ln x)^q * x^{-p}, used to continue
// nested-sum prefix functions past the truncation point and to integrate
// their tails in closed form (Euler-Maclaurin). Coefficients may be complex
// when the chain carries a complex lambda or z.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace mzv {

namespace asym {

inline constexpr int PMAX = 26;  // powers x^{-p}, p = 0..PMAX
inline constexpr int QMAX = 12;  // log powers (ln x)^q, q = 0..QMAX

template <class S>
struct Expansion {
    // coef[p][q] multiplies (ln x)^q / x^p; coef[0][0] is the constant.
    std::array<std::array<S, QMAX + 1>, PMAX + 1> coef{};
    // Magnitude of terms dropped past PMAX/QMAX, pre-evaluated at the
    // truncation point; feeds the error estimate.
    double dropped = 0.0;

    void clear() {
        for (auto& row : coef) row.fill(S(0));
        dropped = 0.0;
    }

    void add(int p, int q, S c, double xref) {
        if (c == S(0)) return;
        if (p > PMAX || q > QMAX || p < 0 || q < 0) {
            dropped += std::abs(c) * std::pow(std::log(xref), q) * std::pow(xref, -double(p));
            return;
        }
        coef[static_cast<size_t>(p)][static_cast<size_t>(q)] += c;
    }

    S eval(double x) const {
        double L = std::log(x);
        // log powers
        std::array<double, QMAX + 1> lp;
        lp[0] = 1.0;
        for (int q = 1; q <= QMAX; ++q) lp[static_cast<size_t>(q)] = lp[static_cast<size_t>(q - 1)] * L;
        S total(0);
        double xp = 1.0;
        for (int p = 0; p <= PMAX; ++p) {
            S row(0);
            for (int q = 0; q <= QMAX; ++q) {
                S c = coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (c != S(0)) row += c * lp[static_cast<size_t>(q)];
            }
            total += row * xp;
            xp /= x;
        }
        return total;
    }

    double abs_eval(double x) const {
        double L = std::log(x), total = 0.0, xp = 1.0;
        for (int p = 0; p <= PMAX; ++p) {
            for (int q = 0; q <= QMAX; ++q) {
                S c = coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (c != S(0)) total += std::abs(c) * std::pow(L, q) * xp;
            }
            xp /= x;
        }
        return total;
    }

    // d/dx: (p,q) -> q*(p+1,q-1) - p*(p+1,q)
    Expansion derivative(double xref) const {
        Expansion out;
        out.dropped = dropped;
        for (int p = 0; p <= PMAX; ++p)
            for (int q = 0; q <= QMAX; ++q) {
                S c = coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (c == S(0)) continue;
                if (q > 0) out.add(p + 1, q - 1, c * double(q), xref);
                if (p > 0) out.add(p + 1, q, -c * double(p), xref);
            }
        return out;
    }

    // Antiderivative; requires every nonzero term to have p >= 1.
    Expansion antiderivative(double xref) const {
        Expansion out;
        out.dropped = dropped;
        for (int p = 0; p <= PMAX; ++p)
            for (int q = 0; q <= QMAX; ++q) {
                S c = coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (c == S(0)) continue;
                if (p == 0) {
                    // would grow like x; callers guarantee p >= 1
                    out.dropped += std::abs(c) * std::pow(std::log(xref), q) * xref;
                    continue;
                }
                if (p == 1) {
                    out.add(0, q + 1, c / double(q + 1), xref);
                    continue;
                }
                // int (ln x)^q x^{-p} dx = -sum_j q!/(q-j)! (ln x)^{q-j} x^{1-p}/(p-1)^{j+1}
                double fact = 1.0;
                for (int j = 0; j <= q; ++j) {
                    out.add(p - 1, q - j, -c * fact / std::pow(double(p - 1), j + 1), xref);
                    fact *= double(q - j);
                }
            }
        return out;
    }

    // sum over terms of integral_a^inf; requires p >= 2 wherever c != 0
    // (checked by caller via min_power()).
    S tail_integral(double a) const {
        double L = std::log(a);
        S total(0);
        for (int p = 2; p <= PMAX; ++p) {
            double ap = std::pow(a, -double(p - 1));
            for (int q = 0; q <= QMAX; ++q) {
                S c = coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (c == S(0)) continue;
                double fact = 1.0, acc = 0.0;
                for (int j = 0; j <= q; ++j) {
                    acc += fact * std::pow(L, q - j) / std::pow(double(p - 1), j + 1);
                    fact *= double(q - j);
                }
                total += c * acc * ap;
            }
        }
        return total;
    }

    // Smallest p with a nonzero coefficient (PMAX+1 if identically zero).
    int min_power(double tol = 0.0) const {
        for (int p = 0; p <= PMAX; ++p)
            for (int q = 0; q <= QMAX; ++q)
                if (std::abs(coef[static_cast<size_t>(p)][static_cast<size_t>(q)]) > tol) return p;
        return PMAX + 1;
    }

    Expansion& operator+=(const Expansion& o) {
        for (int p = 0; p <= PMAX; ++p)
            for (int q = 0; q <= QMAX; ++q)
                coef[static_cast<size_t>(p)][static_cast<size_t>(q)] +=
                    o.coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
        dropped += o.dropped;
        return *this;
    }

    Expansion& scale(S s) {
        for (auto& row : coef)
            for (auto& c : row) c *= s;
        dropped *= std::abs(s);
        return *this;
    }
};

// A(m-1) re-expanded at m, to second order in 1/m.
template <class S>
Expansion<S> shift_arg_minus1(const Expansion<S>& a, double xref) {
    Expansion<S> out;
    out.dropped = a.dropped;
    for (int p = 0; p <= PMAX; ++p)
        for (int q = 0; q <= QMAX; ++q) {
            S c = a.coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
            if (c == S(0)) continue;
            out.add(p, q, c, xref);
            out.add(p + 1, q, c * double(p), xref);
            if (q > 0) out.add(p + 1, q - 1, -c * double(q), xref);
            out.add(p + 2, q, c * double(p) * double(p + 1) * 0.5, xref);
            if (q > 0) out.add(p + 2, q - 1, -c * double(q) * (double(p) + 0.5), xref);
            if (q > 1) out.add(p + 2, q - 2, c * double(q) * double(q - 1) * 0.5, xref);
            // next order ~ (p+q)^3/m^3 relative; negligible at m ~ xref
            out.dropped += std::abs(c) * std::pow(double(p + q + 1), 3) / 6.0 *
                           std::pow(std::log(xref), std::max(q - 1, 0)) *
                           std::pow(xref, -double(p + 3));
        }
    return out;
}

// Multiply by m^{-w} (lc[0] + lc[1]/m + lc[2]/m^2 + ...), the Laurent model
// of a product of shifted-power factors. `next` bounds the first dropped
// Laurent coefficient and feeds the error estimate.
template <class S>
Expansion<S> mul_power_model(const Expansion<S>& a, int w, const std::vector<S>& lc, double next,
                             double xref) {
    Expansion<S> out;
    out.dropped = a.dropped * std::pow(xref, -double(w));
    int K = static_cast<int>(lc.size());
    for (int p = 0; p <= PMAX; ++p)
        for (int q = 0; q <= QMAX; ++q) {
            S c = a.coef[static_cast<size_t>(p)][static_cast<size_t>(q)];
            if (c == S(0)) continue;
            for (int k = 0; k < K; ++k) out.add(p + w + k, q, c * lc[static_cast<size_t>(k)], xref);
            out.dropped += std::abs(c) * next * std::pow(std::log(xref), q) *
                           std::pow(xref, -double(p + w + K));
        }
    return out;
}

}  // namespace asym

}  // namespace mzv

#endif  // MZV_ASYM_HPP

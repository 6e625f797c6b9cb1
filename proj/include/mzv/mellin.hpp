#ifndef MZV_MELLIN_HPP
#define MZV_MELLIN_HPP

// Mellin-transform layer. The inverse Mellin transform of a generating
// function is realized as its pole-coefficient power series
// phi(z) = sum_p c_p z^p; the forward transform M[phi](lambda) =
// int_0^1 phi(z) z^{-lambda-1} dz is adaptive quadrature with termwise
// end caps. Psi comes from the selector combination of theta-twisted
// psi streams.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mzv/genfun.hpp"
#include "mzv/indices.hpp"
#include "mzv/linfit.hpp"
#include "mzv/series_eval.hpp"

namespace mzv {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
    int node_count = 24;      // Gauss-Legendre nodes per panel
    double abs_tol = 1e-9;
    double z0_split = 1e-3;   // z -> 0 cap (power weight handled termwise)
    double z1_split = 5e-5;   // z -> 1 cap (termwise boundary cut)
    int max_depth = 32;

    void validate() const {
        if (node_count < 16) throw domain_error("QuadratureConfig: node_count must be >= 16");
        if (!(abs_tol > 0)) throw domain_error("QuadratureConfig: abs_tol must be > 0");
    }
};

namespace detail {

// 24-point Gauss-Legendre on [-1, 1]
inline const std::vector<std::pair<double, double>>& gl24() {
    static const std::vector<std::pair<double, double>> table = [] {
        // nodes/weights computed by Newton iteration on Legendre P_24
        std::vector<std::pair<double, double>> t;
        int n = 24;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            t.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        return t;
    }();
    return table;
}

template <class F>
double gl_panel(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), acc = 0.0;
    for (auto& [x, w] : gl24()) acc += w * f(mid + half * x);
    return acc * half;
}

// sum_{p > P} (ln p)^j p^{-r} e^{-sigma p} by Euler-Maclaurin with a numeric
// integral over dyadic segments.
inline double logpow_tail(int j, int r, double sigma, long P, double tol) {
    (void)tol;
    if (sigma <= 0 && r < 2)
        throw convergence_error("logpow_tail: divergent tail (r < 2, sigma = 0)");
    auto g = [&](double x) {
        return std::pow(std::log(x), j) * std::pow(x, -double(r)) * std::exp(-sigma * x);
    };
    auto gp = [&](double x) {
        double L = std::log(x);
        return std::exp(-sigma * x) * std::pow(x, -double(r) - 1.0) *
               (double(j) * std::pow(L, j - 1) - double(r) * std::pow(L, j) -
                sigma * x * std::pow(L, j));
    };
    double a = double(P + 1);
    double integral = 0.0;
    double lo = a;
    for (int seg = 0; seg < 80; ++seg) {
        double hi = lo * 2.0;
        double mid = 0.5 * (lo + hi);
        integral += gl_panel(g, lo, mid) + gl_panel(g, mid, hi);
        lo = hi;
        // remaining mass bound: geometric for sigma > 0, power-law otherwise
        double bound = sigma > 0 ? g(lo) / sigma : g(lo) * lo / std::max(1.0, double(r - 1));
        if (bound < 1e-18 * (1.0 + std::fabs(integral))) break;
    }
    return integral + 0.5 * g(a) - gp(a) / 12.0;
}

}  // namespace detail

// Power-series realization of the inverse Mellin transform of an f-type
// chain: exact pole coefficients to a cutoff plus a fitted log-power model
// of the tail, validated on held-out coefficients.
class PowerSeriesFunction {
  public:
    PowerSeriesFunction(ChainSeries chain, const EvalConfig& cfg, int cutoff = 1536)
        : chain_(std::move(chain)), cfg_(cfg), cutoff_(cutoff) {
        materialize();
    }

    int cutoff() const { return cutoff_; }
    const std::vector<double>& coefficients() const { return c_; }
    double coefficient(int p) const {
        if (p <= cutoff_) return c_[static_cast<size_t>(p - 1)];
        return model_value(p);
    }
    double model_rel_err() const { return model_rel_err_; }

    // sum_p p^m c_p z^p for 0 < z < 1 (m = -1 gives the theta-inverse
    // stream); error estimate includes the model tail uncertainty.
    Eval eval_theta(double z, int m) const {
        if (!(z > 0.0 && z < 1.0))
            throw domain_error("PowerSeriesFunction: z must lie in (0,1)");
        double sigma = -std::log(z);
        double acc = 0.0, err = 0.0, zp = 1.0;
        for (int p = 1; p <= cutoff_; ++p) {
            zp *= z;
            double pm = ipow(double(p), m);
            acc += c_[static_cast<size_t>(p - 1)] * pm * zp;
            err += cerr_[static_cast<size_t>(p - 1)] * pm * zp;
        }
        // model tail; worth computing only when z^cutoff is not negligible
        double tol = cfg_.target_abs_tol * 0.1;
        double beta_scale = 1e-300;
        for (double b : beta_) beta_scale += std::fabs(b);
        for (double b : beta2_) beta_scale += std::fabs(b);
        double crude = zp * beta_scale * std::pow(std::log(double(cutoff_)), 4) *
                       std::pow(double(cutoff_), -double(model_r_ - m)) / (1.0 - z);
        if (crude < 1e-18) return {acc, err + crude};
        double tail = 0.0, tail_abs = 0.0;
        for (size_t j = 0; j < beta_.size(); ++j) {
            double t = detail::logpow_tail(static_cast<int>(j), model_r_ - m, sigma, cutoff_, tol);
            tail += beta_[j] * t;
            tail_abs += std::fabs(beta_[j] * t);
        }
        for (size_t j = 0; j < beta2_.size(); ++j) {
            double t = detail::logpow_tail(static_cast<int>(j), model_r_ + 1 - m, sigma, cutoff_, tol);
            tail += beta2_[j] * t;
            tail_abs += std::fabs(beta2_[j] * t);
        }
        err += model_rel_err_ * tail_abs + 2.0 * tol;
        return {acc + tail, err};
    }

    Eval eval(double z) const { return eval_theta(z, 0); }

    // sum_{p > cutoff} model(p) e^{-sigma p} / (p - lambda), lambda < 1.
    Eval model_tail_over_pole(double sigma, double lambda, double tol) const {
        double acc = 0.0, abs_acc = 0.0;
        for (int t = 0; t <= 3; ++t) {
            double lt = ipow(lambda, t);
            for (size_t j = 0; j < beta_.size(); ++j) {
                double v = detail::logpow_tail(static_cast<int>(j), model_r_ + 1 + t, sigma, cutoff_, tol);
                acc += lt * beta_[j] * v;
                abs_acc += std::fabs(lt * beta_[j] * v);
            }
            for (size_t j = 0; j < beta2_.size(); ++j) {
                double v = detail::logpow_tail(static_cast<int>(j), model_r_ + 2 + t, sigma, cutoff_, tol);
                acc += lt * beta2_[j] * v;
                abs_acc += std::fabs(lt * beta2_[j] * v);
            }
        }
        // geometric remainder of the 1/(p - lambda) expansion
        double rem = std::pow(std::fabs(lambda) / double(cutoff_), 4) * abs_acc;
        return {acc, model_rel_err_ * abs_acc + rem + tol};
    }

    // exact part of sum_{p <= cutoff} c_p w_p for caller-supplied weights
    template <class W>
    Eval weighted_partial(W&& w) const {
        double acc = 0.0, err = 0.0;
        for (int p = 1; p <= cutoff_; ++p) {
            double wp = w(p);
            acc += c_[static_cast<size_t>(p - 1)] * wp;
            err += cerr_[static_cast<size_t>(p - 1)] * std::fabs(wp);
        }
        return {acc, err};
    }

  private:
    void materialize() {
        PoleCoefficients pc = pole_coefficients(chain_, cutoff_, cfg_);
        c_ = std::move(pc.c);
        cerr_ = std::move(pc.err);
        fit_model();
    }

    double model_value(int p) const {
        double L = std::log(double(p));
        double s1 = 0, s2 = 0;
        for (size_t j = 0; j < beta_.size(); ++j) s1 += beta_[j] * std::pow(L, j);
        for (size_t j = 0; j < beta2_.size(); ++j) s2 += beta2_[j] * std::pow(L, j);
        return s1 * std::pow(double(p), -double(model_r_)) +
               s2 * std::pow(double(p), -double(model_r_) - 1.0);
    }

    void fit_model() {
        // decay exponent estimate from |c_p| ratios
        std::vector<double> ratios;
        for (int p = cutoff_ / 4; p <= cutoff_ / 2; p += std::max(1, cutoff_ / 64)) {
            double a = std::fabs(c_[static_cast<size_t>(p - 1)]);
            double b = std::fabs(c_[static_cast<size_t>(2 * p - 1)]);
            if (a > 0 && b > 0) ratios.push_back(std::log2(a / b));
        }
        if (ratios.empty()) {
            model_r_ = 2;
        } else {
            std::nth_element(ratios.begin(), ratios.begin() + static_cast<long>(ratios.size() / 2),
                             ratios.end());
            model_r_ = static_cast<int>(std::lround(ratios[ratios.size() / 2]));
            model_r_ = std::max(1, std::min(model_r_, 12));
        }
        int lambda_positions = 0;
        for (const auto& f : chain_.factors) lambda_positions += f.lambda_count;
        int qmax = std::max(0, std::min(lambda_positions - 1, 4));

        auto fit_window = [&](int lo, int hi, std::vector<double>& b1, std::vector<double>& b2) {
            int rows = 0;
            for (int p = lo; p <= hi; ++p) ++rows;
            int cols = 2 * (qmax + 1);
            Matrix A(rows, cols);
            std::vector<double> rhs(static_cast<size_t>(rows));
            int i = 0;
            for (int p = lo; p <= hi; ++p, ++i) {
                double L = std::log(double(p));
                double pr = std::pow(double(p), -double(model_r_));
                for (int j = 0; j <= qmax; ++j) {
                    A(i, j) = std::pow(L, j) * pr;
                    A(i, qmax + 1 + j) = std::pow(L, j) * pr / double(p);
                }
                rhs[static_cast<size_t>(i)] = c_[static_cast<size_t>(p - 1)];
            }
            LsqResult r = lsq_min_norm(A, rhs, 1e-13);
            b1.assign(r.x.begin(), r.x.begin() + (qmax + 1));
            b2.assign(r.x.begin() + (qmax + 1), r.x.end());
        };

        // fit on the front part, hold out the far end to measure the
        // extrapolation quality, then refit on the whole window
        int lo = std::max(8, cutoff_ / 8);
        fit_window(lo, (5 * cutoff_) / 8, beta_, beta2_);
        double rel = 0.0;
        for (int p = (7 * cutoff_) / 8; p <= cutoff_; p += std::max(1, cutoff_ / 128)) {
            double want = c_[static_cast<size_t>(p - 1)];
            double got = model_value(p);
            double scale = std::fabs(want) + 1e-300;
            rel = std::max(rel, std::fabs(got - want) / scale);
        }
        model_rel_err_ = std::min(1.0, rel * 4.0 + 1e-12);
        fit_window(lo, cutoff_, beta_, beta2_);
    }

    ChainSeries chain_;
    EvalConfig cfg_;
    int cutoff_;
    std::vector<double> c_, cerr_;
    int model_r_ = 2;
    std::vector<double> beta_, beta2_;
    double model_rel_err_ = 1.0;
};

// Shared stream cache; materialization is expensive and streams are
// immutable once built.
inline std::shared_ptr<const PowerSeriesFunction> get_stream(const ChainSeries& cs,
                                                             const EvalConfig& cfg,
                                                             int cutoff = 1536) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const PowerSeriesFunction>> cache;
    std::string key;
    for (const auto& f : cs.factors) {
        key += std::to_string(f.power_exponent) + "," + std::to_string(f.shift) + "," +
               std::to_string(f.lambda_count) + ";";
        for (auto& [s, a] : f.extra_pieces) key += "+" + std::to_string(s) + "^" + std::to_string(a);
    }
    key += "|" + std::to_string(cutoff) + "|" + std::to_string(cfg.truncation_N);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto built = std::make_shared<const PowerSeriesFunction>(cs, cfg, cutoff);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, built);
    return it->second;
}

// phi(pc; z) = M~[f](z) as the pole-coefficient series.
inline Eval inverse_mellin(const ChainSeries& cs, double z, const EvalConfig& cfg) {
    if (!(z > 0.0 && z < 1.0)) throw domain_error("inverse_mellin: z must lie in (0,1)");
    Eval v = get_stream(cs, cfg)->eval(z);
    if (v.abs_err > std::max(1e3 * cfg.target_abs_tol, 1e-6))
        throw convergence_error("inverse_mellin: coefficient tail estimate exceeds tolerance");
    return v;
}

// M[phi](lambda) = int_0^1 phi(z) z^{-lambda-1} dz for a coefficient stream;
// adaptive quadrature in the interior, termwise integration over both end
// caps (power weight at 0, boundary cut at 1).
inline Eval forward_mellin(const PowerSeriesFunction& phi, double lambda,
                           const QuadratureConfig& qc) {
    qc.validate();
    if (!(lambda < 1.0)) throw domain_error("forward_mellin: lambda must be < 1");
    double eps = qc.z0_split, cut = qc.z1_split;
    double value = 0.0, err = 0.0;

    // (0, eps]: int z^{p-lambda-1} dz = eps^{p-lambda}/(p-lambda)
    {
        Eval head = phi.weighted_partial(
            [&](int p) { return std::pow(eps, double(p) - lambda) / (double(p) - lambda); });
        value += head.value;
        err += head.abs_err;
        // p > cutoff piece is utterly negligible at eps << 1
        err += std::pow(eps, double(phi.cutoff())) * 1.0;
    }
    // [1-cut, 1): int = (1 - (1-cut)^{p-lambda})/(p-lambda)
    {
        double z1 = 1.0 - cut;
        Eval head = phi.weighted_partial([&](int p) {
            return (1.0 - std::pow(z1, double(p) - lambda)) / (double(p) - lambda);
        });
        value += head.value;
        err += head.abs_err;
        Eval t0 = phi.model_tail_over_pole(0.0, lambda, qc.abs_tol * 0.05);
        Eval t1 = phi.model_tail_over_pole(-std::log(z1), lambda, qc.abs_tol * 0.05);
        value += t0.value - std::pow(z1, -lambda) * t1.value;
        err += t0.abs_err + std::pow(z1, -lambda) * t1.abs_err;
    }
    // adaptive interior
    {
        auto f = [&](double z) { return phi.eval(z).value * std::pow(z, -lambda - 1.0); };
        struct Panel {
            double a, b, whole;
            int depth;
        };
        std::vector<Panel> stack;
        double a0 = eps, b0 = 1.0 - cut;
        stack.push_back({a0, b0, detail::gl_panel(f, a0, b0), 0});
        double tol = qc.abs_tol;
        while (!stack.empty()) {
            Panel p = stack.back();
            stack.pop_back();
            double mid = 0.5 * (p.a + p.b);
            double left = detail::gl_panel(f, p.a, mid);
            double right = detail::gl_panel(f, mid, p.b);
            double diff = left + right - p.whole;
            double local_tol = tol * (p.b - p.a) / (b0 - a0);
            if (std::fabs(diff) <= std::max(local_tol, 1e-16) || p.depth >= qc.max_depth) {
                value += left + right;
                err += std::fabs(diff);
                if (p.depth >= qc.max_depth && std::fabs(diff) > local_tol)
                    throw quadrature_error("forward_mellin: adaptive refinement stalled");
                continue;
            }
            stack.push_back({p.a, mid, left, p.depth + 1});
            stack.push_back({mid, p.b, right, p.depth + 1});
        }
        // stream evaluation uncertainty, integrated against |z^{-lambda-1}|
        double stream_err = phi.eval(0.5).abs_err;
        double weight_mass =
            std::fabs(lambda) > 1e-12
                ? (std::pow(eps, -lambda) - std::pow(1.0 - cut, -lambda)) / lambda
                : std::log((1.0 - cut) / eps);
        err += stream_err * std::fabs(weight_mass);
    }
    return {value, err};
}

// Sampled-function variant: adaptive quadrature with first-order endpoint
// models (phi ~ c z near 0, phi ~ A + B ln(1-z) near 1). The caps shrink
// until their model error fits the tolerance budget.
inline Eval forward_mellin(const std::function<double(double)>& phi, double lambda,
                           const QuadratureConfig& qc) {
    qc.validate();
    if (!(lambda < 1.0)) throw domain_error("forward_mellin: lambda must be < 1");
    double value = 0.0, err = 0.0;
    double eps = qc.z0_split;
    for (int tries = 0;; ++tries) {
        double slope = phi(eps) / eps;
        double slope2 = phi(0.5 * eps) / (0.5 * eps);
        double cap = slope * std::pow(eps, 1.0 - lambda) / (1.0 - lambda);
        double cap_err =
            std::fabs(slope - slope2) * std::pow(eps, 1.0 - lambda) / (1.0 - lambda) * 2.0;
        if (cap_err < 0.2 * qc.abs_tol || tries >= 4 || eps < 1e-12) {
            value += cap;
            err += cap_err;
            break;
        }
        eps *= 0.03;
    }
    double cut = qc.z1_split;
    for (int tries = 0;; ++tries) {
        double z1 = 1.0 - cut, z2 = 1.0 - 2.0 * cut;
        double l1 = std::log(cut), l2 = std::log(2.0 * cut);
        double B = (phi(z1) - phi(z2)) / (l1 - l2);
        double A = phi(z1) - B * l1;
        double base = A * cut + B * cut * (l1 - 1.0);
        double misfit = std::fabs(phi(1.0 - 0.5 * cut) - (A + B * std::log(0.5 * cut)));
        double cap_err = std::fabs(base) * std::fabs(lambda + 1.0) * cut + misfit * cut * 2.0;
        if (cap_err < 0.2 * qc.abs_tol || tries >= 4 || cut < 1e-12) {
            value += base;
            err += cap_err;
            break;
        }
        cut *= 0.03;
    }
    auto f = [&](double z) { return phi(z) * std::pow(z, -lambda - 1.0); };
    struct Panel {
        double a, b, whole;
        int depth;
    };
    std::vector<Panel> stack;
    double a0 = eps, b0 = 1.0 - cut;
    stack.push_back({a0, b0, detail::gl_panel(f, a0, b0), 0});
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double mid = 0.5 * (p.a + p.b);
        double left = detail::gl_panel(f, p.a, mid);
        double right = detail::gl_panel(f, mid, p.b);
        double diff = left + right - p.whole;
        double local_tol = qc.abs_tol * (p.b - p.a) / (b0 - a0);
        if (std::fabs(diff) <= std::max(local_tol, 1e-16) || p.depth >= qc.max_depth) {
            value += left + right;
            err += std::fabs(diff);
            if (p.depth >= qc.max_depth && std::fabs(diff) > 10 * local_tol)
                throw quadrature_error("forward_mellin: adaptive refinement stalled");
            continue;
        }
        stack.push_back({p.a, mid, left, p.depth + 1});
        stack.push_back({mid, p.b, right, p.depth + 1});
    }
    return {value, err};
}

// theta^{-1} on a coefficient stream: -constant + sum c_p z^p / p.
inline Eval vartheta_inverse(const PowerSeriesFunction& phi, double constant, double z) {
    Eval inner = phi.eval_theta(z, -1);
    return {-constant + inner.value, inner.abs_err};
}

// Psi(k; z) via the selector combination of theta-twisted psi streams
// (route used by the library); psi((a_i,b_i); .) is phi of the
// reversed-swapped pair composition.
inline Eval eval_Psi(const Index& k, double z, const EvalConfig& cfg) {
    if (k.empty()) throw domain_error("eval_Psi: index must be nonempty");
    if (!(z > 0.0 && z < 1.0)) throw domain_error("eval_Psi: z must lie in (0,1)");
    int n = k.length();
    double total = 0.0, err = 0.0;
    for (uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        GenFunArg arg = normalize_genfun_arg(detail::fg_selector_arg(k, mask));
        if (arg.kind != GenFunArgKind::value) continue;  // constants have no poles
        int bits = __builtin_popcount(mask);
        int m = n - 1 - bits;
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        auto stream = get_stream(chain_for_f(arg.pc.reversed_swapped()), cfg);
        Eval v = stream->eval_theta(z, m);
        total += sign * v.value;
        err += v.abs_err;
    }
    return {total, err};
}

// Landen-sum route for Psi: (-1)^n sum over composition tuples of
// Li(z/(z-1)); the independent cross-check (needs z < 1/2 for the raw
// series, or z = 1/2 via the alternating boundary).
inline Eval eval_Psi_landen(const Index& k, double z, const EvalConfig& cfg) {
    if (!(z > 0.0 && z <= 0.5))
        throw domain_error("eval_Psi_landen: requires 0 < z <= 1/2");
    double w = z / (z - 1.0);
    int n = k.length();
    std::vector<std::vector<Composition>> per_part;
    for (int i = 0; i < n; ++i) per_part.push_back(enumerate_compositions(k[i]));
    double total = 0.0, err = 0.0;
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    for (;;) {
        std::vector<int> cat;
        for (int i = 0; i < n; ++i)
            for (int v : per_part[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]].parts())
                cat.push_back(v);
        Eval li = eval_mpl(Index(cat), w, cfg);
        total += li.value;
        err += li.abs_err;
        int i = 0;
        while (i < n && ++idx[static_cast<size_t>(i)] == per_part[static_cast<size_t>(i)].size())
            idx[static_cast<size_t>(i++)] = 0;
        if (i == n) break;
    }
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return {sign * total, err};
}

}  // namespace mzv

#endif  // MZV_MELLIN_HPP

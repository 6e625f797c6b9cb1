#ifndef MZV_SERIES_EVAL_HPP
#define MZV_SERIES_EVAL_HPP

// Evaluation of nested strict-chain sums
//
//   sum_{m_1 > m_2 > ... > m_B >= lo}  prod_j  z^{m_j (opt)}
//        / [ (m_j - s_1)^{a_1} (m_j - s_2)^{a_2} ... (m_j - lambda)^{e_j} ]
//
// by innermost-first prefix-sum dynamic programming, O(N*B) time and O(N)
// space, with an asymptotic continuation of every prefix level used to
// correct the outermost truncation tail. The same kernel backs zeta, Li,
// the generating functions f/g/F/G, bracket series and pole coefficients.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mzv/asym.hpp"
#include "mzv/indices.hpp"
#include "mzv/parallel.hpp"

namespace mzv {

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TailCorrection { none, integral_first_order };

struct EvalConfig {
    long truncation_N = 1000000;
    TailCorrection tail_correction = TailCorrection::integral_first_order;
    double target_abs_tol = 1e-9;
    double lambda_guard = 1e-3;

    void validate() const {
        if (truncation_N < 10) throw domain_error("EvalConfig: truncation_N must be >= 10");
        if (!(target_abs_tol > 0)) throw domain_error("EvalConfig: target_abs_tol must be > 0");
        if (!(lambda_guard > 0)) throw domain_error("EvalConfig: lambda_guard must be > 0");
    }

    EvalConfig with_N(long n) const {
        EvalConfig c = *this;
        c.truncation_N = n;
        return c;
    }
};

// One chain position: (m - shift)^{-power_exponent} times optional extra
// shifted-power pieces, times (m - lambda)^{-lambda_count}, times z^m when
// z_weight is set (Li-type series carry it on the outermost position only).
struct ChainFactor {
    int power_exponent = 0;
    int shift = 0;
    int lambda_count = 0;
    bool z_weight = false;
    std::vector<std::pair<int, int>> extra_pieces;  // (shift, exponent)

    int total_decay() const {
        int w = power_exponent + lambda_count;
        for (auto& [s, a] : extra_pieces) w += a;
        return w;
    }
};

struct ChainSeries {
    std::vector<ChainFactor> factors;  // outermost first
    int weight = 0;

    int length() const { return static_cast<int>(factors.size()); }

    void validate() const {
        for (const auto& f : factors) {
            if (f.power_exponent < 0 || f.lambda_count < 0)
                throw domain_error("ChainFactor: exponents must be >= 0");
            if (f.total_decay() < 1)
                throw domain_error("ChainFactor: power_exponent + lambda_count must be >= 1");
        }
    }
};

template <class S>
struct EvalResult {
    S value{};
    double abs_err = 0.0;
};

using Eval = EvalResult<double>;

// ---- chain builders ----------------------------------------------------

inline ChainSeries chain_for_mzv(const Index& k) {
    ChainSeries cs;
    cs.weight = k.weight();
    for (int i = 0; i < k.length(); ++i) {
        ChainFactor f;
        f.power_exponent = k[i];
        cs.factors.push_back(f);
    }
    return cs;
}

inline ChainSeries chain_for_mpl(const Index& k) {
    ChainSeries cs = chain_for_mzv(k);
    if (!cs.factors.empty()) cs.factors[0].z_weight = true;
    return cs;
}

// f((a_i,b_i); lambda): head m^{-a_i} on each block start, one (m - lambda)
// on every chain position. Optional per-block shifts d_i give the bracket
// series of the difference-relation machinery.
inline ChainSeries chain_for_f(const PairComposition& pc, const std::vector<int>* shifts = nullptr) {
    if (!pc.canonical()) throw domain_error("chain_for_f: pair composition must be canonical");
    ChainSeries cs;
    cs.weight = pc.weight();
    for (int i = 0; i < pc.size(); ++i) {
        for (int j = 0; j < pc.b(i); ++j) {
            ChainFactor f;
            f.lambda_count = 1;
            if (j == 0) {
                f.power_exponent = pc.a(i);
                f.shift = shifts ? (*shifts)[static_cast<size_t>(i)] : 0;
            }
            cs.factors.push_back(f);
        }
    }
    return cs;
}

// F(k; lambda) = sum 1/(m_1^{k_1} (m_1 - lambda) m_2^{k_2} ... m_n^{k_n}).
inline ChainSeries chain_for_F(const Index& k) {
    if (k.empty()) throw domain_error("chain_for_F: index must be nonempty");
    ChainSeries cs = chain_for_mzv(k);
    cs.factors[0].lambda_count = 1;
    cs.weight = k.weight() + 1;
    return cs;
}

// ---- kernel ------------------------------------------------------------

namespace detail {

template <class S>
struct CompiledFactor {
    std::vector<std::pair<double, int>> pieces;  // (shift, exponent)
    int lambda_count = 0;
    bool z_weight = false;

    S eval(double m, S lam) const {
        S v(1);
        for (auto& [s, a] : pieces) {
            S base = S(1) / S(m - s);
            for (int t = 0; t < a; ++t) v *= base;
        }
        for (int t = 0; t < lambda_count; ++t) v /= (S(m) - lam);
        return v;
    }

    int decay() const {
        int w = lambda_count;
        for (auto& [s, a] : pieces) w += a;
        return w;
    }
};

inline double abs_s(double x) { return std::fabs(x); }
inline double abs_s(const std::complex<double>& x) { return std::abs(x); }

// z classification for tail handling
enum class ZMode { one, inside, alternating };

template <class S>
struct ChainKernel {
    std::vector<CompiledFactor<S>> levels;  // outermost first
    S lam{};
    S z{};
    ZMode zmode = ZMode::one;
    long lo = 1;

    static ChainKernel compile(const ChainSeries& cs, S lam, S z, long lo) {
        cs.validate();
        ChainKernel k;
        k.lam = lam;
        k.z = z;
        k.lo = lo;
        double az = abs_s(z);
        if (std::fabs(az - 1.0) < 1e-14) {
            if (abs_s(z - S(1)) < 1e-14)
                k.zmode = ZMode::one;
            else if (abs_s(z + S(1)) < 1e-14)
                k.zmode = ZMode::alternating;
            else
                throw convergence_error("chain eval on |z|=1 supported only at z = +-1");
        } else if (az < 1.0) {
            k.zmode = ZMode::inside;
        } else {
            throw domain_error("chain eval requires |z| <= 1");
        }
        bool any_z = false;
        for (const auto& f : cs.factors) {
            CompiledFactor<S> cf;
            if (f.power_exponent > 0) cf.pieces.emplace_back(double(f.shift), f.power_exponent);
            for (auto& [s, a] : f.extra_pieces)
                if (a > 0) cf.pieces.emplace_back(double(s), a);
            cf.lambda_count = f.lambda_count;
            cf.z_weight = f.z_weight;
            any_z = any_z || f.z_weight;
            k.levels.push_back(std::move(cf));
        }
        if (!any_z) k.zmode = ZMode::one;  // z plays no role
        return k;
    }

    // smallest value position j (0-based, outermost first) can take
    long min_m(int j) const {
        return lo + static_cast<long>(levels.size()) - 1 - j;
    }

    bool z_at_top() const { return !levels.empty() && levels[0].z_weight && zmode != ZMode::one; }

    void check_domain(long N, double guard, bool finite_sum = false) const {
        int B = static_cast<int>(levels.size());
        for (int j = 0; j < B; ++j) {
            for (auto& [s, a] : levels[static_cast<size_t>(j)].pieces) {
                (void)a;
                if (s >= double(min_m(j)) - 0.5 && s <= double(N) + 0.5)
                    throw domain_error("chain factor (m - s) vanishes inside the summation range");
            }
            if (levels[static_cast<size_t>(j)].lambda_count > 0) {
                double re = std::real(std::complex<double>(lam));
                double im = std::imag(std::complex<double>(lam));
                double r = std::round(re);
                if (std::fabs(im) < guard && r >= double(min_m(j)) && r <= double(N) &&
                    std::hypot(re - r, im) < guard)
                    throw domain_error("lambda closer than lambda_guard to a positive integer");
            }
        }
        // the infinite sum needs decay >= 2 on the outermost variable unless
        // a z-weight < 1 (or alternating) sits there
        if (!finite_sum && !levels.empty() && !z_at_top()) {
            if (levels[0].decay() < 2)
                throw convergence_error("outermost decay exponent < 2 at z = 1");
        }
    }

    // Laurent model of the level factor: m^{-w} sum_k lc[k] m^{-k}, expanded
    // to enough orders that the first dropped term is negligible at the tail
    // truncation point.
    void factor_model(int j, double x0, int& w, std::vector<S>& lc, double& next) const {
        const auto& f = levels[static_cast<size_t>(j)];
        w = f.decay();
        // pick the order so that (max_shift/x0)^{K+1} is tiny
        double smax = std::abs(std::complex<double>(lam));
        for (auto& [s, a] : f.pieces) {
            (void)a;
            smax = std::max(smax, std::fabs(s));
        }
        double ratio = smax / x0;
        int K = 2;
        if (ratio > 1e-4) {
            K = static_cast<int>(std::ceil(std::log(1e-17) / std::log(ratio)));
            K = std::min(K, 14);
        }
        lc.assign(static_cast<size_t>(K + 1), S(0));
        lc[0] = S(1);
        auto convolve = [&](S u, int mult) {
            // multiply lc by (1 - u/m)^{-mult} = sum_k C(mult-1+k, k) u^k m^{-k}
            std::vector<S> g(static_cast<size_t>(K + 1), S(0));
            S uk(1);
            double binom = 1.0;
            for (int k = 0; k <= K; ++k) {
                g[static_cast<size_t>(k)] = S(binom) * uk;
                uk *= u;
                binom *= double(mult + k) / double(k + 1);
            }
            std::vector<S> out(static_cast<size_t>(K + 1), S(0));
            for (int a2 = 0; a2 <= K; ++a2)
                for (int b2 = 0; a2 + b2 <= K; ++b2)
                    out[static_cast<size_t>(a2 + b2)] +=
                        lc[static_cast<size_t>(a2)] * g[static_cast<size_t>(b2)];
            lc = std::move(out);
        };
        for (auto& [s, a] : f.pieces)
            if (a > 0) convolve(S(s), a);
        if (f.lambda_count > 0) convolve(lam, f.lambda_count);
        // first omitted order, crudely bounded
        next = std::pow(ratio, K + 1) * double(w + K + 1);
    }

    struct TailOut {
        S tail{};
        double est = 0.0;
    };

    // Continue the prefix cascade past M using the log-power basis; H[j] are
    // the exact DP prefix values at M.
    TailOut tail_at(long M, const std::vector<S>& H) const {
        int B = static_cast<int>(levels.size());
        double x0 = double(M);
        asym::Expansion<S> A;  // model of Pref_{j+1}(x); starts as constant 1
        A.clear();
        A.add(0, 0, S(1), x0);
        double est = 0.0;
        for (int j = B - 1; j >= 0; --j) {
            int w;
            std::vector<S> lc;
            double next;
            factor_model(j, x0, w, lc, next);
            asym::Expansion<S> T = mul_power_model(shift_arg_minus1(A, x0), w, lc, next, x0);
            if (j > 0) {
                const auto& nf = levels[static_cast<size_t>(j)];
                if (nf.z_weight && zmode != ZMode::one) {
                    // inner z-weighted prefix converges on its own; freeze it
                    A.clear();
                    A.add(0, 0, H[static_cast<size_t>(j)], x0);
                    double az = abs_s(z);
                    est += T.abs_eval(x0 + 1) *
                           (zmode == ZMode::inside ? std::pow(az, double(M + 1)) / (1.0 - az) : 1.0);
                    continue;
                }
                // A_j(x) = K + Fc(x), Fc = int T + T/2 + T'/12
                asym::Expansion<S> Fc = T.antiderivative(x0);
                asym::Expansion<S> half = T;
                half.scale(S(0.5));
                Fc += half;
                asym::Expansion<S> d12 = T.derivative(x0);
                d12.scale(S(1.0 / 12.0));
                Fc += d12;
                S K = H[static_cast<size_t>(j)] - Fc.eval(x0 + 1) + T.eval(x0 + 1);
                A = Fc;
                A.add(0, 0, K, x0);
                est += T.dropped;
                continue;
            }
            // top level: sum the tail
            TailOut out;
            double a = x0 + 1;
            if (z_at_top() && zmode == ZMode::alternating) {
                asym::Expansion<S> T1 = T.derivative(x0);
                asym::Expansion<S> T3 = T1.derivative(x0).derivative(x0);
                double sgn = (M + 1) % 2 == 0 ? 1.0 : -1.0;
                out.tail = S(sgn) * (T.eval(a) * S(0.5) - T1.eval(a) * S(0.25) +
                                     T3.eval(a) * S(1.0 / 48.0));
                out.est = est + T.dropped + std::abs(T3.eval(a)) / 24.0;
            } else if (z_at_top()) {  // |z| < 1
                double az = abs_s(z);
                out.tail = S(0);
                out.est = est + T.abs_eval(a) * std::pow(az, double(M + 1)) / (1.0 - az);
            } else {
                if (T.min_power(1e-300) < 2)
                    throw convergence_error("chain tail diverges at z = 1");
                asym::Expansion<S> T1 = T.derivative(x0);
                out.tail = T.tail_integral(a) + T.eval(a) * S(0.5) - T1.eval(a) * S(1.0 / 12.0);
                asym::Expansion<S> T3 = T1.derivative(x0).derivative(x0);
                out.est = est + T.dropped + std::abs(T3.eval(a)) / 360.0;
            }
            return out;
        }
        // empty chain
        return TailOut{S(0), 0.0};
    }

    // Exact DP up to N; returns prefix snapshots at N2 and N per level and
    // the level-0 partial sums.
    void run_dp(long N, long N2, std::vector<S>& H_N, std::vector<S>& H_N2, S& P0_N, S& P0_N2,
                double& abs_scale) const {
        int B = static_cast<int>(levels.size());
        H_N.assign(static_cast<size_t>(B), S(0));
        H_N2.assign(static_cast<size_t>(B), S(0));
        if (B == 0) {
            P0_N = P0_N2 = S(1);
            abs_scale = 1.0;
            return;
        }
        size_t len = static_cast<size_t>(N - lo + 2);  // index m-lo+1, [0] = 0
        static thread_local std::vector<S> buf_a, buf_b;
        buf_a.assign(len, S(0));
        buf_b.assign(len, S(0));
        std::vector<S>* prev = &buf_a;  // prefix of level j+1
        std::vector<S>* cur = &buf_b;
        abs_scale = 0.0;

        // z^m table only when needed, built incrementally in the loop
        for (int j = B - 1; j >= 0; --j) {
            const auto& f = levels[static_cast<size_t>(j)];
            S run(0), comp(0);  // Kahan
            S zp(1);
            if (f.z_weight) {
                zp = S(1);
                for (long t = 0; t < lo - 1; ++t) zp *= z;  // z^{lo-1}
            }
            double asum = 0.0;
            for (long m = lo; m <= N; ++m) {
                size_t idx = static_cast<size_t>(m - lo + 1);
                S inner = (j == B - 1) ? S(1) : (*prev)[idx - 1];
                S term(0);
                if (j == B - 1 || inner != S(0)) {
                    term = f.eval(double(m), lam) * inner;
                    if (f.z_weight) {
                        zp *= z;
                        term *= zp;
                    }
                }
                else if (f.z_weight) zp *= z;
                // Kahan-compensated prefix
                S y = term - comp;
                S t = run + y;
                comp = (t - run) - y;
                run = t;
                (*cur)[idx] = run;
                if (j == 0) asum += abs_s(term);
                if (m == N2) H_N2[static_cast<size_t>(j)] = run;
            }
            H_N[static_cast<size_t>(j)] = run;
            if (j == 0) abs_scale = asum;
            std::swap(prev, cur);
        }
        P0_N = H_N[0];
        P0_N2 = H_N2[0];
    }

    EvalResult<S> evaluate(const EvalConfig& cfg) const {
        cfg.validate();
        long N = cfg.truncation_N;
        if (levels.empty()) return {S(1), 0.0};
        // geometric / alternating outermost sums need far fewer terms; with
        // the correction disabled the caller wants the exact partial sum
        bool exact_partial = cfg.tail_correction == TailCorrection::none;
        if (!exact_partial && z_at_top() && zmode == ZMode::inside) {
            double az = abs_s(z);
            if (az < 1e-300) return {S(0), 0.0};
            double need = (std::log(cfg.target_abs_tol) - std::log1p(-az) - 3.0) / std::log(az);
            long n_eff = static_cast<long>(std::ceil(need)) + static_cast<long>(levels.size()) + 16;
            if (n_eff < 64) n_eff = 64;
            if (n_eff < N) N = n_eff;
        } else if (!exact_partial && z_at_top() && zmode == ZMode::alternating) {
            if (N > 65536) N = 65536;
        }
        if (N <= lo + static_cast<long>(levels.size())) N = lo + static_cast<long>(levels.size()) + 8;
        check_domain(N, cfg.lambda_guard);

        long N2 = lo + (N - lo) / 2;
        std::vector<S> H_N, H_N2;
        S P0_N, P0_N2;
        double abs_scale = 0.0;
        run_dp(N, N2, H_N, H_N2, P0_N, P0_N2, abs_scale);

        double floor_err =
            64.0 * std::numeric_limits<double>::epsilon() * (abs_scale + abs_s(P0_N)) *
            double(levels.size());

        TailOut t_N = tail_at(N, H_N);
        TailOut t_N2 = tail_at(N2, H_N2);
        if (cfg.tail_correction == TailCorrection::none) {
            double est = abs_s(t_N.tail) + t_N.est + abs_s(P0_N - P0_N2) + floor_err;
            return {P0_N, est};
        }
        S corrected = P0_N + t_N.tail;
        S corrected2 = P0_N2 + t_N2.tail;
        double est = abs_s(corrected - corrected2) + t_N.est + floor_err;
        return {corrected, est};
    }
};

}  // namespace detail

// Evaluate a chain series at (lambda, z). `lo` bounds the innermost variable
// from below (used by the constrained sums behind pole coefficients).
template <class S>
EvalResult<S> eval_chain(const ChainSeries& cs, S lambda, S z, const EvalConfig& cfg, long lo = 1) {
    auto k = detail::ChainKernel<S>::compile(cs, lambda, z, lo);
    return k.evaluate(cfg);
}

inline Eval eval_chain(const ChainSeries& cs, double lambda, double z, const EvalConfig& cfg,
                       long lo = 1) {
    return eval_chain<double>(cs, lambda, z, cfg, lo);
}

// Evaluate one chain at many (lambda, z) points concurrently; results are
// written by point index, so the output is deterministic regardless of
// scheduling. Internal DP buffers are per-thread, never shared.
template <class S>
std::vector<EvalResult<S>> eval_chain_batch(const ChainSeries& cs,
                                            const std::vector<std::pair<S, S>>& points,
                                            const EvalConfig& cfg, unsigned threads = 0) {
    std::vector<EvalResult<S>> out(points.size());
    parallel_for_index(points.size(), [&](std::size_t i) {
        out[i] = eval_chain<S>(cs, points[i].first, points[i].second, cfg);
    }, threads);
    return out;
}

// zeta(k) with tail-corrected truncation; zeta of the empty index is 1.
inline Eval eval_mzv(const Index& k, const EvalConfig& cfg) {
    if (!admissible(k)) throw domain_error("eval_mzv: index must be admissible");
    if (k.empty()) return {1.0, 0.0};
    return eval_chain(chain_for_mzv(k), 0.0, 1.0, cfg);
}

// Li_k(z); |z| < 1, or |z| <= 1 when k is admissible. Li of the empty index
// is identically 1.
template <class S>
EvalResult<S> eval_mpl(const Index& k, S z, const EvalConfig& cfg) {
    if (k.empty()) return {S(1), 0.0};
    double az = detail::abs_s(z);
    if (az > 1.0 + 1e-14) throw domain_error("eval_mpl: requires |z| <= 1");
    if (az > 1.0 - 1e-14 && !admissible(k) && !(detail::abs_s(z + S(1)) < 1e-14))
        throw domain_error("eval_mpl: |z| = 1 requires an admissible index");
    return eval_chain<S>(chain_for_mpl(k), S(0), z, cfg);
}

inline Eval eval_mpl(const Index& k, double z, const EvalConfig& cfg) {
    return eval_mpl<double>(k, z, cfg);
}

// Coefficients c_p of the partial-fraction expansion sum_p c_p / (p - lambda)
// of an f-type chain (every lambda-carrying position has a simple factor).
// c_p is obtained by pinning one lambda position to p and nested-summing the
// two remaining sub-chains.
struct PoleCoefficients {
    std::vector<double> c;
    std::vector<double> err;
};

inline PoleCoefficients pole_coefficients(const ChainSeries& cs, int p_max, const EvalConfig& cfg) {
    cs.validate();
    int B = cs.length();
    for (const auto& f : cs.factors) {
        if (f.lambda_count > 1)
            throw domain_error("pole_coefficients: lambda multiplicity must be <= 1");
        if (f.z_weight) throw domain_error("pole_coefficients: chain must not carry z");
    }
    PoleCoefficients out;
    out.c.assign(static_cast<size_t>(p_max), 0.0);
    out.err.assign(static_cast<size_t>(p_max), 0.0);

    for (int p = 1; p <= p_max; ++p) {
        double cp = 0.0, ep = 0.0;
        for (int j = 0; j < B; ++j) {
            if (cs.factors[static_cast<size_t>(j)].lambda_count != 1) continue;
            // positions below j live in [1, p-1]
            int below = B - 1 - j;
            if (below > p - 1) continue;
            // head factor at the pinned position
            double head = 1.0;
            bool dead = false;
            {
                const auto& f = cs.factors[static_cast<size_t>(j)];
                auto apply = [&](int s, int a) {
                    double base = double(p - s);
                    if (base <= 0.0) {
                        if (a > 0) dead = true;
                        return;
                    }
                    head *= std::pow(base, -a);
                };
                apply(f.shift, f.power_exponent);
                for (auto& [s, a] : f.extra_pieces) apply(s, a);
            }
            if (dead) throw domain_error("pole_coefficients: singular head at pinned position");

            auto constrained = [&](int from, int to) -> ChainSeries {
                ChainSeries sub;
                for (int t = from; t < to; ++t) {
                    ChainFactor f = cs.factors[static_cast<size_t>(t)];
                    if (f.lambda_count == 1) {
                        f.lambda_count = 0;
                        f.extra_pieces.emplace_back(p, 1);  // (m - p)
                    }
                    sub.factors.push_back(std::move(f));
                }
                return sub;
            };

            double upper = 1.0, upper_err = 0.0;
            if (j > 0) {
                ChainSeries sub = constrained(0, j);
                EvalConfig c2 = cfg;
                c2.truncation_N = std::min<long>(cfg.truncation_N,
                                                 std::max<long>(8L * p, 4096));
                auto r = eval_chain(sub, 0.0, 1.0, c2, p + 1);
                upper = r.value;
                upper_err = r.abs_err;
            }
            double lower = 1.0, lower_err = 0.0;
            if (below > 0) {
                ChainSeries sub = constrained(j + 1, B);
                // finite complete sum over [1, p-1]
                auto kk = detail::ChainKernel<double>::compile(sub, 0.0, 1.0, 1);
                std::vector<double> hn, hn2;
                double v, v2, ascale;
                long n = p - 1, n2 = std::max<long>(1, (p - 1) / 2);
                kk.check_domain(n, cfg.lambda_guard, /*finite_sum=*/true);
                kk.run_dp(n, n2, hn, hn2, v, v2, ascale);
                lower = v;
                lower_err = 64.0 * std::numeric_limits<double>::epsilon() * ascale;
            }
            cp += head * upper * lower;
            ep += std::fabs(head) * (upper_err * std::fabs(lower) + std::fabs(upper) * lower_err);
        }
        out.c[static_cast<size_t>(p - 1)] = cp;
        out.err[static_cast<size_t>(p - 1)] = ep;
    }
    return out;
}

}  // namespace mzv

#endif  // MZV_SERIES_EVAL_HPP

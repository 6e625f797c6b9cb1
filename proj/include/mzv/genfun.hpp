#ifndef MZV_GENFUN_HPP
#define MZV_GENFUN_HPP

// The generating functions f, g of the Ohno relation, their homogeneous
// combinations F, G, the bracket series behind the difference relations, and
// numeric checkers for every displayed relation.
//
// Selector expansions decrement entries of a pair composition; the resulting
// zeros are normalized eagerly: an interior zero merges its neighbors, an
// all-zero argument is the empty composition with f = 1, and a surviving
// leading a_1 = 0 or trailing b_s = 0 makes the term vanish (f := 0).

#include <cmath>
#include <cstdint>
#include <vector>

#include "mzv/indices.hpp"
#include "mzv/series_eval.hpp"

namespace mzv {

enum class GenFunArgKind { zero, one, value };

struct GenFunArg {
    GenFunArgKind kind = GenFunArgKind::zero;
    PairComposition pc;  // canonical when kind == value

    int weight() const { return kind == GenFunArgKind::value ? pc.weight() : 0; }
};

// Normalize a flattened (a_1, b_1, ..., a_s, b_s) sequence that may contain
// zeros after selector decrements. The boundary conventions apply to the raw
// sequence before interior merging: a raw a_1 = 0 or b_s = 0 makes the term
// vanish even when an interior merge could absorb the zero. (The s = 1 and
// s = 2 boundary instances of the difference relation fail under any other
// order; see the relation tests.)
inline GenFunArg normalize_genfun_arg(std::vector<int> seq) {
    for (int v : seq)
        if (v < 0) throw domain_error("genfun argument entries must be >= 0");
    GenFunArg out;
    int total = 0;
    for (int v : seq) total += v;
    if (total == 0 || seq.empty()) {
        out.kind = GenFunArgKind::one;
        return out;
    }
    if (seq.front() == 0 || seq.back() == 0) {
        out.kind = GenFunArgKind::zero;
        return out;
    }
    // merge interior zeros (order does not matter)
    for (;;) {
        bool merged = false;
        for (size_t i = 1; i + 1 < seq.size(); ++i) {
            if (seq[i] == 0) {
                seq[i - 1] += seq[i + 1];
                seq.erase(seq.begin() + static_cast<long>(i),
                          seq.begin() + static_cast<long>(i) + 2);
                merged = true;
                break;
            }
        }
        if (!merged) break;
    }
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < seq.size(); i += 2) pairs.emplace_back(seq[i], seq[i + 1]);
    out.kind = GenFunArgKind::value;
    out.pc = PairComposition(std::move(pairs));
    return out;
}

// The fully cancelled (all-zero) argument acts as the constant -1 inside the
// difference relation: for the minimal composition the relation reads
// lambda f((1,1); lambda) = lambda' f((1,1); lambda') - 1/lambda', whose
// boundary term is (-lambda')^{-1} times -1.
inline constexpr double kEmptyDifferenceTerm = -1.0;

// integer power allowing negative exponents
template <class S>
S ipow(S base, int e) {
    if (e == 0) return S(1);
    bool inv = e < 0;
    int n = inv ? -e : e;
    S r(1);
    for (int i = 0; i < n; ++i) r *= base;
    return inv ? S(1) / r : r;
}

// ---- f and g -----------------------------------------------------------

template <class S>
EvalResult<S> eval_f(const PairComposition& pc_raw, S lambda, const EvalConfig& cfg) {
    GenFunArg arg = normalize_genfun_arg(pc_raw.flatten());
    if (arg.kind == GenFunArgKind::zero) return {S(0), 0.0};
    if (arg.kind == GenFunArgKind::one) return {S(1), 0.0};
    return eval_chain<S>(chain_for_f(arg.pc), lambda, S(1), cfg);
}

inline Eval eval_f(const PairComposition& pc, double lambda, const EvalConfig& cfg) {
    return eval_f<double>(pc, lambda, cfg);
}

template <class S>
EvalResult<S> eval_g(const PairComposition& pc_raw, S lambda, const EvalConfig& cfg) {
    GenFunArg arg = normalize_genfun_arg(pc_raw.flatten());
    if (arg.kind == GenFunArgKind::zero) return {S(0), 0.0};
    if (arg.kind == GenFunArgKind::one) return {S(1), 0.0};
    return eval_chain<S>(chain_for_f(arg.pc.reversed_swapped()), lambda, S(1), cfg);
}

inline Eval eval_g(const PairComposition& pc, double lambda, const EvalConfig& cfg) {
    return eval_g<double>(pc, lambda, cfg);
}

// ---- F and G -----------------------------------------------------------

// F(k; lambda) through its explicit chain series (one extra (m_1 - lambda)).
template <class S>
EvalResult<S> eval_F(const Index& k, S lambda, const EvalConfig& cfg) {
    if (k.empty()) throw domain_error("eval_F: index must be nonempty");
    return eval_chain<S>(chain_for_F(k), lambda, S(1), cfg);
}

inline Eval eval_F(const Index& k, double lambda, const EvalConfig& cfg) {
    return eval_F<double>(k, lambda, cfg);
}

namespace detail {

// selector arguments (k_1,1) u (k_i - delta_i, 1)_{i=2..n}
inline std::vector<int> fg_selector_arg(const Index& k, uint32_t delta_mask) {
    std::vector<int> seq;
    seq.reserve(static_cast<size_t>(2 * k.length()));
    for (int i = 0; i < k.length(); ++i) {
        int d = (i > 0 && (delta_mask >> (i - 1)) & 1u) ? 1 : 0;
        seq.push_back(k[i] - d);
        seq.push_back(1);
    }
    return seq;
}

template <class S, class SideFn>
EvalResult<S> eval_FG_selectors(const Index& k, S lambda, SideFn&& side) {
    int n = k.length();
    S total(0);
    double err = 0.0;
    for (uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        GenFunArg arg = normalize_genfun_arg(fg_selector_arg(k, mask));
        if (arg.kind == GenFunArgKind::zero) continue;
        int bits = __builtin_popcount(mask);
        S coef = ipow(-lambda, n - 1 - bits);
        EvalResult<S> v =
            arg.kind == GenFunArgKind::one ? EvalResult<S>{S(1), 0.0} : side(arg.pc);
        total += coef * v.value;
        err += std::abs(coef) * v.abs_err;
    }
    return {total, err};
}

}  // namespace detail

// F via its Definition-style selector sum over f's; the cross-check route for
// the explicit series.
template <class S>
EvalResult<S> eval_F_selectors(const Index& k, S lambda, const EvalConfig& cfg) {
    if (k.empty()) throw domain_error("eval_F_selectors: index must be nonempty");
    return detail::eval_FG_selectors<S>(k, lambda, [&](const PairComposition& pc) {
        return eval_chain<S>(chain_for_f(pc), lambda, S(1), cfg);
    });
}

inline Eval eval_F_selectors(const Index& k, double lambda, const EvalConfig& cfg) {
    return eval_F_selectors<double>(k, lambda, cfg);
}

// G(k; lambda) = selector sum over g's; no simpler closed chain exists.
template <class S>
EvalResult<S> eval_G(const Index& k, S lambda, const EvalConfig& cfg) {
    if (k.empty()) throw domain_error("eval_G: index must be nonempty");
    return detail::eval_FG_selectors<S>(k, lambda, [&](const PairComposition& pc) {
        return eval_chain<S>(chain_for_f(pc.reversed_swapped()), lambda, S(1), cfg);
    });
}

inline Eval eval_G(const Index& k, double lambda, const EvalConfig& cfg) {
    return eval_G<double>(k, lambda, cfg);
}

// ---- bracket series ----------------------------------------------------

struct BracketBlock {
    int a = 0;
    int d = 0;  // head shift, 0 or 1 in the relations
    int b = 0;
};

struct BracketSpec {
    std::vector<BracketBlock> blocks;

    int weight() const {
        int w = 0;
        for (auto& bl : blocks) w += bl.a + bl.b;
        return w;
    }
};

enum class BracketKind { zero, one, chain };

struct CompiledBracket {
    BracketKind kind = BracketKind::zero;
    ChainSeries chain;
};

// Normalize a bracket: a_i = 0 merges the flanking lambda-runs, b_i = 0
// attaches the pending head to the next block's position (which also covers
// the equal-shift merge rule). Boundary zeros follow the f conventions.
inline CompiledBracket compile_bracket(const BracketSpec& spec) {
    std::vector<BracketBlock> blocks;
    for (auto& bl : spec.blocks) {
        if (bl.a < 0 || bl.b < 0) throw domain_error("bracket entries must be >= 0");
        blocks.push_back(bl);
    }
    // merge a_i = 0 blocks into the previous lambda-run
    for (;;) {
        bool merged = false;
        for (size_t i = 1; i < blocks.size(); ++i) {
            if (blocks[i].a == 0) {
                blocks[i - 1].b += blocks[i].b;
                blocks.erase(blocks.begin() + static_cast<long>(i));
                merged = true;
                break;
            }
        }
        if (!merged) break;
    }
    CompiledBracket out;
    int total = 0;
    for (auto& bl : blocks) total += bl.a + bl.b;
    if (total == 0) {
        out.kind = BracketKind::one;
        return out;
    }
    if (blocks.front().a == 0 || blocks.back().b == 0) {
        out.kind = BracketKind::zero;
        return out;
    }
    // build chain positions; blocks with b = 0 defer their head
    ChainSeries cs;
    cs.weight = total;
    std::vector<std::pair<int, int>> pending;  // (shift, exponent)
    for (auto& bl : blocks) {
        if (bl.a > 0) pending.emplace_back(bl.d, bl.a);
        for (int j = 0; j < bl.b; ++j) {
            ChainFactor f;
            f.lambda_count = 1;
            if (j == 0 && !pending.empty()) {
                f.shift = pending[0].first;
                f.power_exponent = pending[0].second;
                for (size_t t = 1; t < pending.size(); ++t) f.extra_pieces.push_back(pending[t]);
                pending.clear();
            }
            cs.factors.push_back(std::move(f));
        }
    }
    out.kind = BracketKind::chain;
    out.chain = std::move(cs);
    return out;
}

template <class S>
EvalResult<S> eval_bracket(const BracketSpec& spec, S lambda, const EvalConfig& cfg) {
    CompiledBracket cb = compile_bracket(spec);
    if (cb.kind == BracketKind::zero) return {S(0), 0.0};
    if (cb.kind == BracketKind::one) return {S(1), 0.0};
    return eval_chain<S>(cb.chain, lambda, S(1), cfg);
}

inline Eval eval_bracket(const BracketSpec& spec, double lambda, const EvalConfig& cfg) {
    return eval_bracket<double>(spec, lambda, cfg);
}

// ---- relation checkers ---------------------------------------------------

struct Residual {
    double residual = 0.0;
    double budget = 0.0;

    bool pass(double tol) const { return residual <= tol; }
};

namespace detail {

// one side of the difference relation
template <class S>
struct Accum {
    S total{};
    double err = 0.0;

    void add(S coef, const EvalResult<S>& v) {
        total += coef * v.value;
        err += std::abs(coef) * v.abs_err;
    }
};

}  // namespace detail

// The difference relation satisfied by f (and by g): the unprimed selector
// sum over {(0,0),(1,0),(0,1)}^s at lambda equals the primed sum at
// lambda' = lambda - 1 with the epsilon indices shifted by one.
inline Residual check_f_difference(const PairComposition& pc, double lambda, const EvalConfig& cfg,
                                   bool g_side = false) {
    if (!pc.canonical()) throw domain_error("check_f_difference: pc must be canonical");
    int s = pc.size();
    double lam1 = lambda - 1.0;
    auto side = [&](const PairComposition& q, double lam) {
        return g_side ? eval_g(q, lam, cfg) : eval_f(q, lam, cfg);
    };
    auto term = [&](const std::vector<int>& seq, double lam, int expo, detail::Accum<double>& acc) {
        GenFunArg arg = normalize_genfun_arg(seq);
        if (arg.kind == GenFunArgKind::zero) return;
        double coef = ipow(-lam, expo);
        if (arg.kind == GenFunArgKind::one)
            acc.add(coef, Eval{kEmptyDifferenceTerm, 0.0});
        else
            acc.add(coef, side(arg.pc, lam));
    };

    detail::Accum<double> lhs;
    {
        // (delta_i, eps_i) in I = {(0,0),(1,0),(0,1)}
        std::vector<int> sel(static_cast<size_t>(s), 0);
        for (;;) {
            std::vector<int> seq;
            int bits = 0;
            for (int i = 0; i < s; ++i) {
                int d = sel[static_cast<size_t>(i)] == 1 ? 1 : 0;
                int e = sel[static_cast<size_t>(i)] == 2 ? 1 : 0;
                bits += d + e;
                seq.push_back(pc.a(i) - d);
                seq.push_back(pc.b(i) - e);
            }
            term(seq, lambda, s - bits, lhs);
            int i = 0;
            while (i < s && sel[static_cast<size_t>(i)] == 2) sel[static_cast<size_t>(i++)] = 0;
            if (i == s) break;
            ++sel[static_cast<size_t>(i)];
        }
    }

    detail::Accum<double> rhs;
    {
        // delta'_1, eps'_{s+1} in {0,1} free; (delta'_i, eps'_i) in I for
        // i = 2..s. The argument pairs b_i with eps'_{i+1}: pair i decrements
        // a_i and the preceding b_{i-1}; the free eps'_{s+1} decrements b_s.
        std::vector<int> sel(static_cast<size_t>(s - 1), 0);
        for (;;) {
            for (int d1 = 0; d1 <= 1; ++d1)
                for (int es1 = 0; es1 <= 1; ++es1) {
                    std::vector<int> adec(static_cast<size_t>(s), 0),
                        bdec(static_cast<size_t>(s), 0);
                    adec[0] = d1;
                    bdec[static_cast<size_t>(s - 1)] = es1;
                    int bits = d1 + es1;
                    for (int i = 2; i <= s; ++i) {
                        int v = sel[static_cast<size_t>(i - 2)];
                        adec[static_cast<size_t>(i - 1)] = v == 1 ? 1 : 0;
                        bdec[static_cast<size_t>(i - 2)] = v == 2 ? 1 : 0;
                        bits += (v != 0);
                    }
                    std::vector<int> seq;
                    for (int i = 0; i < s; ++i) {
                        seq.push_back(pc.a(i) - adec[static_cast<size_t>(i)]);
                        seq.push_back(pc.b(i) - bdec[static_cast<size_t>(i)]);
                    }
                    term(seq, lam1, s - bits, rhs);
                }
            if (s == 1) break;
            int i = 0;
            while (i < s - 1 && sel[static_cast<size_t>(i)] == 2) sel[static_cast<size_t>(i++)] = 0;
            if (i == s - 1) break;
            ++sel[static_cast<size_t>(i)];
        }
    }

    Residual r;
    r.residual = std::fabs(lhs.total - rhs.total);
    r.budget = lhs.err + rhs.err + 1e-13;
    return r;
}

// The F/G difference relations. Case (i) applies for k_1 >= 2, case (ii) for
// k_1 = 1 and depth >= 2.
struct FRelResiduals {
    double f_residual = 0.0;
    double g_residual = 0.0;
    double budget = 0.0;

    bool pass(double tol) const { return f_residual <= tol && g_residual <= tol; }
};

inline FRelResiduals check_F_relation(const Index& k, double lambda, const EvalConfig& cfg) {
    if (k.empty()) throw domain_error("check_F_relation: index must be nonempty");
    FRelResiduals out;
    if (k[0] >= 2) {
        std::vector<int> lowered(k.parts());
        lowered[0] -= 1;
        Index kl(lowered);
        auto F = eval_F(k, lambda, cfg);
        auto Fl = eval_F(kl, lambda, cfg);
        auto zk = eval_mzv(k, cfg);
        out.f_residual = std::fabs(lambda * F.value + zk.value - Fl.value);
        auto G = eval_G(k, lambda, cfg);
        auto Gl = eval_G(kl, lambda, cfg);
        auto zkd = eval_mzv(dual(k), cfg);
        out.g_residual = std::fabs(lambda * G.value + zkd.value - Gl.value);
        out.budget = std::fabs(lambda) * (F.abs_err + G.abs_err) + zk.abs_err + zkd.abs_err +
                     Fl.abs_err + Gl.abs_err + 1e-13;
        return out;
    }
    if (k.length() < 2)
        throw domain_error("check_F_relation: k_1 = 1 requires depth >= 2");
    // lambda F(k; lambda) - zeta(h) = lambda' F(k; lambda') + lambda' F(h; lambda')
    // with h = (k_2 + 1, k_3, ..., k_n); the zeta term is subtracted (the
    // positive sign fails numerically for every test index).
    double lam1 = lambda - 1.0;
    std::vector<int> hp(k.parts().begin() + 1, k.parts().end());
    hp[0] += 1;  // (k_2 + 1, k_3, ..., k_n)
    Index h(hp);
    auto F = eval_F(k, lambda, cfg);
    auto F1 = eval_F(k, lam1, cfg);
    auto Fh = eval_F(h, lam1, cfg);
    auto zh = eval_mzv(h, cfg);
    out.f_residual = std::fabs(lambda * F.value - zh.value - lam1 * F1.value - lam1 * Fh.value);
    auto G = eval_G(k, lambda, cfg);
    auto G1 = eval_G(k, lam1, cfg);
    auto Gh = eval_G(h, lam1, cfg);
    auto zhd = eval_mzv(dual(h), cfg);
    out.g_residual = std::fabs(lambda * G.value - zhd.value - lam1 * G1.value - lam1 * Gh.value);
    out.budget = std::fabs(lambda) * (F.abs_err + G.abs_err) + zh.abs_err + zhd.abs_err +
                 std::fabs(lam1) * (F1.abs_err + Fh.abs_err + G1.abs_err + Gh.abs_err) + 1e-13;
    return out;
}

// ---- the five bracket lemma cases ---------------------------------------

enum class LemmaCase { i_a, i_b, ii, iii_a, iii_b };

inline const char* lemma_case_name(LemmaCase c) {
    switch (c) {
        case LemmaCase::i_a: return "(i)(a)";
        case LemmaCase::i_b: return "(i)(b)";
        case LemmaCase::ii: return "(ii)";
        case LemmaCase::iii_a: return "(iii)(a)";
        case LemmaCase::iii_b: return "(iii)(b)";
    }
    return "?";
}

// Whether the case hypotheses hold for pc (and block index i for case (ii),
// 1-based).
inline bool lemma_case_applicable(LemmaCase c, const PairComposition& pc, int i = 0) {
    int s = pc.size();
    if (s == 0) return false;
    int B = pc.chain_length();
    switch (c) {
        case LemmaCase::i_a: return pc.a(0) >= 2 && B >= 2;
        case LemmaCase::i_b: return pc.a(0) == 1 && B >= 2;
        case LemmaCase::ii:
            return i >= 2 && i <= s && (i < s || pc.b(s - 1) != 1);
        case LemmaCase::iii_a: return pc.b(s - 1) >= 2;
        case LemmaCase::iii_b: return pc.b(s - 1) == 1 && (s >= 2 || pc.a(s - 1) >= 2);
    }
    return false;
}

inline Residual check_lemma_case(LemmaCase c, const PairComposition& pc, int i, double lambda,
                                 const EvalConfig& cfg) {
    if (!lemma_case_applicable(c, pc, i))
        throw domain_error("lemma case hypotheses not satisfied");
    int s = pc.size();
    double lam1 = lambda - 1.0;
    // blocks with modified entries; ds[j] = head shift of block j
    auto make = [&](const std::vector<int>& ds, int da_block, int da, int db_block, int db) {
        BracketSpec spec;
        for (int j = 0; j < s; ++j) {
            BracketBlock bl;
            bl.a = pc.a(j) - (j == da_block ? da : 0);
            bl.b = pc.b(j) - (j == db_block ? db : 0);
            bl.d = ds[static_cast<size_t>(j)];
            spec.blocks.push_back(bl);
        }
        return spec;
    };
    auto ev = [&](const BracketSpec& spec, double lam) { return eval_bracket(spec, lam, cfg); };

    detail::Accum<double> lhs, rhs;
    std::vector<int> d0(static_cast<size_t>(s), 0);
    switch (c) {
        case LemmaCase::i_a: {
            std::vector<int> d1(d0);
            d1[0] = 1;
            lhs.add(lambda, ev(make(d0, -1, 0, -1, 0), lambda));
            lhs.add(-1.0, ev(make(d0, 0, 1, -1, 0), lambda));
            lhs.add(-1.0, ev(make(d0, -1, 0, 0, 1), lambda));
            rhs.add(lam1, ev(make(d1, -1, 0, -1, 0), lambda));
            rhs.add(-1.0, ev(make(d1, 0, 1, -1, 0), lambda));
            break;
        }
        case LemmaCase::i_b: {
            std::vector<int> d1(d0);
            d1[0] = 1;
            lhs.add(lambda, ev(make(d0, -1, 0, -1, 0), lambda));
            lhs.add(-1.0, ev(make(d0, -1, 0, 0, 1), lambda));
            rhs.add(lam1, ev(make(d1, -1, 0, -1, 0), lambda));
            break;
        }
        case LemmaCase::ii: {
            int bi = i - 1;  // 0-based block index
            std::vector<int> dl(d0), dr(d0);
            for (int j = 0; j < bi; ++j) dl[static_cast<size_t>(j)] = dr[static_cast<size_t>(j)] = 1;
            dr[static_cast<size_t>(bi)] = 1;
            lhs.add(lambda, ev(make(dl, -1, 0, -1, 0), lambda));
            lhs.add(-1.0, ev(make(dl, bi, 1, -1, 0), lambda));
            lhs.add(-1.0, ev(make(dl, -1, 0, bi, 1), lambda));
            rhs.add(lam1, ev(make(dr, -1, 0, -1, 0), lambda));
            rhs.add(-1.0, ev(make(dr, bi, 1, -1, 0), lambda));
            rhs.add(-1.0, ev(make(dr, -1, 0, bi - 1, 1), lambda));
            break;
        }
        case LemmaCase::iii_a: {
            std::vector<int> d1(static_cast<size_t>(s), 1);
            lhs.add(1.0, ev(make(d1, -1, 0, -1, 0), lambda));
            rhs.add(1.0, ev(make(d0, -1, 0, -1, 0), lam1));
            rhs.add(-1.0 / lam1, ev(make(d0, -1, 0, s - 1, 1), lam1));
            break;
        }
        case LemmaCase::iii_b: {
            std::vector<int> dm(static_cast<size_t>(s), 1);
            dm[static_cast<size_t>(s - 1)] = 0;
            lhs.add(lambda, ev(make(dm, -1, 0, -1, 0), lambda));
            lhs.add(-1.0, ev(make(dm, s - 1, 1, -1, 0), lambda));
            rhs.add(lam1, ev(make(d0, -1, 0, -1, 0), lam1));
            rhs.add(-1.0, ev(make(d0, s - 1, 1, -1, 0), lam1));
            if (s >= 2) rhs.add(-1.0, ev(make(d0, -1, 0, s - 2, 1), lam1));
            break;
        }
    }
    Residual r;
    r.residual = std::fabs(lhs.total - rhs.total);
    r.budget = lhs.err + rhs.err + 1e-13;
    return r;
}

// Exact integer homogeneity audit of the f difference relation: every term's
// weight (argument weight minus the lambda power) must equal |pc| - s.
inline bool difference_relation_homogeneous(const PairComposition& pc) {
    int s = pc.size();
    int expect = pc.weight() - s;
    std::vector<int> sel(static_cast<size_t>(s), 0);
    for (;;) {
        std::vector<int> seq;
        int bits = 0;
        for (int i = 0; i < s; ++i) {
            int d = sel[static_cast<size_t>(i)] == 1 ? 1 : 0;
            int e = sel[static_cast<size_t>(i)] == 2 ? 1 : 0;
            bits += d + e;
            seq.push_back(pc.a(i) - d);
            seq.push_back(pc.b(i) - e);
        }
        GenFunArg arg = normalize_genfun_arg(seq);
        if (arg.kind != GenFunArgKind::zero) {
            // lambda carries weight -1, so the (-lambda)^{s-bits} prefactor
            // contributes -(s - bits)
            int w = arg.weight() - (s - bits);
            if (w != expect) return false;
        }
        int i = 0;
        while (i < s && sel[static_cast<size_t>(i)] == 2) sel[static_cast<size_t>(i++)] = 0;
        if (i == s) break;
        ++sel[static_cast<size_t>(i)];
    }
    return true;
}

}  // namespace mzv

#endif  // MZV_GENFUN_HPP

#ifndef MZV_INDICES_HPP
#define MZV_INDICES_HPP

// Index / composition combinatorics: zero-normalization, the partial order on
// compositions, the kappa correspondence between pair compositions and
// admissible indices, and dual indices.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mzv {

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered sequence of positive integers. Used both as an MZV/MPL index
// (k_1,...,k_n) and as a composition (c_1,...,c_l); may be empty.
class Composition {
  public:
    Composition() = default;
    explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (int p : parts_)
            if (p < 1) throw domain_error("composition parts must be >= 1");
    }
    Composition(std::initializer_list<int> parts)
        : Composition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    int length() const { return static_cast<int>(parts_.size()); }
    int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

    int operator[](int i) const { return parts_[static_cast<size_t>(i)]; }

    friend bool operator==(const Composition& a, const Composition& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator!=(const Composition& a, const Composition& b) {
        return !(a == b);
    }
    friend bool operator<(const Composition& a, const Composition& b) {
        return a.parts_ < b.parts_;
    }

  private:
    std::vector<int> parts_;
};

// An MZV index is the same data with admissibility semantics (k_1 >= 2).
using Index = Composition;

inline int weight(const Composition& c) { return c.weight(); }
inline int depth(const Index& k) { return k.length(); }

inline bool admissible(const Index& k) {
    return k.empty() || k[0] >= 2;
}

// Pair composition ((a_1,b_1),...,(a_s,b_s)); the kappa-preimage indexing the
// generating functions f and g. Canonical form has all a_i, b_i >= 1.
class PairComposition {
  public:
    PairComposition() = default;
    explicit PairComposition(std::vector<std::pair<int, int>> pairs)
        : pairs_(std::move(pairs)) {
        rebuild_prefix();
    }
    PairComposition(std::initializer_list<std::pair<int, int>> pairs)
        : PairComposition(std::vector<std::pair<int, int>>(pairs)) {}

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    bool empty() const { return pairs_.empty(); }
    int size() const { return static_cast<int>(pairs_.size()); }
    int a(int i) const { return pairs_[static_cast<size_t>(i)].first; }
    int b(int i) const { return pairs_[static_cast<size_t>(i)].second; }

    // B_i = b_1 + ... + b_i, with B_0 = 0.
    int prefix_b(int i) const { return prefix_b_[static_cast<size_t>(i)]; }
    int chain_length() const { return prefix_b_.empty() ? 0 : prefix_b_.back(); }

    int weight() const {
        int w = 0;
        for (auto& [a, b] : pairs_) w += a + b;
        return w;
    }

    bool canonical() const {
        for (auto& [a, b] : pairs_)
            if (a < 1 || b < 1) return false;
        return true;
    }

    // Flattened composition (a_1, b_1, ..., a_s, b_s).
    std::vector<int> flatten() const {
        std::vector<int> out;
        out.reserve(pairs_.size() * 2);
        for (auto& [a, b] : pairs_) {
            out.push_back(a);
            out.push_back(b);
        }
        return out;
    }

    // Reverse the pair order and swap a <-> b in each pair; g((a_i,b_i);.) is
    // f of this.
    PairComposition reversed_swapped() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(pairs_.size());
        for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it)
            out.emplace_back(it->second, it->first);
        return PairComposition(std::move(out));
    }

    friend bool operator==(const PairComposition& x, const PairComposition& y) {
        return x.pairs_ == y.pairs_;
    }
    friend bool operator!=(const PairComposition& x, const PairComposition& y) {
        return !(x == y);
    }
    friend bool operator<(const PairComposition& x, const PairComposition& y) {
        return x.pairs_ < y.pairs_;
    }

  private:
    void rebuild_prefix() {
        prefix_b_.assign(pairs_.size() + 1, 0);
        for (size_t i = 0; i < pairs_.size(); ++i) {
            if (pairs_[i].first < 0 || pairs_[i].second < 0)
                throw domain_error("pair composition entries must be >= 0");
            prefix_b_[i + 1] = prefix_b_[i] + pairs_[i].second;
        }
    }

    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> prefix_b_;  // B_0..B_s
};

// Remove zeros from a nonnegative sequence: an interior zero merges its two
// neighbors, a boundary zero is dropped. Order of removal does not matter;
// an all-zero sequence normalizes to the empty composition.
inline Composition normalize(const std::vector<int>& raw) {
    for (int v : raw)
        if (v < 0) throw domain_error("normalize: entries must be >= 0");
    std::vector<int> cur(raw);
    for (;;) {
        auto it = std::find(cur.begin(), cur.end(), 0);
        if (it == cur.end()) break;
        size_t i = static_cast<size_t>(it - cur.begin());
        if (i > 0 && i + 1 < cur.size()) {
            cur[i - 1] += cur[i + 1];
            cur.erase(cur.begin() + static_cast<long>(i),
                      cur.begin() + static_cast<long>(i) + 2);
        } else {
            cur.erase(it);
        }
    }
    return Composition(std::move(cur));
}

// c <= d in the decrease order: c is obtained from d by decreasing some
// elements and normalizing zeros. Includes equality. Sizes here are tiny, so
// the decrease assignments are enumerated directly.
inline bool precedes(const Composition& c, const Composition& d) {
    if (c.weight() > d.weight()) return false;
    if (c == d) return true;
    const auto& dp = d.parts();
    std::vector<int> e(dp.size(), 0);
    // odometer over 0 <= e_i <= d_i
    for (;;) {
        if (normalize(e) == c) return true;
        size_t i = 0;
        while (i < e.size() && e[i] == dp[i]) e[i++] = 0;
        if (i == e.size()) return false;
        ++e[i];
    }
}

// kappa((a_i,b_i)) = (a_1+1, 1^{b_1-1}, ..., a_s+1, 1^{b_s-1}); bijection onto
// nonempty admissible indices.
inline Index kappa(const PairComposition& pc) {
    if (!pc.canonical())
        throw domain_error("kappa: pair composition must be canonical");
    std::vector<int> parts;
    parts.reserve(static_cast<size_t>(pc.chain_length()));
    for (auto& [a, b] : pc.pairs()) {
        parts.push_back(a + 1);
        for (int j = 0; j < b - 1; ++j) parts.push_back(1);
    }
    return Index(std::move(parts));
}

inline PairComposition kappa_inv(const Index& k) {
    if (k.empty() || !admissible(k))
        throw domain_error("kappa_inv: index must be nonempty and admissible");
    std::vector<std::pair<int, int>> pairs;
    int i = 0, n = k.length();
    while (i < n) {
        int a = k[i] - 1;
        ++i;
        int b = 1;
        while (i < n && k[i] == 1) {
            ++b;
            ++i;
        }
        pairs.emplace_back(a, b);
    }
    return PairComposition(std::move(pairs));
}

// Dual index: ((a_i,b_i)) -> (b_s+1, 1^{a_s-1}, ..., b_1+1, 1^{a_1-1}).
// The dual of the empty index is itself.
inline Index dual(const Index& k) {
    if (k.empty()) return Index();
    if (!admissible(k)) throw domain_error("dual: index must be admissible");
    return kappa(kappa_inv(k).reversed_swapped());
}

// All 2^{k-1} compositions of k, lexicographically descending by first
// element, then recursively; optional exact-length filter.
inline std::vector<Composition> enumerate_compositions(int k, int length_filter = 0) {
    if (k < 1) throw domain_error("enumerate_compositions: k must be >= 1");
    std::vector<std::vector<int>> acc;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            acc.push_back(cur);
            return;
        }
        for (int first = rest; first >= 1; --first) {
            cur.push_back(first);
            self(self, rest - first);
            cur.pop_back();
        }
    };
    rec(rec, k);
    std::vector<Composition> out;
    out.reserve(acc.size());
    for (auto& v : acc) {
        if (length_filter > 0 && static_cast<int>(v.size()) != length_filter) continue;
        out.emplace_back(std::move(v));
    }
    return out;
}

// All canonical pair compositions of the given weight (even-length
// compositions grouped in twos), in the composition enumeration order.
inline std::vector<PairComposition> enumerate_pair_compositions(int weight) {
    if (weight < 2) throw domain_error("enumerate_pair_compositions: weight must be >= 2");
    std::vector<PairComposition> out;
    for (const auto& c : enumerate_compositions(weight)) {
        if (c.length() % 2 != 0) continue;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < c.length(); i += 2) pairs.emplace_back(c[i], c[i + 1]);
        out.emplace_back(std::move(pairs));
    }
    return out;
}

// All admissible indices of the given weight (optionally fixed depth).
inline std::vector<Index> enumerate_admissible_indices(int weight, int depth_filter = 0) {
    std::vector<Index> out;
    if (weight < 2) return out;
    for (const auto& c : enumerate_compositions(weight, depth_filter)) {
        if (c[0] >= 2) out.push_back(c);
    }
    return out;
}

// ---- text notation ----------------------------------------------------
// Indices and compositions print as "(3,1)", the empty one as "()"; pair
// compositions as "((2,1),(1,2))".

inline std::string to_string(const Composition& c) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < c.length(); ++i) {
        if (i) os << ',';
        os << c[i];
    }
    os << ')';
    return os.str();
}

inline std::string to_string(const PairComposition& pc) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < pc.size(); ++i) {
        if (i) os << ',';
        os << '(' << pc.a(i) << ',' << pc.b(i) << ')';
    }
    os << ')';
    return os.str();
}

namespace detail {

inline void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline int parse_int(const std::string& s, size_t& i) {
    skip_ws(s, i);
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) throw parse_error("expected integer in '" + s + "'");
    return std::stoi(s.substr(start, i - start));
}

inline void expect(const std::string& s, size_t& i, char ch) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ch)
        throw parse_error(std::string("expected '") + ch + "' in '" + s + "'");
    ++i;
}

}  // namespace detail

inline Composition parse_composition(const std::string& text) {
    size_t i = 0;
    detail::expect(text, i, '(');
    std::vector<int> parts;
    detail::skip_ws(text, i);
    if (i < text.size() && text[i] == ')') {
        ++i;
    } else {
        for (;;) {
            parts.push_back(detail::parse_int(text, i));
            detail::skip_ws(text, i);
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            detail::expect(text, i, ')');
            break;
        }
    }
    detail::skip_ws(text, i);
    if (i != text.size()) throw parse_error("trailing characters in '" + text + "'");
    return Composition(std::move(parts));
}

inline Index parse_index(const std::string& text) { return parse_composition(text); }

inline PairComposition parse_pair_composition(const std::string& text) {
    size_t i = 0;
    detail::expect(text, i, '(');
    std::vector<std::pair<int, int>> pairs;
    detail::skip_ws(text, i);
    if (i < text.size() && text[i] == ')') {
        ++i;
    } else {
        for (;;) {
            detail::expect(text, i, '(');
            int a = detail::parse_int(text, i);
            detail::expect(text, i, ',');
            int b = detail::parse_int(text, i);
            detail::expect(text, i, ')');
            pairs.emplace_back(a, b);
            detail::skip_ws(text, i);
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            detail::expect(text, i, ')');
            break;
        }
    }
    detail::skip_ws(text, i);
    if (i != text.size()) throw parse_error("trailing characters in '" + text + "'");
    return PairComposition(std::move(pairs));
}

}  // namespace mzv

#endif  // MZV_INDICES_HPP

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "mzv/indices.hpp"

using namespace mzv;

TEST_CASE("zero normalization follows the merge rule") {
    CHECK(normalize({3, 0, 2, 0, 4}) == Composition{9});
    CHECK(normalize({3, 0, 2, 1, 0, 0, 4}) == Composition{5, 1, 4});
    CHECK(normalize({5, 1, 4}) == Composition{5, 1, 4});
    CHECK(normalize({0}) == Composition{});
    CHECK(normalize({}) == Composition{});
    CHECK(normalize({0, 3}) == Composition{3});
    CHECK(normalize({3, 0}) == Composition{3});
    CHECK_THROWS_AS(normalize({1, -2}), domain_error);
}

TEST_CASE("normalization is idempotent and removal-order independent") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> len(1, 8), val(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<int> raw(static_cast<size_t>(len(rng)));
        for (auto& v : raw) v = val(rng);
        Composition once = normalize(raw);
        CHECK(normalize(once.parts()) == once);
        // manual randomized removal order
        std::vector<int> cur = raw;
        while (true) {
            std::vector<size_t> zero_positions;
            for (size_t i = 0; i < cur.size(); ++i)
                if (cur[i] == 0) zero_positions.push_back(i);
            if (zero_positions.empty()) break;
            size_t pick = zero_positions[rng() % zero_positions.size()];
            if (pick > 0 && pick + 1 < cur.size()) {
                cur[pick - 1] += cur[pick + 1];
                cur.erase(cur.begin() + static_cast<long>(pick),
                          cur.begin() + static_cast<long>(pick) + 2);
            } else {
                cur.erase(cur.begin() + static_cast<long>(pick));
            }
        }
        CHECK(Composition{cur} == once);
        int w = 0;
        for (int v : raw) w += v;
        CHECK(once.weight() == w);
    }
}

TEST_CASE("precedes matches the paper examples and includes equality") {
    CHECK(precedes(Composition{4, 1, 3}, Composition{5, 1, 4}));
    CHECK(precedes(Composition{9}, Composition{5, 1, 4}));  // (5,0,4) merges to (9)
    CHECK(precedes(Composition{5, 1, 4}, Composition{5, 1, 4}));
    CHECK(precedes(Composition{}, Composition{2, 1}));
    CHECK_FALSE(precedes(Composition{5, 1, 4}, Composition{4, 1, 3}));
    CHECK_FALSE(precedes(Composition{3, 3}, Composition{5, 1}));  // cannot split parts
}

TEST_CASE("precedes is a partial order on sampled compositions") {
    std::vector<Composition> all;
    for (int w = 1; w <= 6; ++w)
        for (auto& c : enumerate_compositions(w)) all.push_back(c);
    all.push_back(Composition{});
    for (auto& c : all) CHECK(precedes(c, c));
    for (auto& a : all)
        for (auto& b : all)
            if (precedes(a, b) && precedes(b, a)) CHECK(a == b);
    // transitivity on a seeded weight-8 sample
    std::mt19937 rng(7);
    std::vector<Composition> sample;
    for (int w = 7; w <= 8; ++w)
        for (auto& c : enumerate_compositions(w)) sample.push_back(c);
    std::shuffle(sample.begin(), sample.end(), rng);
    sample.resize(24);
    for (auto& c : all) sample.push_back(c);
    for (int trial = 0; trial < 4000; ++trial) {
        auto& a = sample[rng() % sample.size()];
        auto& b = sample[rng() % sample.size()];
        auto& c = sample[rng() % sample.size()];
        if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
    }
}

TEST_CASE("kappa unfolds pair compositions") {
    CHECK(kappa(PairComposition{{1, 1}}) == Index{2});
    CHECK(kappa(PairComposition{{2, 2}}) == Index{3, 1});
    CHECK(kappa(PairComposition{{2, 1}, {1, 2}}) == Index{3, 2, 1});
    CHECK_THROWS_AS(kappa(PairComposition{{0, 1}}), domain_error);
}

TEST_CASE("kappa_inv inverts kappa") {
    CHECK(kappa_inv(Index{2}) == PairComposition{{1, 1}});
    CHECK(kappa_inv(Index{3, 1}) == PairComposition{{2, 2}});
    CHECK(kappa_inv(Index{2, 1, 1}) == PairComposition{{1, 3}});
    CHECK_THROWS_AS(kappa_inv(Index{1, 2}), domain_error);
    CHECK_THROWS_AS(kappa_inv(Index{}), domain_error);
}

TEST_CASE("kappa is a bijection on weights up to 10") {
    for (int w = 2; w <= 10; ++w) {
        auto pcs = enumerate_pair_compositions(w);
        auto idx = enumerate_admissible_indices(w);
        CHECK(pcs.size() == idx.size());
        for (auto& pc : pcs) CHECK(kappa_inv(kappa(pc)) == pc);
        for (auto& k : idx) CHECK(kappa(kappa_inv(k)) == k);
    }
}

TEST_CASE("dual matches the paper examples") {
    CHECK(dual(Index{}) == Index{});
    CHECK(dual(Index{2}) == Index{2});
    CHECK(dual(Index{3}) == Index{2, 1});
    CHECK(dual(Index{4}) == Index{2, 1, 1});
    CHECK(dual(Index{3, 1}) == Index{3, 1});
    CHECK_THROWS_AS(dual(Index{1, 2}), domain_error);
}

TEST_CASE("dual is a weight-preserving involution up to weight 10") {
    for (int w = 2; w <= 10; ++w)
        for (auto& k : enumerate_admissible_indices(w)) {
            Index d = dual(k);
            CHECK(d.weight() == k.weight());
            CHECK(dual(d) == k);
        }
}

TEST_CASE("composition enumeration order and counts") {
    CHECK(enumerate_compositions(1) == std::vector<Composition>{Composition{1}});
    CHECK(enumerate_compositions(3) ==
          std::vector<Composition>{Composition{3}, Composition{2, 1}, Composition{1, 2},
                                   Composition{1, 1, 1}});
    CHECK(enumerate_compositions(3, 2) ==
          std::vector<Composition>{Composition{2, 1}, Composition{1, 2}});
    for (int k = 1; k <= 12; ++k)
        CHECK(enumerate_compositions(k).size() == (size_t{1} << (k - 1)));
    CHECK_THROWS_AS(enumerate_compositions(0), domain_error);
}

TEST_CASE("pair composition enumeration") {
    CHECK(enumerate_pair_compositions(2) ==
          std::vector<PairComposition>{PairComposition{{1, 1}}});
    CHECK(enumerate_pair_compositions(3) ==
          std::vector<PairComposition>{PairComposition{{2, 1}}, PairComposition{{1, 2}}});
    // weight 4: the four kappa-preimages of the weight-4 admissible indices
    auto w4 = enumerate_pair_compositions(4);
    CHECK(w4 == std::vector<PairComposition>{PairComposition{{3, 1}}, PairComposition{{2, 2}},
                                             PairComposition{{1, 3}},
                                             PairComposition{{1, 1}, {1, 1}}});
    for (int w = 2; w <= 10; ++w)
        CHECK(enumerate_pair_compositions(w).size() == (size_t{1} << (w - 2)));
}

TEST_CASE("notation round trips") {
    CHECK(to_string(Index{3, 1}) == "(3,1)");
    CHECK(to_string(Index{}) == "()");
    CHECK(parse_index("(3,1)") == Index{3, 1});
    CHECK(parse_index("( 3 , 1 )") == Index{3, 1});
    CHECK(parse_index("()") == Index{});
    CHECK(to_string(PairComposition{{2, 1}, {1, 2}}) == "((2,1),(1,2))");
    CHECK(parse_pair_composition("((2,1),(1,2))") == PairComposition{{2, 1}, {1, 2}});
    CHECK(parse_pair_composition("((2,2))") == PairComposition{{2, 2}});
    CHECK_THROWS_AS(parse_index("(3,"), parse_error);
    CHECK_THROWS_AS(parse_index("(3) junk"), parse_error);
    CHECK_THROWS_AS(parse_pair_composition("((2),(1,2))"), parse_error);
}

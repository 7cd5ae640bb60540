#include "extremal/hall_basis.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace extremal;

TEST_CASE("layer dimension formula") {
    CHECK(HallBasis::witt_dimensions(2, 6) ==
          std::vector<long long>{0, 2, 1, 2, 3, 6, 9});
    CHECK(HallBasis::witt_dimensions(3, 4) == std::vector<long long>{0, 3, 3, 8, 18});
    CHECK(HallBasis::witt_dimensions(2, 2) == std::vector<long long>{0, 2, 1});

    // dimensions agree with the formula for every small group
    for (int r : {2, 3})
        for (int s = 1; s <= 6; ++s) {
            HallBasis b = HallBasis::build(r, s);
            auto dims = HallBasis::witt_dimensions(r, s);
            long long total = 0;
            for (int d = 1; d <= s; ++d) {
                CHECK(b.layer_dims()[static_cast<std::size_t>(d - 1)] == dims[static_cast<std::size_t>(d)]);
                total += dims[static_cast<std::size_t>(d)];
            }
            CHECK(b.dimension() == total);
        }
    CHECK(HallBasis::build(2, 6).dimension() == 23);
    CHECK(HallBasis::build(3, 4).dimension() == 32);
    CHECK(HallBasis::build(3, 6).dimension() == 196);
}

TEST_CASE("the dimension cap aborts oversized builds") {
    CHECK_THROWS_AS(HallBasis::build(3, 6, 100), ResourceCapError);
    CHECK_NOTHROW(HallBasis::build(3, 6, 196));
}

namespace {
void check_labels(const HallBasis& b, const std::vector<std::pair<int, int>>& expected,
                  int first_composite) {
    for (std::size_t idx = 0; idx < expected.size(); ++idx) {
        const HallElement& e = b.element(first_composite + static_cast<int>(idx));
        CHECK(e.left == expected[idx].first);
        CHECK(e.right == expected[idx].second);
    }
}
}  // namespace

TEST_CASE("bracket labels, 2 generators step 6") {
    HallBasis b = HallBasis::build(2, 6);
    // composite elements 3..23 in order
    check_labels(b,
                 {{2, 1},                                            // X3
                  {3, 1},  {3, 2},                                   // degree 3
                  {4, 1},  {4, 2},  {5, 2},                          // degree 4
                  {6, 1},  {6, 2},  {7, 2},  {8, 2},  {4, 3}, {5, 3},// degree 5
                  {9, 1},  {9, 2},  {10, 2}, {11, 2}, {12, 2},
                  {6, 3},  {7, 3},  {8, 3},  {5, 4}},                // degree 6
                 3);
    CHECK(b.element(1).is_generator());
    CHECK(b.element(2).is_generator());
}

TEST_CASE("bracket labels, 3 generators step 4") {
    HallBasis b = HallBasis::build(3, 4);
    check_labels(b,
                 {{2, 1},  {3, 1},  {3, 2},                                    // degree 2
                  {4, 1},  {4, 2},  {4, 3},  {5, 1},  {5, 2},  {5, 3},
                  {6, 2},  {6, 3},                                             // degree 3
                  {7, 1},  {7, 2},  {7, 3},  {8, 2},  {8, 3},  {9, 3},
                  {10, 1}, {10, 2}, {10, 3}, {11, 2}, {11, 3}, {12, 3},
                  {13, 2}, {13, 3}, {14, 3}, {5, 4},  {6, 4},  {6, 5}},        // degree 4
                 4);
}

TEST_CASE("ordering and admissibility invariants") {
    for (auto [r, s] : {std::pair{2, 6}, std::pair{3, 4}}) {
        HallBasis b = HallBasis::build(r, s);
        for (int i = 1; i < b.dimension(); ++i)
            CHECK(b.degree(i) <= b.degree(i + 1));  // degrees ascend
        for (int l = 1; l <= b.dimension(); ++l) {
            const HallElement& e = b.element(l);
            if (e.is_generator()) {
                CHECK(l <= r);
                CHECK(e.degree == 1);
                continue;
            }
            // admissibility: left > right, and for [left, right] with
            // left = [h, k], the constraint k <= right
            CHECK(e.left > e.right);
            CHECK(e.left < l);
            CHECK(e.right < l);
            CHECK(e.degree == b.degree(e.left) + b.degree(e.right));
            const HallElement& le = b.element(e.left);
            if (!le.is_generator()) CHECK(le.right <= e.right);
            // every admissible pair is reachable through bracket_index
            CHECK(b.bracket_index(e.left, e.right) == l);
        }
        // bracket_index is zero exactly on non-basis pairs
        int hits = 0;
        for (int i = 1; i <= b.dimension(); ++i)
            for (int j = 1; j <= b.dimension(); ++j)
                if (b.bracket_index(i, j) != 0) ++hits;
        CHECK(hits == b.dimension() - r);
    }
}

TEST_CASE("canonical chains") {
    HallBasis b = HallBasis::build(2, 6);
    for (int l = 1; l <= b.dimension(); ++l) {
        const HallElement& e = b.element(l);
        const MultiIndex& I = b.chain_multiplicity(l);
        if (e.is_generator()) {
            CHECK(e.chain_start == l);
            CHECK(e.chain.empty());
            CHECK(I.is_zero());
            continue;
        }
        // chain entries ascend and multiplicities count them
        CHECK_FALSE(e.chain.empty());
        for (std::size_t p = 0; p + 1 < e.chain.size(); ++p)
            CHECK(e.chain[p] <= e.chain[p + 1]);
        MultiIndex counted(static_cast<std::size_t>(b.dimension()));
        for (int c : e.chain) counted.bump(static_cast<std::size_t>(c), +1);
        CHECK(counted == I);
        // left-normed expansion: [chain_start, chain...] reproduces the label
        int acc = e.chain_start;
        for (int c : e.chain) acc = b.bracket_index(acc, c);
        CHECK(acc == l);
        // the leading generator of a composite is at least the second one:
        // chains starting at X1 would need [X1, X_j] with j < 1
        CHECK(e.chain_start >= 2);
        CHECK(e.chain_start <= b.rank());
    }

    // X6 = [X4, X1] = [[[X2, X1], X1], X1]: multiplicity (3, 0, ...)
    MultiIndex want(23);
    want.set(1, 3);
    CHECK(b.chain_multiplicity(6) == want);
    CHECK(b.element(6).chain_start == 2);
}

TEST_CASE("layer bookkeeping") {
    HallBasis b = HallBasis::build(3, 4);
    CHECK(b.layer_start(1) == 1);
    CHECK(b.layer_start(2) == 4);
    CHECK(b.layer_start(3) == 7);
    CHECK(b.layer_start(4) == 15);
    CHECK_THROWS(b.layer_start(5));
    for (int d = 1; d <= 4; ++d)
        for (int l = b.layer_start(d); l < b.layer_start(d) + b.layer_dims()[static_cast<std::size_t>(d - 1)]; ++l)
            CHECK(b.degree(l) == d);
}

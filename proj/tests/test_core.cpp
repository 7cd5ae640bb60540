#include "extremal/linalg.hpp"
#include "extremal/multi_index.hpp"
#include "extremal/polynomial.hpp"
#include "extremal/rational.hpp"
#include "extremal/univariate.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace extremal;

TEST_CASE("rational strings round-trip") {
    for (const char* s : {"0", "1", "-1", "3/4", "-22/7", "1000000000000000000000/3"}) {
        Rational q = parse_rational(s);
        CHECK(rational_to_string(q) == s);
    }
    CHECK(parse_rational("4/2") == 2);
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(rational_to_string(Rational(-2, 4)) == "-1/2");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("rational arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == 2);
    Rational big = Rational(1);
    for (int i = 1; i <= 30; ++i) big *= Rational(10);
    CHECK(big + 1 - big == 1);  // no precision loss at 10^30
}

TEST_CASE("multi-index ordering is graded") {
    MultiIndex a(4), b(4), c(4);
    a.set(1, 1);         // x1
    b.set(2, 1);         // x2
    c.set(1, 2);         // x1^2
    CHECK(((a < b) != (b < a)));
    CHECK((a < c || c < a));
    // grading: total degree 1 precedes total degree 2 in the canonical order
    CHECK(a.total_degree() == 1);
    CHECK(c.total_degree() == 2);
    std::map<MultiIndex, int> m;
    m[c] = 2;
    m[a] = 1;
    CHECK(m.begin()->second == 1);  // lower degree first
}

TEST_CASE("multi-index accessors") {
    MultiIndex a(6);
    a.set(2, 3);
    a.set(5, 1);
    CHECK(a[2] == 3);
    CHECK(a[5] == 1);
    CHECK(a[1] == 0);
    CHECK(a.total_degree() == 4);
    CHECK(a.leading_index() == 5);
    a.bump(5, -1);
    CHECK(a.leading_index() == 2);
    CHECK_FALSE(a.is_zero());
    CHECK(a.factorial_product() == 6);  // 3! * 0!...
    CHECK(a.weighted_degree({1, 2, 1, 1, 1, 1}) == 6);

    MultiIndex big(6), small(6);
    big.set(1, 2);
    big.set(3, 1);
    small.set(1, 1);
    CHECK(big.dominates(small));
    CHECK_FALSE(small.dominates(big));
    auto diff = big.minus(small);
    REQUIRE(diff.has_value());
    CHECK((*diff)[1] == 1);
    CHECK((*diff)[3] == 1);
    CHECK_FALSE(small.minus(big).has_value());
    CHECK_THROWS(a.bump(2, -7));
}

TEST_CASE("polynomial arithmetic") {
    std::size_t n = 3;
    Polynomial x1 = Polynomial::variable(n, 1);
    Polynomial x2 = Polynomial::variable(n, 2);
    Polynomial p = x1 * x1 - Rational(2) * x2 + Polynomial::constant(n, Rational(1, 2));
    CHECK(p.evaluate({Rational(3), Rational(1), Rational(0)}) == Rational(9) - 2 + Rational(1, 2));
    Polynomial q = p * p;
    MultiIndex e(n);
    e.set(1, 4);
    CHECK(q.coefficient(e) == 1);
    CHECK((p - p).is_zero());

    // partial derivatives and antiderivatives invert each other
    Polynomial dp = p.partial(1);
    CHECK(dp == Rational(2) * x1);
    Polynomial ap = dp.integral(1);
    CHECK(ap == x1 * x1);
}

TEST_CASE("univariate arithmetic, composition, and calculus") {
    UniPoly p({Rational(1), Rational(0), Rational(-3)});  // 1 - 3 t^2
    UniPoly q({Rational(0), Rational(1, 2)});             // t/2
    CHECK(p.evaluate(Rational(2)) == -11);
    CHECK(p.compose(q).evaluate(Rational(2)) == p.evaluate(Rational(1)));
    CHECK(p.derivative() == UniPoly({Rational(0), Rational(-6)}));
    CHECK(p.antiderivative().derivative() == p);
    CHECK(p.shift(Rational(1)).evaluate(Rational(0)) == p.evaluate(Rational(1)));
    CHECK(p.degree() == 2);
    CHECK((p - p).is_zero());
}

TEST_CASE("univariate division, gcd, and root counting") {
    // (t - 1/2)^2 (t + 2)
    UniPoly root({Rational(-1, 2), Rational(1)});
    UniPoly p = root * root * UniPoly({Rational(2), Rational(1)});
    auto [quo, rem] = uni_divmod(p, root);
    CHECK(rem.is_zero());
    CHECK(quo == root * UniPoly({Rational(2), Rational(1)}));
    CHECK(uni_rem(p, UniPoly({Rational(1), Rational(1)})).evaluate(Rational(0)) ==
          p.evaluate(Rational(-1)));

    UniPoly g = uni_gcd(p, root * UniPoly({Rational(7)}));
    CHECK(g.degree() == 1);
    CHECK(uni_rem(p, g).is_zero());

    CHECK(count_roots_closed(p, Rational(0), Rational(1)) == 1);   // t = 1/2
    CHECK(count_roots_closed(p, Rational(-3), Rational(1)) == 2);  // t = -2, 1/2
    CHECK(count_roots_closed(p, Rational(0, 1), Rational(1, 3)) == 0);
    // endpoint roots count
    CHECK(count_roots_closed(p, Rational(1, 2), Rational(1)) == 1);
}

TEST_CASE("exact rank, nullspace, and solve") {
    RatMat m = {
        {Rational(1), Rational(2), Rational(3)},
        {Rational(2), Rational(4), Rational(6)},
        {Rational(0), Rational(1), Rational(1)},
    };
    CHECK(matrix_rank(m, 3) == 2);
    std::vector<RatVec> null = nullspace_basis(m, 3);
    REQUIRE(null.size() == 1);
    for (const auto& row : m) {
        Rational dot(0);
        for (std::size_t i = 0; i < 3; ++i) dot += row[i] * null[0][i];
        CHECK(dot == 0);
    }

    RatVec target = {Rational(6), Rational(12), Rational(2)};
    auto sol = solve_linear(m, target, 3);
    REQUIRE(sol.has_value());
    for (std::size_t r = 0; r < m.size(); ++r) {
        Rational dot(0);
        for (std::size_t i = 0; i < 3; ++i) dot += m[r][i] * (*sol)[i];
        CHECK(dot == target[r]);
    }
    // inconsistent system: rows 1 and 2 are proportional but targets are not
    RatVec bad = {Rational(6), Rational(13), Rational(2)};
    CHECK_FALSE(solve_linear(m, bad, 3).has_value());

    CHECK(in_span(null, null[0]));
    RatVec outside = {Rational(1), Rational(0), Rational(0)};
    CHECK_FALSE(in_span(null, outside));
}

TEST_CASE("fuzzed linear algebra keeps rank-nullity exact") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        RatMat m(rows, RatVec(cols));
        for (auto& row : m)
            for (auto& x : row) x = Rational((long)(rng() % 7) - 3, (long)(rng() % 2) + 1);
        std::size_t rank = matrix_rank(m, cols);
        auto null = nullspace_basis(m, cols);
        CHECK(rank + null.size() == cols);
        for (const auto& v : null)
            for (const auto& row : m) {
                Rational dot(0);
                for (std::size_t i = 0; i < cols; ++i) dot += row[i] * v[i];
                CHECK(dot == 0);
            }
    }
}

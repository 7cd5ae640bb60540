#include "extremal/group_context.hpp"
#include "extremal/io.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace extremal;

namespace {

Rational sc_entry(const GroupContext& ctx, int i, int j, int k) {
    return sparse_entry(ctx.structure_constants(i, j), k);
}

// The expected generator component: at position l the field X_q carries
// (-1)^{|I(l)|} / I(l)!  x^{I(l)} exactly when the chain of l starts at q.
Polynomial expected_component(const GroupContext& ctx, int q, int l) {
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    const HallElement& e = ctx.basis().element(l);
    if (e.chain_start != q) return Polynomial::zero(n);
    const MultiIndex& I = ctx.basis().chain_multiplicity(l);
    Rational c(1, I.factorial_product());
    if (I.total_degree() % 2 == 1) c = -c;
    return Polynomial::monomial(I, c);
}

}  // namespace

TEST_CASE("generator fields carry the chain monomials") {
    for (auto [r, s] : {std::pair{2, 6}, std::pair{3, 4}}) {
        GroupContext ctx = GroupContext::build(r, s);
        int n = ctx.dimension();
        for (int q = 1; q <= r; ++q)
            for (int l = 1; l <= n; ++l)
                CHECK(ctx.field(q).component(static_cast<std::size_t>(l)) ==
                      expected_component(ctx, q, l));
        // the first generator is exactly the first coordinate direction
        CHECK(ctx.field(1).component(1) ==
              Polynomial::constant(static_cast<std::size_t>(n), Rational(1)));
        for (int l = 2; l <= n; ++l)
            CHECK(ctx.field(1).component(static_cast<std::size_t>(l)).is_zero());
    }
}

TEST_CASE("the frame is unit triangular and graded") {
    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, s);
        std::size_t n = static_cast<std::size_t>(ctx.dimension());
        std::vector<int> w = ctx.basis().degrees();
        for (int i = 1; i <= static_cast<int>(n); ++i) {
            const PolyVectorField& X = ctx.field(i);
            for (std::size_t l = 1; l <= n; ++l) {
                const Polynomial& p = X.component(l);
                if (static_cast<int>(l) < i) {
                    CHECK(p.is_zero());
                } else if (static_cast<int>(l) == i) {
                    CHECK(p == Polynomial::constant(n, Rational(1)));
                } else {
                    int d = ctx.basis().degree(static_cast<int>(l)) - ctx.basis().degree(i);
                    CHECK(p.is_weighted_homogeneous(w, static_cast<std::uint64_t>(d)));
                }
            }
        }
    }
}

TEST_CASE("bracket table of the step-3 group on two generators") {
    GroupContext ctx = GroupContext::build(2, 3);
    CHECK(sc_entry(ctx, 2, 1, 3) == 1);
    CHECK(sc_entry(ctx, 3, 1, 4) == 1);
    CHECK(sc_entry(ctx, 3, 2, 5) == 1);
    CHECK(ctx.structure_constants(2, 1).size() == 1);
    CHECK(ctx.structure_constants(1, 2) == SparseVec{{3, Rational(-1)}});
    CHECK(ctx.structure_constants(2, 3) == SparseVec{{5, Rational(-1)}});
    // brackets that would exceed the step vanish
    CHECK(ctx.structure_constants(4, 1).empty());
    CHECK(ctx.structure_constants(5, 2).empty());
    CHECK(ctx.structure_constants(1, 1).empty());
}

TEST_CASE("bracket tables satisfy the Lie algebra axioms") {
    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, s);
        int n = ctx.dimension();
        const HallBasis& b = ctx.basis();
        for (int i = 1; i <= n; ++i) {
            CHECK(ctx.structure_constants(i, i).empty());
            for (int j = 1; j < i; ++j) {
                const SparseVec& row = ctx.structure_constants(i, j);
                const SparseVec& opp = ctx.structure_constants(j, i);
                REQUIRE(row.size() == opp.size());
                for (const auto& [k, c] : row) {
                    CHECK(b.degree(k) == b.degree(i) + b.degree(j));
                    CHECK(sparse_entry(opp, k) == -c);
                }
                int l = b.bracket_index(i, j);
                if (l != 0) {
                    CHECK(row.size() == 1);
                    CHECK(sparse_entry(row, l) == 1);
                }
            }
        }
        int defects = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = j + 1; k <= n; ++k)
                    if (!jacobi_defect(ctx, i, j, k).empty()) ++defects;
        CHECK(defects == 0);
        CHECK_NOTHROW(validate_context_tables(ctx));
    }
}

TEST_CASE("field brackets expand through the tables") {
    {
        GroupContext ctx = GroupContext::build(2, 4);
        CommutatorFold fold(ctx);
        std::vector<int> ones(static_cast<std::size_t>(ctx.dimension()), 1);
        auto betas = enumerate_weighted_multi_indices(ones, 2);
        int cases = 0;
        for (int i = 1; i <= ctx.dimension(); ++i)
            for (int q = 1; q <= ctx.rank(); ++q)
                for (const auto& beta : betas) {
                    CHECK(check_commutator_expansion(ctx, i, q, beta, fold));
                    ++cases;
                }
        CHECK(cases == 2 * 45 * ctx.dimension());
        // a few cubic monomials
        for (auto exps : {std::vector<std::uint32_t>{3, 0, 0, 0, 0, 0, 0, 0},
                          std::vector<std::uint32_t>{1, 1, 1, 0, 0, 0, 0, 0},
                          std::vector<std::uint32_t>{0, 2, 0, 1, 0, 0, 0, 0}})
            for (int i = 1; i <= ctx.dimension(); ++i)
                CHECK(check_commutator_expansion(ctx, i, 2, MultiIndex(exps), fold));
    }
    {
        GroupContext ctx = GroupContext::build(3, 3);
        CommutatorFold fold(ctx);
        std::vector<int> ones(static_cast<std::size_t>(ctx.dimension()), 1);
        for (int i = 1; i <= ctx.dimension(); ++i)
            for (int q = 1; q <= ctx.rank(); ++q)
                for (const auto& beta : enumerate_weighted_multi_indices(ones, 1))
                    CHECK(check_commutator_expansion(ctx, i, q, beta, fold));
    }
    // only generators are admitted on the right slot
    GroupContext ctx = GroupContext::build(2, 3);
    CHECK_THROWS_AS(check_commutator_expansion(ctx, 1, 3, MultiIndex(5)),
                    std::invalid_argument);
}

TEST_CASE("generalized bracket table") {
    GroupContext small = GroupContext::build(2, 3);
    std::size_t n5 = 5;
    // the empty word acts as the identity
    for (int i = 1; i <= 5; ++i)
        CHECK(small.generalized_structure_constants(i, MultiIndex(n5)) ==
              SparseVec{{i, Rational(1)}});
    // single-letter words reduce to the first-order table
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j)
            CHECK(small.generalized_structure_constants(i, MultiIndex::unit(n5, static_cast<std::size_t>(j))) ==
                  small.structure_constants(i, j));
    // a two-letter word: bracketing twice with the second generator
    MultiIndex twice(n5);
    twice.set(2, 2);
    CHECK(small.generalized_structure_constants(1, twice) == SparseVec{{5, Rational(-1)}});
    // words that exceed the step have no cell
    MultiIndex deep(n5);
    deep.set(1, 3);
    CHECK(small.generalized_structure_constants(1, deep).empty());

    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, s);
        std::size_t n = static_cast<std::size_t>(ctx.dimension());
        for (int i = 1; i <= ctx.dimension(); ++i) {
            for (int j = 1; j <= ctx.dimension(); ++j)
                CHECK(ctx.generalized_structure_constants(i, MultiIndex::unit(n, static_cast<std::size_t>(j))) ==
                      ctx.structure_constants(i, j));
            // grading: a cell at word alpha lands in degree d(i) + weight(alpha)
            for (const auto& [alpha, row] : ctx.generalized_row(i)) {
                int wd = static_cast<int>(alpha.weighted_degree(ctx.basis().degrees()));
                CHECK(ctx.basis().degree(i) + wd <= ctx.step());
                for (const auto& [k, c] : row) {
                    CHECK(c != 0);
                    CHECK(ctx.basis().degree(k) == ctx.basis().degree(i) + wd);
                }
            }
        }
    }
}

TEST_CASE("coordinate flows") {
    GroupContext heis = GroupContext::build(2, 2);
    auto flow = symbolic_flow(heis, 2); // second generator
    // in (x1, x2, x3, t): x1 stays, x2 advances by t, x3 integrates -x1
    Polynomial x1 = Polynomial::variable(4, 1), x2 = Polynomial::variable(4, 2),
               x3 = Polynomial::variable(4, 3), t = Polynomial::variable(4, 4);
    REQUIRE(flow.size() == 3);
    CHECK(flow[0] == x1);
    CHECK(flow[1] == x2 + t);
    CHECK(flow[2] == x3 - x1 * t);

    auto flow1 = symbolic_flow(heis, 1);
    CHECK(flow1[0] == x1 + t);
    CHECK(flow1[1] == x2);
    CHECK(flow1[2] == x3);

    CHECK(check_exponential_coordinates(heis));
    CHECK(check_exponential_coordinates(GroupContext::build(2, 4)));
    CHECK(check_exponential_coordinates(GroupContext::build(3, 3)));
}

TEST_CASE("weighted word enumeration") {
    auto all = enumerate_weighted_multi_indices({1, 1}, 3);
    CHECK(all.size() == 10);
    CHECK(all.front().is_zero());
    for (const auto& a : all) CHECK(a.total_degree() <= 3);

    auto mixed = enumerate_weighted_multi_indices({1, 2}, 4);
    CHECK(mixed.size() == 9);
    for (const auto& a : mixed) CHECK(a.weighted_degree({1, 2}) <= 4);

    CHECK(enumerate_weighted_multi_indices({2, 3}, 1).size() == 1);
}

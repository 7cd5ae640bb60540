#include "extremal/extremal_polynomial.hpp"
#include "extremal/scenarios.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace extremal;

namespace {

std::vector<Rational> unit_covector(std::size_t n, std::size_t k) {
    std::vector<Rational> v(n, Rational(0));
    v[k - 1] = 1;
    return v;
}

}  // namespace

TEST_CASE("table anatomy") {
    GroupContext ctx = GroupContext::build(2, 3);
    auto family = build_extremal_family(ctx);
    std::size_t n = 5;

    // the constant term of P_i^v is v_i, so the polynomial at the origin
    // reads off the covector coordinate
    std::vector<Rational> origin(n, Rational(0));
    for (int i = 1; i <= 5; ++i)
        for (int k = 1; k <= 5; ++k) {
            auto v = unit_covector(n, static_cast<std::size_t>(k));
            CHECK(specialize_covector(family[static_cast<std::size_t>(i - 1)], v).evaluate(origin) ==
                  (i == k ? Rational(1) : Rational(0)));
        }

    // top-layer polynomials are the bare covector coordinates
    for (int i = ctx.basis().layer_start(3); i <= 5; ++i) {
        CHECK(family[static_cast<std::size_t>(i - 1)].cells.size() == 1);
        CHECK(covector_slice(family[static_cast<std::size_t>(i - 1)], i) ==
              Polynomial::constant(n, Rational(1)));
    }

    // concrete quadratic family member: P_1 with the top coordinate set
    CHECK(specialize_covector(family[0], unit_covector(n, 5)) ==
          Rational(-1, 2) * Polynomial::variable(n, 2) * Polynomial::variable(n, 2));
    Polynomial x1 = Polynomial::variable(n, 1), x2 = Polynomial::variable(n, 2),
               x3 = Polynomial::variable(n, 3);
    CHECK(specialize_covector(family[1], unit_covector(n, 5)) == x1 * x2 + x3);

    CHECK_THROWS_AS(extremal_polynomial(ctx, 0), std::out_of_range);
    CHECK_THROWS_AS(extremal_polynomial(ctx, 6), std::out_of_range);
    std::vector<Rational> short_v(4, Rational(0));
    CHECK_THROWS_AS(specialize_covector(family[0], short_v), std::invalid_argument);
}

TEST_CASE("covector slices assemble the specialization") {
    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, s);
        auto family = build_extremal_family(ctx);
        std::size_t n = static_cast<std::size_t>(ctx.dimension());
        std::vector<int> w = ctx.basis().degrees();
        for (int i = 1; i <= ctx.dimension(); ++i) {
            const ExtremalTable& t = family[static_cast<std::size_t>(i - 1)];
            for (int k = 1; k <= ctx.dimension(); ++k) {
                Polynomial slice = covector_slice(t, k);
                CHECK(slice == specialize_covector(t, unit_covector(n, static_cast<std::size_t>(k))));
                // each slice is weighted homogeneous of the degree gap
                int gap = ctx.basis().degree(k) - ctx.basis().degree(i);
                if (gap < 0) {
                    CHECK(slice.is_zero());
                } else {
                    CHECK(slice.is_weighted_homogeneous(w, static_cast<std::uint64_t>(gap)));
                }
            }
            // linearity in v on a dense covector
            std::vector<Rational> v;
            for (int k = 1; k <= ctx.dimension(); ++k) v.emplace_back(k % 5 - 2);
            Polynomial direct = specialize_covector(t, v);
            Polynomial sum(n);
            for (int k = 1; k <= ctx.dimension(); ++k)
                sum += v[static_cast<std::size_t>(k - 1)] * covector_slice(t, k);
            CHECK(direct == sum);
        }
    }
}

TEST_CASE("derivative identity across all covectors") {
    // both sides are linear in v, so the unit covectors settle every v
    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        GroupContext ctx = GroupContext::build(r, s);
        auto family = build_extremal_family(ctx);
        std::size_t n = static_cast<std::size_t>(ctx.dimension());
        int failures = 0;
        for (int i = 1; i <= ctx.dimension(); ++i)
            for (int j = 1; j <= ctx.dimension(); ++j)
                for (int k = 1; k <= ctx.dimension(); ++k)
                    if (!check_derivative_identity(ctx, family, i, j,
                                                   unit_covector(n, static_cast<std::size_t>(k))))
                        ++failures;
        CHECK(failures == 0);
    }
}

TEST_CASE("vanishing reports") {
    GroupContext ctx = GroupContext::build(2, 3);
    auto family = build_extremal_family(ctx);
    std::size_t n = 5;

    // a covector supported on the first layer only: P_2 dies, and so does
    // the whole second layer (consistently, since v has no higher support)
    auto rep = nontriviality_report(ctx, family, unit_covector(n, 1));
    CHECK(rep.vanishing_first_layer == std::vector<int>{2});
    CHECK_FALSE(rep.all_first_layer_zero);
    CHECK(rep.second_layer_all_zero);

    rep = nontriviality_report(ctx, family, unit_covector(n, 5));
    CHECK(rep.vanishing_first_layer.empty());
    CHECK_FALSE(rep.second_layer_all_zero);

    // the zero covector vanishes everywhere, and that is consistent
    std::vector<Rational> zero(n, Rational(0));
    rep = nontriviality_report(ctx, family, zero);
    CHECK(rep.all_first_layer_zero);
    CHECK(rep.second_layer_all_zero);

    // second layer equals the top layer for the step-2 group: a covector
    // supported there keeps P_3 alive
    GroupContext heis = GroupContext::build(2, 2);
    auto hf = build_extremal_family(heis);
    rep = nontriviality_report(heis, hf, unit_covector(3, 3));
    CHECK_FALSE(rep.second_layer_all_zero);
    CHECK(rep.vanishing_first_layer.empty());
}

TEST_CASE("variety generators") {
    GroupContext ctx = GroupContext::build(2, 3);
    auto family = build_extremal_family(ctx);
    std::vector<Rational> v = {Rational(0), Rational(0), Rational(1), Rational(0), Rational(2)};

    auto ab = abnormal_variety_generators(ctx, family, v);
    REQUIRE(ab.size() == 2);
    for (int i = 1; i <= 2; ++i)
        CHECK(ab[static_cast<std::size_t>(i - 1)] ==
              specialize_covector(family[static_cast<std::size_t>(i - 1)], v));

    auto goh = goh_variety_generators(ctx, family, v);
    REQUIRE(goh.size() == 3);  // two generators plus one second-layer element
    for (int i = 1; i <= 3; ++i)
        CHECK(goh[static_cast<std::size_t>(i - 1)] ==
              specialize_covector(family[static_cast<std::size_t>(i - 1)], v));

    GroupContext g34 = GroupContext::build(3, 4);
    auto f34 = build_extremal_family(g34);
    std::vector<Rational> v34(32, Rational(0));
    v34[6] = 1;
    CHECK(abnormal_variety_generators(g34, f34, v34).size() == 3);
    CHECK(goh_variety_generators(g34, f34, v34).size() == 6);
}

TEST_CASE("second layer spans the generator derivatives") {
    GroupContext ctx = GroupContext::build(2, 3);
    auto family = build_extremal_family(ctx);
    std::vector<Rational> v(5, Rational(0));
    v[2] = 1;
    v[3] = 1;
    v[4] = 1;
    CHECK(check_second_layer_span(ctx, family, v));
    CHECK(check_second_layer_span(ctx, family, unit_covector(5, 5)));
    v[0] = 1;  // now v touches the first layer: rejected
    CHECK_THROWS_AS(check_second_layer_span(ctx, family, v), std::invalid_argument);

    GroupContext g33 = GroupContext::build(3, 3);
    auto f33 = build_extremal_family(g33);
    std::vector<Rational> w(14, Rational(0));
    w[5] = 1;
    w[13] = 1;
    CHECK(check_second_layer_span(g33, f33, w));
}

TEST_CASE("golden scenarios for the polynomial families") {
    for (const char* name : {"r2s6-p3", "r3s4-quadrics", "gk-poly"}) {
        ScenarioReport rep = run_scenario(name);
        std::string log;
        for (const auto& line : rep.lines) log += line + "\n";
        INFO(log);
        CHECK(rep.pass);
    }
}

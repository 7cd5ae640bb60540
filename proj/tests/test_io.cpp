#include "extremal/io.hpp"
#include "extremal/scenarios.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>

using namespace extremal;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("extremal-lab-iotest-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path fixture_dir() {
    if (const char* env = std::getenv("EXTREMAL_LAB_FIXTURES")) return env;
    return std::filesystem::path("fixtures");
}

ControlLaw ramp_law() {
    return ControlLaw::single({UniPoly({Rational(1)}), UniPoly({Rational(0), Rational(1)})});
}

}  // namespace

TEST_CASE("scalar and vector round trips") {
    for (const Rational& q : {Rational(0), Rational(-7, 3), Rational(22, 7),
                              Rational("123456789012345678901234567890") / Rational(997)}) {
        Json j;
        rational_to_json(q, j);
        CHECK(rational_from_json(j) == q);
    }
    RatVec v = {Rational(1, 2), Rational(-3), Rational(0)};
    CHECK(ratvec_from_json(ratvec_to_json(v)) == v);

    CHECK(parse_rational_list("1, -2/3, 4") == RatVec{Rational(1), Rational(-2, 3), Rational(4)});
    CHECK(parse_rational_list("1 -2/3 4") == RatVec{Rational(1), Rational(-2, 3), Rational(4)});
    CHECK(parse_rational_list("1, 2 3, 4") == RatVec{Rational(1), Rational(2), Rational(3), Rational(4)});
    CHECK(parse_rational_list("").empty());
    CHECK(parse_rational_list(" , ").empty());
}

TEST_CASE("polynomial round trips") {
    Polynomial p(3);
    p += Rational(1, 2) * Polynomial::variable(3, 1) * Polynomial::variable(3, 2);
    p += Polynomial::constant(3, Rational(-4));
    p += Rational(7, 3) * Polynomial::variable(3, 3);
    CHECK(polynomial_from_json(polynomial_to_json(p), 3) == p);
    CHECK(polynomial_from_json(polynomial_to_json(Polynomial::zero(3)), 3) == Polynomial::zero(3));

    UniPoly u({Rational(0), Rational(-1, 6), Rational(2)});
    CHECK(unipoly_from_json(unipoly_to_json(u)) == u);
    CHECK(unipoly_from_json(unipoly_to_json(UniPoly())) == UniPoly());
}

TEST_CASE("law and path round trips") {
    ControlLaw law(2, {ControlPiece{Rational(0), Rational(1, 2),
                                    {UniPoly({Rational(1)}), UniPoly({Rational(0), Rational(1)})}},
                       ControlPiece{Rational(1, 2), Rational(1),
                                    {UniPoly({Rational(2), Rational(-1)}), UniPoly({Rational(1, 2)})}}});
    Json j = control_law_to_json(law);
    ControlLaw back = control_law_from_json(j);
    CHECK(back.rank() == 2);
    REQUIRE(back.pieces().size() == 2);
    for (std::size_t p = 0; p < 2; ++p) {
        CHECK(back.pieces()[p].t0 == law.pieces()[p].t0);
        CHECK(back.pieces()[p].t1 == law.pieces()[p].t1);
        CHECK(back.pieces()[p].h == law.pieces()[p].h);
    }

    GroupContext ctx = GroupContext::build(2, 3);
    PiecewisePath path = develop(ctx, law).path;
    CHECK(piecewise_path_from_json(piecewise_path_to_json(path)) == path);
}

TEST_CASE("table, quotient presentation, and classification round trips") {
    GroupContext ctx = GroupContext::build(2, 4);
    ExtremalFamily family = build_extremal_family(ctx);
    for (int i : {1, 2, 4, 8}) {
        const ExtremalTable& t = family[static_cast<std::size_t>(i - 1)];
        ExtremalTable back = extremal_table_from_json(extremal_table_to_json(t), t.dim);
        CHECK(back.i == t.i);
        CHECK(back.cells == t.cells);
    }

    QuotientSpec spec;
    spec.rank = 2;
    spec.step = 3;
    spec.selected = {1, 2, 3};
    spec.zeta = RatMat(5, RatVec(3, Rational(0)));
    for (int i = 0; i < 3; ++i) spec.zeta[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    QuotientSpec back = quotient_spec_from_json(quotient_spec_to_json(spec));
    CHECK(back.rank == spec.rank);
    CHECK(back.step == spec.step);
    CHECK(back.selected == spec.selected);
    CHECK(back.zeta == spec.zeta);

    Classification cls = classify(ctx, family,
                                  develop(ctx, ControlLaw::single({UniPoly({Rational(0), Rational(2)}),
                                                                   UniPoly({Rational(1)})})));
    Classification cback = classification_from_json(classification_to_json(cls));
    CHECK(cback.corank == cls.corank);
    CHECK(cback.abnormal_basis == cls.abnormal_basis);
    CHECK(cback.goh_basis == cls.goh_basis);
    CHECK(cback.strict == cls.strict);

    Json badstrict = classification_to_json(cls);
    badstrict["strict"] = "maybe";
    CHECK_THROWS_AS(classification_from_json(badstrict), std::runtime_error);
}

TEST_CASE("basis description") {
    Json j = basis_to_json(HallBasis::build(2, 3));
    CHECK(j.at("rank") == 2);
    CHECK(j.at("step") == 3);
    CHECK(j.at("dimension") == 5);
    CHECK(j.at("layers") == Json::array({2, 1, 2}));
    const Json& elems = j.at("elements");
    REQUIRE(elems.size() == 5);
    CHECK(elems[2].at("children") == Json::array({2, 1}));
    CHECK(elems[4].at("degree") == 3);
}

TEST_CASE("constants cache life cycle") {
    auto dir = fresh_dir("cache");
    auto file = cache_file_path(dir, 2, 3);
    CHECK(file.filename() == "constants_r2_s3.json");
    CHECK_FALSE(std::filesystem::exists(file));

    // miss: builds and saves
    GroupContext built = load_or_build_context(2, 3, dir);
    CHECK(std::filesystem::exists(file));
    CHECK(built.dimension() == 5);

    // hit: loads, revalidates, and matches the rebuilt tables
    GroupContext loaded = load_or_build_context(2, 3, dir);
    GroupContext rebuilt = GroupContext::build(2, 3);
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j)
            CHECK(loaded.structure_constants(i, j) == rebuilt.structure_constants(i, j));
    for (int i = 1; i <= 5; ++i) CHECK(loaded.generalized_row(i) == rebuilt.generalized_row(i));

    // header guards
    {
        Json j = load_json_file(file);
        j["format"] = 999;
        save_json_file(j, file);
        CHECK_THROWS_WITH(load_or_build_context(2, 3, dir),
                          Catch::Matchers::ContainsSubstring("constants cache"));
    }
    {
        Json j = context_to_json(rebuilt);
        j["ordering"] = "other-order";
        save_json_file(j, file);
        CHECK_THROWS_WITH(load_or_build_context(2, 3, dir),
                          Catch::Matchers::ContainsSubstring("constants cache"));
    }

    // corrupted table entries are rejected by revalidation
    {
        Json j = context_to_json(rebuilt);
        j["structure"][0]["num"] = "7";
        save_json_file(j, file);
        CHECK_THROWS_WITH(load_or_build_context(2, 3, dir),
                          Catch::Matchers::ContainsSubstring("constants cache"));
    }
    {
        Json j = context_to_json(rebuilt);
        for (auto& e : j["generalized"])
            if (e["num"] == "1" && e["alpha"].is_array()) {
                e["num"] = "5";
                break;
            }
        save_json_file(j, file);
        CHECK_THROWS_WITH(load_or_build_context(2, 3, dir),
                          Catch::Matchers::ContainsSubstring("constants cache"));
    }

    // garbage on disk
    {
        std::ofstream out(file);
        out << "not json at all";
    }
    CHECK_THROWS_AS(load_or_build_context(2, 3, dir), std::runtime_error);

    // a valid cache for the wrong group
    save_json_file(context_to_json(rebuilt), cache_file_path(dir, 2, 4));
    CHECK_THROWS_WITH(load_or_build_context(2, 4, dir),
                      Catch::Matchers::ContainsSubstring("constants cache"));

    std::filesystem::remove_all(dir);
}

TEST_CASE("cache directory resolution") {
    auto dir = fresh_dir("envdir");
    ::setenv("EXTREMAL_LAB_CACHE", dir.c_str(), 1);
    CHECK(default_cache_dir() == dir);
    ::unsetenv("EXTREMAL_LAB_CACHE");
    // without the override the directory comes from XDG or HOME; both give
    // a path ending in the tool's name
    CHECK(default_cache_dir().filename() == "extremal-lab");
    std::filesystem::remove_all(dir);
}

TEST_CASE("golden fixtures match the embedded tables") {
    struct Row {
        const char* file;
        int rank, step, index;
        golden::CellList cells;
    };
    const std::vector<Row> rows = {
        {"golden_r2s6_p3.json", 2, 6, 3, golden::r2s6_p3()},
        {"golden_r3s4_p4.json", 3, 4, 4, golden::r3s4_p4()},
        {"golden_r3s4_p5.json", 3, 4, 5, golden::r3s4_p5()},
        {"golden_r3s4_p6.json", 3, 4, 6, golden::r3s4_p6()},
    };
    for (const auto& row : rows) {
        auto path = fixture_dir() / row.file;
        INFO(path.string());
        REQUIRE(std::filesystem::exists(path));
        Json j = load_json_file(path);
        std::size_t dim = static_cast<std::size_t>(HallBasis::build(row.rank, row.step).dimension());
        ExtremalTable t = extremal_table_from_json(j, dim);
        CHECK(t.i == row.index);
        CHECK(golden::as_map(t) == golden::as_map(row.cells, dim));
    }
}

TEST_CASE("law and quotient fixtures") {
    GroupContext ctx = GroupContext::build(2, 3);

    Json law_doc = load_json_file(fixture_dir() / "law_gk.json");
    ControlLaw gk = control_law_from_json(law_doc);
    CHECK(gk.rank() == 2);
    CHECK(develop(ctx, gk).path.end_value() ==
          RatVec{Rational(1), Rational(1, 2), Rational(-1, 3), Rational(1, 8), Rational(1, 10)});

    ControlLaw split = control_law_from_json(load_json_file(fixture_dir() / "law_gk_split.json"));
    REQUIRE(split.pieces().size() == 2);
    DevelopedCurve a = develop(ctx, gk), b = develop(ctx, split);
    for (Rational t : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
        CHECK(a.path.evaluate(t) == b.path.evaluate(t));

    ControlLaw corner = control_law_from_json(load_json_file(fixture_dir() / "law_corner_phi_t3.json"));
    CHECK(corner.rank() == 3);
    CHECK(corner.evaluate(Rational(1, 2)) == RatVec{Rational(1), Rational(1), Rational(3, 4)});

    // quotient presentations reconstruct and validate
    for (const char* name : {"quotient_heisenberg.json", "quotient_kill_top.json",
                             "quotient_identify.json"}) {
        QuotientSpec spec = quotient_spec_from_json(load_json_file(fixture_dir() / name));
        GroupContext free_ctx = GroupContext::build(spec.rank, spec.step);
        CHECK_NOTHROW(build_quotient(free_ctx, spec.selected, spec.zeta));
    }
    {
        QuotientSpec spec =
            quotient_spec_from_json(load_json_file(fixture_dir() / "quotient_identify_broken.json"));
        GroupContext free_ctx = GroupContext::build(spec.rank, spec.step);
        CHECK_THROWS_WITH(build_quotient(free_ctx, spec.selected, spec.zeta),
                          Catch::Matchers::ContainsSubstring("(1, 5)"));
    }

    // the step-2 quotient fixture behaves like the step-2 group
    QuotientSpec spec = quotient_spec_from_json(load_json_file(fixture_dir() / "quotient_heisenberg.json"));
    QuotientGroup q = build_quotient(ctx, spec.selected, spec.zeta);
    ExtremalFamily family = build_extremal_family(ctx);
    CHECK(quotient_dual_check(q, family, ramp_law(), {Rational(1), Rational(2), Rational(3)}));
}

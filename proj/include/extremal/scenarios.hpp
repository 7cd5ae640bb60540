#pragma once

// End-to-end reference scenarios with embedded expected data. Each runner
// builds the group it needs, computes the advertised objects, and diffs them
// against the expected rational coefficients; the first mismatching
// coefficient is reported verbatim.

#include "extremal/curves.hpp"
#include "extremal/extremal_polynomial.hpp"
#include "extremal/group_context.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace extremal {

struct ScenarioReport {
    std::string name;
    bool pass = true;
    std::vector<std::string> lines;

    void note(const std::string& s) { lines.push_back(s); }
    void check(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        pass = pass && ok;
    }
};

namespace golden {

// One expected coefficient of a dual-coordinate table: the monomial exponent
// alpha (sparse (variable, exponent) pairs), the covector slot k, and the
// rational value.
struct Cell {
    std::vector<std::pair<int, int>> alpha;
    int k;
    long num;
    long den;
};

using CellList = std::vector<Cell>;

// Rank 2, step 6, dual coordinate 3 (dimension 23). 27 coefficients.
inline const CellList& r2s6_p3() {
    static const CellList cells = {
        {{}, 3, 1, 1},
        {{{8, 1}}, 22, 1, 1},
        {{{7, 1}}, 21, 1, 1},
        {{{6, 1}}, 20, 1, 1},
        {{{5, 1}}, 14, 1, 1},
        {{{4, 1}}, 13, 1, 1},
        {{{2, 1}}, 5, -1, 1},
        {{{1, 1}}, 4, -1, 1},
        {{{2, 1}, {4, 1}}, 23, 1, 1},
        {{{2, 1}, {3, 1}}, 14, 1, 1},
        {{{2, 2}}, 8, 1, 2},
        {{{1, 1}, {5, 1}}, 23, -1, 1},
        {{{1, 1}, {3, 1}}, 13, 1, 1},
        {{{1, 1}, {2, 1}}, 7, 1, 1},
        {{{1, 2}}, 6, 1, 2},
        {{{2, 2}, {3, 1}}, 22, -1, 2},
        {{{2, 3}}, 12, -1, 6},
        {{{1, 1}, {2, 1}, {3, 1}}, 21, -1, 1},
        {{{1, 1}, {2, 2}}, 11, -1, 2},
        {{{1, 2}, {3, 1}}, 20, -1, 2},
        {{{1, 2}, {2, 1}}, 10, -1, 2},
        {{{1, 3}}, 9, -1, 6},
        {{{2, 4}}, 19, 1, 24},
        {{{1, 1}, {2, 3}}, 18, 1, 6},
        {{{1, 2}, {2, 2}}, 17, 1, 4},
        {{{1, 3}, {2, 1}}, 16, 1, 6},
        {{{1, 4}}, 15, 1, 24},
    };
    return cells;
}

// Rank 3, step 4, dual coordinates 4, 5, 6 (dimension 32).
inline const CellList& r3s4_p4() {
    static const CellList cells = {
        {{}, 4, 1, 1},
        {{{6, 1}}, 31, 1, 1},
        {{{5, 1}}, 30, 1, 1},
        {{{3, 1}}, 9, -1, 1},
        {{{2, 1}}, 8, -1, 1},
        {{{1, 1}}, 7, -1, 1},
        {{{3, 2}}, 20, 1, 2},
        {{{2, 1}, {3, 1}}, 19, 1, 1},
        {{{2, 2}}, 18, 1, 2},
        {{{1, 1}, {3, 1}}, 17, 1, 1},
        {{{1, 1}, {2, 1}}, 16, 1, 1},
        {{{1, 2}}, 15, 1, 2},
    };
    return cells;
}

inline const CellList& r3s4_p5() {
    static const CellList cells = {
        {{}, 5, 1, 1},
        {{{6, 1}}, 32, 1, 1},
        {{{4, 1}}, 30, -1, 1},
        {{{3, 1}}, 12, -1, 1},
        {{{2, 1}}, 11, -1, 1},
        {{{1, 1}}, 10, -1, 1},
        {{{3, 2}}, 26, 1, 2},
        {{{2, 1}, {3, 1}}, 25, 1, 1},
        {{{2, 2}}, 24, 1, 2},
        {{{1, 1}, {3, 1}}, 23, 1, 1},
        {{{1, 1}, {2, 1}}, 22, 1, 1},
        {{{1, 2}}, 21, 1, 2},
    };
    return cells;
}

inline const CellList& r3s4_p6() {
    static const CellList cells = {
        {{}, 6, 1, 1},
        {{{5, 1}}, 32, -1, 1},
        {{{4, 1}}, 31, -1, 1},
        {{{3, 1}}, 14, -1, 1},
        {{{2, 1}}, 13, -1, 1},
        {{{1, 1}}, 9, 1, 1},
        {{{1, 1}}, 11, -1, 1},
        {{{3, 2}}, 29, 1, 2},
        {{{2, 1}, {3, 1}}, 28, 1, 1},
        {{{2, 2}}, 27, 1, 2},
        {{{1, 1}, {3, 1}}, 20, -1, 1},
        {{{1, 1}, {3, 1}}, 25, 1, 1},
        {{{1, 1}, {2, 1}}, 19, -1, 1},
        {{{1, 1}, {2, 1}}, 24, 1, 1},
        {{{1, 1}, {2, 1}}, 31, 1, 1},
        {{{1, 2}}, 17, -1, 2},
        {{{1, 2}}, 22, 1, 2},
        {{{1, 2}}, 30, 1, 1},
    };
    return cells;
}

inline std::map<MultiIndex, std::map<int, Rational>> as_map(const CellList& cells,
                                                            std::size_t dim) {
    std::map<MultiIndex, std::map<int, Rational>> out;
    for (const auto& c : cells) {
        MultiIndex a(dim);
        for (auto [pos, e] : c.alpha) a.set(static_cast<std::size_t>(pos), static_cast<std::uint32_t>(e));
        out[a][c.k] = Rational(c.num, c.den);
    }
    return out;
}

inline std::map<MultiIndex, std::map<int, Rational>> as_map(const ExtremalTable& t) {
    std::map<MultiIndex, std::map<int, Rational>> out;
    for (const auto& [a, row] : t.cells)
        for (const auto& [k, c] : row)
            if (c != 0) out[a][k] = c;
    return out;
}

inline std::string monomial_str(const MultiIndex& a) {
    if (a.is_zero()) return "1";
    std::ostringstream os;
    for (std::size_t i = 1; i <= a.dimension(); ++i)
        if (a[i] != 0) {
            os << "x" << i;
            if (a[i] > 1) os << "^" << a[i];
        }
    return os.str();
}

// Diffs an engine table against the expected cell list; reports the first
// mismatching coefficient into `report` on failure.
inline bool diff_table(const ExtremalTable& got, const CellList& want, const std::string& label,
                       ScenarioReport& report) {
    auto gm = as_map(got);
    auto wm = as_map(want, got.dim);
    for (const auto& [a, row] : wm)
        for (const auto& [k, c] : row) {
            Rational g(0);
            auto it = gm.find(a);
            if (it != gm.end()) {
                auto jt = it->second.find(k);
                if (jt != it->second.end()) g = jt->second;
            }
            if (g != c) {
                report.check(false, label + ": coefficient of " + monomial_str(a) + " v" +
                                         std::to_string(k) + ": expected " + rational_to_string(c) +
                                         ", got " + rational_to_string(g));
                return false;
            }
        }
    for (const auto& [a, row] : gm)
        for (const auto& [k, c] : row)
            if (wm.find(a) == wm.end() || wm.at(a).find(k) == wm.at(a).end()) {
                report.check(false, label + ": unexpected coefficient " + rational_to_string(c) +
                                         " of " + monomial_str(a) + " v" + std::to_string(k));
                return false;
            }
    report.check(true, label + ": all " + std::to_string(want.size()) + " coefficients match");
    return true;
}

}  // namespace golden

// P_3 in the free group of rank 2, step 6, specialized at v = e_5 + e_6:
// must equal x_1^2/2 - x_2.
inline ScenarioReport scenario_gk_poly() {
    ScenarioReport rep;
    rep.name = "gk-poly";
    GroupContext ctx = GroupContext::build(2, 6);
    ExtremalTable t = extremal_polynomial(ctx, 3);
    RatVec v(static_cast<std::size_t>(ctx.dimension()), Rational(0));
    v[4] = 1;  // v_5
    v[5] = 1;  // v_6
    Polynomial p = specialize_covector(t, v);
    Polynomial want(static_cast<std::size_t>(ctx.dimension()));
    MultiIndex sq(static_cast<std::size_t>(ctx.dimension()));
    sq.set(1, 2);
    want.add_term(sq, Rational(1, 2));
    MultiIndex x2(static_cast<std::size_t>(ctx.dimension()));
    x2.set(2, 1);
    want.add_term(x2, Rational(-1));
    rep.check(p == want, "P_3^{e_5+e_6} = 1/2 x1^2 - x2");
    return rep;
}

// Full dual-coordinate table P_3 in rank 2, step 6.
inline ScenarioReport scenario_r2s6_p3() {
    ScenarioReport rep;
    rep.name = "r2s6-p3";
    GroupContext ctx = GroupContext::build(2, 6);
    rep.check(ctx.dimension() == 23, "dimension of the rank-2 step-6 group is 23");
    ExtremalTable t = extremal_polynomial(ctx, 3);
    golden::diff_table(t, golden::r2s6_p3(), "P_3", rep);
    return rep;
}

// The three second-layer tables P_4, P_5, P_6 in rank 3, step 4.
inline ScenarioReport scenario_r3s4_quadrics() {
    ScenarioReport rep;
    rep.name = "r3s4-quadrics";
    GroupContext ctx = GroupContext::build(3, 4);
    rep.check(ctx.dimension() == 32, "dimension of the rank-3 step-4 group is 32");
    golden::diff_table(extremal_polynomial(ctx, 4), golden::r3s4_p4(), "P_4", rep);
    golden::diff_table(extremal_polynomial(ctx, 5), golden::r3s4_p5(), "P_5", rep);
    golden::diff_table(extremal_polynomial(ctx, 6), golden::r3s4_p6(), "P_6", rep);
    return rep;
}

// The strictly abnormal curve of the rank-2 step-6 group: controls
// h = (1, t), covector v = e_5 + e_6. Classification must find exactly this
// covector (corank 1), certify the Goh condition, flag the curve as a
// strictly-abnormal candidate under both sign conventions, and see a
// third-layer dual that never vanishes (lambda_5 = 1).
inline ScenarioReport scenario_gk_strict() {
    ScenarioReport rep;
    rep.name = "gk-strict";
    GroupContext ctx = GroupContext::build(2, 6);
    auto family = build_extremal_family(ctx);
    ControlLaw law = ControlLaw::single({UniPoly({Rational(1)}), UniPoly({Rational(0), Rational(1)})});
    DevelopedCurve curve = develop(ctx, law);

    RatVec v(static_cast<std::size_t>(ctx.dimension()), Rational(0));
    v[4] = 1;
    v[5] = 1;

    RatMat ab = find_abnormal_covectors(ctx, family, curve);
    rep.check(ab.size() == 12, "abnormal covector space has dimension 12");
    rep.check(!ab.empty() && in_span(ab, v), "e_5 + e_6 is an abnormal covector");
    RatMat goh = find_goh_covectors(ctx, family, curve);
    rep.check(goh.size() == 12 && in_span(goh, v), "e_5 + e_6 satisfies the Goh condition");

    rep.check(!normal_certificate_exists(ctx, family, curve, +1),
              "no normal certificate with sign +1");
    rep.check(!normal_certificate_exists(ctx, family, curve, -1),
              "no normal certificate with sign -1");
    rep.check(strictness_check(ctx, family, curve) == Strictness::StrictlyAbnormalCandidate,
              "classified as a strictly-abnormal candidate");

    DualCurve dual = dual_from_covector(family, curve, v);
    ThirdLayerReport third = regular_abnormal_indicator(ctx, family, curve, v);
    rep.check(!third.has_common_zero && !third.identically_zero,
              "third-layer duals have no common zero");
    bool lambda5_is_one = true;
    for (const auto& piece : dual.pieces())
        lambda5_is_one = lambda5_is_one && piece.x[4] == UniPoly({Rational(1)});
    rep.check(lambda5_is_one, "lambda_5 = 1 along the curve");
    rep.check(verify_master_identity(ctx, family, curve, v), "dual curve solves the adjoint system");
    return rep;
}

// The corner-type curve of the rank-3 step-4 group: v = e_7 + 2 e_18 gives
// P_4^v = x_2^2 - x_1 and P_5^v = P_6^v = 0; the curves (t^2, t, phi) driven
// by h = (2t, 1, phi') are certified Goh for three choices of phi.
inline ScenarioReport scenario_corner_goh() {
    ScenarioReport rep;
    rep.name = "corner-goh";
    GroupContext ctx = GroupContext::build(3, 4);
    auto family = build_extremal_family(ctx);

    RatVec v(static_cast<std::size_t>(ctx.dimension()), Rational(0));
    v[6] = 1;   // v_7
    v[17] = 2;  // v_18

    Polynomial p4 = specialize_covector(family[3], v);
    Polynomial want(static_cast<std::size_t>(ctx.dimension()));
    MultiIndex x2sq(static_cast<std::size_t>(ctx.dimension()));
    x2sq.set(2, 2);
    want.add_term(x2sq, Rational(1));
    MultiIndex x1(static_cast<std::size_t>(ctx.dimension()));
    x1.set(1, 1);
    want.add_term(x1, Rational(-1));
    rep.check(p4 == want, "P_4^v = x2^2 - x1");
    rep.check(specialize_covector(family[4], v).is_zero(), "P_5^v = 0");
    rep.check(specialize_covector(family[5], v).is_zero(), "P_6^v = 0");

    struct Phi {
        const char* name;
        UniPoly dphi;
    };
    std::vector<Phi> phis = {
        {"phi = 0", UniPoly({Rational(0)})},
        {"phi = t^2", UniPoly({Rational(0), Rational(2)})},
        {"phi = t^3", UniPoly({Rational(0), Rational(0), Rational(3)})},
    };
    for (const auto& [name, dphi] : phis) {
        ControlLaw law = ControlLaw::single(
            {UniPoly({Rational(0), Rational(2)}), UniPoly({Rational(1)}), dphi});
        DevelopedCurve curve = develop(ctx, law);
        RatMat goh = find_goh_covectors(ctx, family, curve);
        rep.check(!goh.empty() && in_span(goh, v),
                  std::string("Goh certificate for ") + name);
    }
    return rep;
}

// Negative control: the Heisenberg group (rank 2, step 2) admits no nonzero
// abnormal covector along a generic curve.
inline ScenarioReport scenario_heis_noabnormal() {
    ScenarioReport rep;
    rep.name = "heis-noabnormal";
    GroupContext ctx = GroupContext::build(2, 2);
    auto family = build_extremal_family(ctx);
    ControlLaw law = ControlLaw::single({UniPoly({Rational(1)}), UniPoly({Rational(0), Rational(1)})});
    DevelopedCurve curve = develop(ctx, law);
    RatMat ab = find_abnormal_covectors(ctx, family, curve);
    rep.check(ab.empty(), "abnormal covector space is {0}");
    Classification cls = classify(ctx, family, curve);
    rep.check(cls.corank == 0, "corank 0");
    DevelopedCurve line =
        develop(ctx, ControlLaw::single({UniPoly({Rational(1)}), UniPoly({Rational(1)})}));
    rep.check(normal_certificate_exists(ctx, family, line, +1),
              "constant-control comparison curve admits a normal certificate");
    return rep;
}

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"gk-poly",   "r2s6-p3",    "r3s4-quadrics",
                                                   "gk-strict", "corner-goh", "heis-noabnormal"};
    return names;
}

inline ScenarioReport run_scenario(const std::string& name) {
    if (name == "gk-poly") return scenario_gk_poly();
    if (name == "r2s6-p3") return scenario_r2s6_p3();
    if (name == "r3s4-quadrics") return scenario_r3s4_quadrics();
    if (name == "gk-strict") return scenario_gk_strict();
    if (name == "corner-goh") return scenario_corner_goh();
    if (name == "heis-noabnormal") return scenario_heis_noabnormal();
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace extremal

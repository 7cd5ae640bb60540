// extremal-lab: exact calculator for horizontal curves in free nilpotent
// Lie groups — bracket bases, structure constants, dual-coordinate
// polynomials P_i^v, abnormal/Goh varieties Z_v and classification,
// numerical normal shooting, and stratified quotient groups.

#include "extremal/io.hpp"
#include "extremal/scenarios.hpp"
#include "extremal/selftest.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace ex = extremal;

namespace {

// ---------------------------------------------------------------------------
// text rendering
// ---------------------------------------------------------------------------

// One signed term "(+|-) [magnitude] monomial"; empty monomial renders the
// bare magnitude, unit magnitude with a monomial renders the bare monomial.
std::string term_text(const ex::Rational& c, const std::string& mono, bool first) {
    ex::Rational a = c < 0 ? ex::Rational(-c) : c;
    std::string sign = (c < 0) ? (first ? "-" : " - ") : (first ? "" : " + ");
    std::string mag = ex::rational_to_string(a);
    if (mono.empty()) return sign + mag;
    if (mag == "1") return sign + mono;
    return sign + mag + " " + mono;
}

std::string monomial_text(const ex::MultiIndex& a, const std::string& var) {
    std::string out;
    for (std::size_t i = 1; i <= a.dimension(); ++i)
        if (a[i] != 0) {
            if (!out.empty()) out += " ";
            out += var + std::to_string(i);
            if (a[i] > 1) out += "^" + std::to_string(a[i]);
        }
    return out;
}

std::string polynomial_text(const ex::Polynomial& p, const std::string& var = "x") {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [a, c] : p.terms()) {
        out += term_text(c, monomial_text(a, var), first);
        first = false;
    }
    return out;
}

std::string unipoly_text(const ex::UniPoly& u, const std::string& var = "t") {
    std::string out;
    bool first = true;
    for (int d = u.degree(); d >= 0; --d) {
        ex::Rational c = u.coefficient(static_cast<std::size_t>(d));
        if (c == 0) continue;
        std::string mono;
        if (d == 1) mono = var;
        if (d > 1) mono = var + "^" + std::to_string(d);
        out += term_text(c, mono, first);
        first = false;
    }
    if (out.empty()) out = "0";
    return out;
}

std::string table_text(const ex::ExtremalTable& t) {
    std::string out = "P_" + std::to_string(t.i) + "^v = ";
    bool first = true;
    for (const auto& [a, row] : t.cells)
        for (const auto& [k, c] : row) {
            if (c == 0) continue;
            std::string mono = monomial_text(a, "x");
            if (!mono.empty()) mono += " ";
            mono += "v" + std::to_string(k);
            out += term_text(c, mono, first);
            first = false;
        }
    if (first) out += "0";
    return out;
}

std::string ratvec_text(const ex::RatVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += ex::rational_to_string(v[i]);
    }
    return out + ")";
}

std::string sparse_bracket_text(const ex::SparseVec& row) {
    if (row.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : row) {
        out += term_text(c, "X" + std::to_string(k), first);
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared flags
// ---------------------------------------------------------------------------

struct Common {
    bool json = false;
    std::string cache;
    std::size_t cap = 1000;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_flag("--json", c.json, "emit JSON instead of text");
    sub->add_option("--cache", c.cache,
                    "constants cache directory (default: $EXTREMAL_LAB_CACHE, else "
                    "$XDG_CACHE_HOME/extremal-lab, else ~/.cache/extremal-lab)");
    sub->add_option("--cap", c.cap, "abort if the group dimension exceeds this cap");
}

std::filesystem::path cache_dir(const Common& c) {
    return c.cache.empty() ? ex::default_cache_dir() : std::filesystem::path(c.cache);
}

ex::GroupContext context_for(const Common& c, int r, int s) {
    return ex::load_or_build_context(r, s, cache_dir(c), c.cap);
}

// Input files are user-supplied, so any failure reading or interpreting one is
// a usage error (exit 2), not a verification failure.
ex::ControlLaw law_from_file(const std::string& path) {
    try {
        return ex::control_law_from_json(ex::load_json_file(path));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

ex::QuotientSpec quotient_spec_from_file(const std::string& path) {
    try {
        return ex::quotient_spec_from_json(ex::load_json_file(path));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

ex::RatVec parse_covector(const std::string& text, int n, const char* flag) {
    ex::RatVec v = ex::parse_rational_list(text);
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument(std::string(flag) + ": expected " + std::to_string(n) +
                                    " rationals, got " + std::to_string(v.size()));
    return v;
}

void emit(const ex::Json& j) { std::cout << j.dump(1) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "extremal-lab: exact computations for extremal (normal, abnormal, Goh) curves\n"
        "in free nilpotent Lie groups and their stratified quotients"};
    app.require_subcommand(1);

    // ---- basis ----
    struct {
        int r = 2, s = 3;
        Common c;
    } ob;
    CLI::App* basis = app.add_subcommand("basis", "print the bracket basis X_1..X_n");
    basis->add_option("rank", ob.r, "number of generators")->required();
    basis->add_option("step", ob.s, "nilpotency step")->required();
    add_common(basis, ob.c);

    // ---- constants ----
    struct {
        int r = 2, s = 3;
        bool generalized = false;
        Common c;
    } oc;
    CLI::App* constants = app.add_subcommand("constants", "print structure constants c_ij^k");
    constants->add_option("rank", oc.r)->required();
    constants->add_option("step", oc.s)->required();
    constants->add_flag("--generalized", oc.generalized,
                        "include the iterated-bracket table c_{i alpha}^k");
    add_common(constants, oc.c);

    // ---- extremal-poly ----
    struct {
        int r = 2, s = 3, i = 1;
        std::string v;
        Common c;
    } op;
    CLI::App* epoly = app.add_subcommand("extremal-poly",
                                         "print the dual-coordinate polynomial P_i^v");
    epoly->add_option("rank", op.r)->required();
    epoly->add_option("step", op.s)->required();
    epoly->add_option("i", op.i, "coordinate index")->required();
    epoly->add_option("--v", op.v, "specialize at this covector (n comma-separated rationals)");
    add_common(epoly, op.c);

    // ---- variety ----
    struct {
        int r = 2, s = 3;
        std::string v;
        bool goh = false;
        Common c;
    } ov;
    CLI::App* variety = app.add_subcommand(
        "variety", "defining polynomials of the abnormal variety Z_v (or the Goh variety)");
    variety->add_option("rank", ov.r)->required();
    variety->add_option("step", ov.s)->required();
    variety->add_option("--v", ov.v, "covector (n comma-separated rationals)")->required();
    variety->add_flag("--goh", ov.goh, "strengthen by the second layer (Goh variety)");
    add_common(variety, ov.c);

    // ---- develop ----
    struct {
        int r = 2, s = 3;
        std::string law;
        Common c;
    } od;
    CLI::App* dev = app.add_subcommand("develop",
                                       "integrate a control law into a horizontal curve");
    dev->add_option("rank", od.r)->required();
    dev->add_option("step", od.s)->required();
    dev->add_option("--law", od.law, "control-law JSON file")->required()->check(CLI::ExistingFile);
    add_common(dev, od.c);

    // ---- verify ----
    struct {
        int r = 2, s = 3;
        std::string law, v;
        int samples = 10;
        Common c;
    } ow;
    CLI::App* verify = app.add_subcommand(
        "verify", "check the dual curve of (law, v) against the dual system and the frame");
    verify->add_option("rank", ow.r)->required();
    verify->add_option("step", ow.s)->required();
    verify->add_option("--law", ow.law)->required()->check(CLI::ExistingFile);
    verify->add_option("--v", ow.v, "initial covector (n comma-separated rationals)")->required();
    verify->add_option("--samples", ow.samples, "sample times per piece for the frame check");
    add_common(verify, ow.c);

    // ---- classify ----
    struct {
        int r = 2, s = 3;
        std::string law;
        Common c;
    } ocl;
    CLI::App* classify = app.add_subcommand(
        "classify", "corank, abnormal/Goh covector bases, and strictness of a curve");
    classify->add_option("rank", ocl.r)->required();
    classify->add_option("step", ocl.s)->required();
    classify->add_option("--law", ocl.law)->required()->check(CLI::ExistingFile);
    add_common(classify, ocl.c);

    // ---- shoot ----
    struct {
        int r = 2, s = 3;
        std::string v;
        double horizon = 1.0, dt = 1e-3;
        Common c;
    } os_;
    CLI::App* shoot = app.add_subcommand(
        "shoot", "integrate the normal system numerically from a covector");
    shoot->add_option("rank", os_.r)->required();
    shoot->add_option("step", os_.s)->required();
    shoot->add_option("--v", os_.v, "initial covector")->required();
    shoot->add_option("--horizon", os_.horizon, "final time (default 1)");
    shoot->add_option("--dt", os_.dt, "step size (default 1e-3)");
    add_common(shoot, os_.c);

    // ---- length ----
    struct {
        int r = 2;
        std::string law;
        Common c;
    } ol;
    CLI::App* length = app.add_subcommand("length", "control energy and length of a law");
    length->add_option("rank", ol.r)->required();
    length->add_option("--law", ol.law)->required()->check(CLI::ExistingFile);
    add_common(length, ol.c);

    // ---- lift ----
    struct {
        std::string quotient, law;
        Common c;
    } olf;
    CLI::App* lift = app.add_subcommand(
        "lift", "lift a quotient-group control law to the free group");
    lift->add_option("--quotient", olf.quotient, "quotient presentation JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    lift->add_option("--law", olf.law)->required()->check(CLI::ExistingFile);
    add_common(lift, olf.c);

    // ---- quotient-check ----
    struct {
        std::string quotient, law, lambda0;
        Common c;
    } oqc;
    CLI::App* qcheck = app.add_subcommand(
        "quotient-check",
        "verify the pulled-back dual curve against the quotient dual system");
    qcheck->add_option("--quotient", oqc.quotient)->required()->check(CLI::ExistingFile);
    qcheck->add_option("--law", oqc.law)->required()->check(CLI::ExistingFile);
    qcheck->add_option("--lambda0", oqc.lambda0, "initial quotient covector (m rationals)")
        ->required();
    add_common(qcheck, oqc.c);

    // ---- quotient-classify ----
    struct {
        std::string quotient, law;
        Common c;
    } oqk;
    CLI::App* qclassify = app.add_subcommand(
        "quotient-classify", "abnormal covectors of a quotient-group curve");
    qclassify->add_option("--quotient", oqk.quotient)->required()->check(CLI::ExistingFile);
    qclassify->add_option("--law", oqk.law)->required()->check(CLI::ExistingFile);
    add_common(qclassify, oqk.c);

    // ---- reproduce ----
    struct {
        std::string item;
        Common c;
    } orp;
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "run an embedded reference scenario and diff against expected data");
    reproduce->add_option("item", orp.item, "gk-poly | r2s6-p3 | r3s4-quadrics | gk-strict | "
                                            "corner-goh | heis-noabnormal | all")
        ->required();
    add_common(reproduce, orp.c);

    // ---- selftest ----
    struct {
        std::uint64_t seed = 2012;
        int trials = 25;
        Common c;
    } ost;
    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant suites");
    selftest->add_option("--seed", ost.seed, "random seed (default 2012)");
    selftest->add_option("--trials", ost.trials, "randomized trials (default 25; 0 = static only)");
    add_common(selftest, ost.c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (basis->parsed()) {
            ex::HallBasis b = ex::HallBasis::build(ob.r, ob.s, ob.c.cap);
            if (ob.c.json) {
                emit(ex::basis_to_json(b));
            } else {
                std::cout << "bracket basis, rank " << b.rank() << ", step " << b.step()
                          << ", dimension " << b.dimension() << "\n";
                for (int l = 1; l <= b.dimension(); ++l) {
                    const ex::HallElement& e = b.element(l);
                    if (e.is_generator()) {
                        std::cout << "X" << l << "  d=1\n";
                        continue;
                    }
                    std::cout << "X" << l << " = [X" << e.left << ", X" << e.right << "]  d="
                              << e.degree << "  I=(";
                    const ex::MultiIndex& I = b.chain_multiplicity(l);
                    for (std::size_t p = 1; p <= I.dimension(); ++p)
                        std::cout << (p > 1 ? "," : "") << I[p];
                    std::cout << ")\n";
                }
            }
            return 0;
        }

        if (constants->parsed()) {
            ex::GroupContext ctx = context_for(oc.c, oc.r, oc.s);
            if (oc.c.json) {
                ex::Json j = ex::context_to_json(ctx);
                if (!oc.generalized) j.erase("generalized");
                emit(j);
                return 0;
            }
            for (int i = 1; i <= ctx.dimension(); ++i)
                for (int j = 1; j < i; ++j) {
                    const ex::SparseVec& row = ctx.structure_constants(i, j);
                    if (row.empty()) continue;
                    std::cout << "[X" << i << ", X" << j << "] = " << sparse_bracket_text(row)
                              << "\n";
                }
            if (oc.generalized)
                for (int i = 1; i <= ctx.dimension(); ++i)
                    for (const auto& [a, row] : ctx.generalized_row(i)) {
                        if (a.is_zero() || row.empty()) continue;
                        std::cout << "[X" << i << "; " << monomial_text(a, "e") << "] = "
                                  << sparse_bracket_text(row) << "\n";
                    }
            return 0;
        }

        if (epoly->parsed()) {
            ex::GroupContext ctx = context_for(op.c, op.r, op.s);
            if (op.i < 1 || op.i > ctx.dimension())
                throw std::invalid_argument("extremal-poly: index out of range");
            ex::ExtremalTable t = ex::extremal_polynomial(ctx, op.i);
            if (!op.v.empty()) {
                ex::RatVec v = parse_covector(op.v, ctx.dimension(), "--v");
                ex::Polynomial p = ex::specialize_covector(t, v);
                if (op.c.json)
                    emit(ex::polynomial_to_json(p));
                else
                    std::cout << "P_" << op.i << "^v = " << polynomial_text(p) << "\n";
            } else {
                if (op.c.json)
                    emit(ex::extremal_table_to_json(t));
                else
                    std::cout << table_text(t) << "\n";
            }
            return 0;
        }

        if (variety->parsed()) {
            ex::GroupContext ctx = context_for(ov.c, ov.r, ov.s);
            auto family = ex::build_extremal_family(ctx);
            ex::RatVec v = parse_covector(ov.v, ctx.dimension(), "--v");
            auto gens = ov.goh ? ex::goh_variety_generators(ctx, family, v)
                               : ex::abnormal_variety_generators(ctx, family, v);
            ex::NontrivialityReport rep = ex::nontriviality_report(ctx, family, v);
            if (ov.c.json) {
                ex::Json j;
                j["kind"] = ov.goh ? "goh" : "abnormal";
                ex::Json g = ex::Json::array();
                for (const auto& p : gens) g.push_back(ex::polynomial_to_json(p));
                j["generators"] = std::move(g);
                j["vanishing_first_layer"] = rep.vanishing_first_layer;
                j["second_layer_all_zero"] = rep.second_layer_all_zero;
                emit(j);
            } else {
                std::cout << (ov.goh ? "Goh variety" : "abnormal variety Z_v")
                          << " generators:\n";
                for (std::size_t i = 0; i < gens.size(); ++i)
                    std::cout << "  P_" << (i + 1) << "^v = " << polynomial_text(gens[i]) << "\n";
                if (!rep.vanishing_first_layer.empty()) {
                    std::cout << "identically zero on the first layer:";
                    for (int i : rep.vanishing_first_layer) std::cout << " P_" << i << "^v";
                    std::cout << "\n";
                }
            }
            return 0;
        }

        if (dev->parsed()) {
            ex::GroupContext ctx = context_for(od.c, od.r, od.s);
            ex::ControlLaw law = law_from_file(od.law);
            if (law.rank() != ctx.rank())
                throw std::invalid_argument("develop: law rank differs from the group rank");
            ex::DevelopedCurve curve = ex::develop(ctx, law);
            if (od.c.json) {
                emit(ex::piecewise_path_to_json(curve.path));
            } else {
                for (const auto& pc : curve.path.pieces()) {
                    std::cout << "piece [" << ex::rational_to_string(pc.t0) << ", "
                              << ex::rational_to_string(pc.t1) << "], local time t:\n";
                    for (std::size_t k = 0; k < pc.x.size(); ++k)
                        std::cout << "  x" << (k + 1) << "(t) = " << unipoly_text(pc.x[k]) << "\n";
                }
                std::cout << "endpoint " << ratvec_text(curve.path.end_value()) << "\n";
            }
            return 0;
        }

        if (verify->parsed()) {
            ex::GroupContext ctx = context_for(ow.c, ow.r, ow.s);
            auto family = ex::build_extremal_family(ctx);
            ex::ControlLaw law = law_from_file(ow.law);
            if (law.rank() != ctx.rank())
                throw std::invalid_argument("verify: law rank differs from the group rank");
            ex::DevelopedCurve curve = ex::develop(ctx, law);
            ex::RatVec v = parse_covector(ow.v, ctx.dimension(), "--v");
            bool master = ex::verify_master_identity(ctx, family, curve, v);
            bool frame = ex::theta_frame_check(ctx, family, curve, v, ow.samples);
            if (ow.c.json) {
                ex::Json j;
                j["dual_system"] = master;
                j["frame_check"] = frame;
                j["pass"] = master && frame;
                emit(j);
            } else {
                std::cout << "dual system:  " << (master ? "pass" : "FAIL") << "\n"
                          << "frame check:  " << (frame ? "pass" : "FAIL") << "\n";
            }
            return master && frame ? 0 : 1;
        }

        if (classify->parsed()) {
            ex::GroupContext ctx = context_for(ocl.c, ocl.r, ocl.s);
            auto family = ex::build_extremal_family(ctx);
            ex::ControlLaw law = law_from_file(ocl.law);
            if (law.rank() != ctx.rank())
                throw std::invalid_argument("classify: law rank differs from the group rank");
            ex::DevelopedCurve curve = ex::develop(ctx, law);
            ex::Classification cls = ex::classify(ctx, family, curve);
            if (ocl.c.json) {
                emit(ex::classification_to_json(cls));
            } else {
                std::cout << "corank " << cls.corank << "\n";
                for (const auto& row : cls.abnormal_basis)
                    std::cout << "abnormal covector " << ratvec_text(row) << "\n";
                for (const auto& row : cls.goh_basis)
                    std::cout << "Goh covector      " << ratvec_text(row) << "\n";
                std::cout << (cls.strict == ex::Strictness::StrictlyAbnormalCandidate
                                  ? "strictly abnormal candidate (no normal certificate)"
                                  : "normal-capable parametrization")
                          << "\n";
            }
            return 0;
        }

        if (shoot->parsed()) {
            ex::GroupContext ctx = context_for(os_.c, os_.r, os_.s);
            auto family = ex::build_extremal_family(ctx);
            ex::RatVec v = parse_covector(os_.v, ctx.dimension(), "--v");
            ex::ShootResult res = ex::normal_shoot(ctx, family, v, os_.horizon, os_.dt);
            if (os_.c.json) {
                ex::Json j;
                j["initial_hamiltonian"] = res.initial_hamiltonian;
                j["max_drift"] = res.max_drift;
                j["steps"] = res.times.size() - 1;
                j["end"] = res.states.back();
                emit(j);
            } else {
                std::cout << "steps " << (res.times.size() - 1) << ", H(0) = "
                          << res.initial_hamiltonian << ", max |H(t) - H(0)| = " << res.max_drift
                          << "\nendpoint (";
                for (std::size_t i = 0; i < res.states.back().size(); ++i)
                    std::cout << (i ? ", " : "") << res.states.back()[i];
                std::cout << ")\n";
            }
            return 0;
        }

        if (length->parsed()) {
            ex::ControlLaw law = law_from_file(ol.law);
            if (law.rank() != ol.r)
                throw std::invalid_argument("length: law rank differs from the given rank");
            ex::Rational energy = ex::control_energy(law);
            double len = ex::curve_length(law);
            if (ol.c.json) {
                ex::Json j;
                ex::Json e;
                ex::rational_to_json(energy, e);
                j["energy"] = std::move(e);
                j["length"] = len;
                emit(j);
            } else {
                std::cout << "energy = " << ex::rational_to_string(energy) << ", length = " << len
                          << "\n";
            }
            return 0;
        }

        if (lift->parsed()) {
            ex::QuotientSpec spec = quotient_spec_from_file(olf.quotient);
            ex::GroupContext ctx = context_for(olf.c, spec.rank, spec.step);
            ex::QuotientGroup q(ctx, spec.selected, spec.zeta);
            ex::ControlLaw law = law_from_file(olf.law);
            if (law.rank() != q.rank())
                throw std::invalid_argument("lift: law rank differs from the group rank");
            ex::DevelopedCurve lifted = ex::lift_curve(q, law);
            if (olf.c.json) {
                ex::Json j;
                j["free_dimension"] = ctx.dimension();
                j["quotient_dimension"] = q.dimension();
                j["lift"] = ex::piecewise_path_to_json(lifted.path);
                emit(j);
            } else {
                std::cout << "lift into the free group (dimension " << ctx.dimension() << "):\n";
                std::cout << "endpoint " << ratvec_text(lifted.path.end_value()) << "\n";
            }
            return 0;
        }

        if (qcheck->parsed()) {
            ex::QuotientSpec spec = quotient_spec_from_file(oqc.quotient);
            ex::GroupContext ctx = context_for(oqc.c, spec.rank, spec.step);
            ex::QuotientGroup q(ctx, spec.selected, spec.zeta);
            auto family = ex::build_extremal_family(ctx);
            ex::ControlLaw law = law_from_file(oqc.law);
            ex::RatVec lambda0 = parse_covector(oqc.lambda0, q.dimension(), "--lambda0");
            bool dual = ex::quotient_dual_check(q, family, law, lambda0);
            bool pullback = ex::check_pullback_compatibility(q, family, law, lambda0);
            if (oqc.c.json) {
                ex::Json j;
                j["dual_system"] = dual;
                j["pullback_compatibility"] = pullback;
                j["pass"] = dual && pullback;
                emit(j);
            } else {
                std::cout << "quotient dual system:     " << (dual ? "pass" : "FAIL") << "\n"
                          << "pullback compatibility:   " << (pullback ? "pass" : "FAIL") << "\n";
            }
            return dual && pullback ? 0 : 1;
        }

        if (qclassify->parsed()) {
            ex::QuotientSpec spec = quotient_spec_from_file(oqk.quotient);
            ex::GroupContext ctx = context_for(oqk.c, spec.rank, spec.step);
            ex::QuotientGroup q(ctx, spec.selected, spec.zeta);
            auto family = ex::build_extremal_family(ctx);
            ex::ControlLaw law = law_from_file(oqk.law);
            auto basis_rows = ex::find_quotient_abnormal_covectors(q, family, law);
            if (oqk.c.json) {
                ex::Json j;
                j["corank"] = basis_rows.size();
                ex::Json rows = ex::Json::array();
                for (const auto& row : basis_rows) rows.push_back(ex::ratvec_to_json(row));
                j["abnormal_basis"] = std::move(rows);
                emit(j);
            } else {
                std::cout << "corank " << basis_rows.size() << "\n";
                for (const auto& row : basis_rows)
                    std::cout << "abnormal covector " << ratvec_text(row) << "\n";
            }
            return 0;
        }

        if (reproduce->parsed()) {
            std::vector<std::string> items;
            if (orp.item == "all")
                items = ex::scenario_names();
            else
                items.push_back(orp.item);
            bool all_pass = true;
            ex::Json out = ex::Json::array();
            for (const auto& item : items) {
                ex::ScenarioReport rep = ex::run_scenario(item);
                all_pass = all_pass && rep.pass;
                if (orp.c.json) {
                    ex::Json j;
                    j["name"] = rep.name;
                    j["pass"] = rep.pass;
                    j["lines"] = rep.lines;
                    out.push_back(std::move(j));
                } else {
                    std::cout << "[" << (rep.pass ? "PASS" : "FAIL") << "] " << rep.name << "\n";
                    for (const auto& l : rep.lines) std::cout << "    " << l << "\n";
                }
            }
            if (orp.c.json) emit(out);
            return all_pass ? 0 : 1;
        }

        if (selftest->parsed()) {
            ex::SelfTestReport rep = ex::run_selftest(ost.seed, ost.trials);
            if (ost.c.json) {
                emit(ex::selftest_report_to_json(rep));
            } else {
                for (const auto& s : rep.suites) {
                    std::cout << s.name << ": " << (s.checks - s.failures) << "/" << s.checks
                              << " checks passed\n";
                    for (const auto& d : s.diagnostics) std::cout << "    " << d << "\n";
                }
                std::cout << (rep.pass() ? "self-test passed" : "SELF-TEST FAILED") << " ("
                          << rep.total_checks() << " checks, seed " << rep.seed << ", "
                          << rep.trials << " trials)\n";
            }
            return rep.pass() ? 0 : 1;
        }
    } catch (const ex::ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#pragma once

#include "extremal/curves.hpp"
#include "extremal/extremal_polynomial.hpp"
#include "extremal/group_context.hpp"
#include "extremal/quotient.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extremal {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Rational scalars and vectors. All rationals travel as decimal strings to
// keep arbitrary precision intact.
// ---------------------------------------------------------------------------

inline void rational_to_json(const Rational& q, Json& obj) {
    obj["num"] = boost::multiprecision::numerator(q).str();
    obj["den"] = boost::multiprecision::denominator(q).str();
}

inline Rational rational_from_json(const Json& obj) {
    if (!obj.contains("num") || !obj.contains("den"))
        throw std::runtime_error("rational: missing num/den");
    return parse_rational(obj.at("num").get<std::string>() + "/" +
                          obj.at("den").get<std::string>());
}

inline Json ratvec_to_json(const RatVec& v) {
    Json arr = Json::array();
    for (const auto& c : v) arr.push_back(rational_to_string(c));
    return arr;
}

inline RatVec ratvec_from_json(const Json& arr) {
    if (!arr.is_array()) throw std::runtime_error("rational vector: expected array");
    RatVec v;
    v.reserve(arr.size());
    for (const auto& e : arr) v.push_back(parse_rational(e.get<std::string>()));
    return v;
}

// Comma- or space-separated rational list (CLI flag payloads).
inline RatVec parse_rational_list(const std::string& text) {
    RatVec out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        std::istringstream ws(cur);
        std::string tok;
        while (ws >> tok) out.push_back(parse_rational(tok));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomials: array of {"exp": [a_1..a_n], "num", "den"}, canonical term
// order (the term map is already sorted that way).
// ---------------------------------------------------------------------------

inline Json polynomial_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (const auto& [a, c] : p.terms()) {
        Json term;
        Json exp = Json::array();
        for (std::size_t k = 1; k <= p.dimension(); ++k) exp.push_back(a[k]);
        term["exp"] = std::move(exp);
        rational_to_json(c, term);
        arr.push_back(std::move(term));
    }
    return arr;
}

inline Polynomial polynomial_from_json(const Json& arr, std::size_t dim) {
    if (!arr.is_array()) throw std::runtime_error("polynomial: expected array of terms");
    Polynomial p(dim);
    for (const auto& term : arr) {
        const Json& exp = term.at("exp");
        if (!exp.is_array() || exp.size() != dim)
            throw std::runtime_error("polynomial: bad exponent vector");
        MultiIndex a(dim);
        for (std::size_t k = 0; k < dim; ++k)
            a.set(k + 1, exp[k].get<std::uint32_t>());
        p.add_term(a, rational_from_json(term));
    }
    return p;
}

inline Json unipoly_to_json(const UniPoly& p) {
    Json arr = Json::array();
    for (int d = 0; d <= p.degree(); ++d)
        arr.push_back(rational_to_string(p.coefficient(static_cast<std::size_t>(d))));
    return arr;
}

inline UniPoly unipoly_from_json(const Json& arr) {
    if (!arr.is_array()) throw std::runtime_error("univariate polynomial: expected coefficient array");
    std::vector<Rational> cs;
    cs.reserve(arr.size());
    for (const auto& e : arr) cs.push_back(parse_rational(e.get<std::string>()));
    return UniPoly(std::move(cs));
}

// ---------------------------------------------------------------------------
// Control laws: JSON list of {"t0", "t1", "coeffs": [[rational...] per
// control]}, each coefficient list ascending in the local time power.
// ---------------------------------------------------------------------------

inline Json control_law_to_json(const ControlLaw& law) {
    Json arr = Json::array();
    for (const auto& pc : law.pieces()) {
        Json piece;
        piece["t0"] = rational_to_string(pc.t0);
        piece["t1"] = rational_to_string(pc.t1);
        Json coeffs = Json::array();
        for (const auto& hj : pc.h) coeffs.push_back(unipoly_to_json(hj));
        piece["coeffs"] = std::move(coeffs);
        arr.push_back(std::move(piece));
    }
    return arr;
}

inline ControlLaw control_law_from_json(const Json& arr) {
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error("control law: expected nonempty array of pieces");
    std::vector<ControlPiece> pieces;
    int rank = -1;
    for (const auto& piece : arr) {
        ControlPiece pc;
        pc.t0 = parse_rational(piece.at("t0").get<std::string>());
        pc.t1 = parse_rational(piece.at("t1").get<std::string>());
        const Json& coeffs = piece.at("coeffs");
        if (!coeffs.is_array() || coeffs.empty())
            throw std::runtime_error("control law: piece without controls");
        for (const auto& cj : coeffs) pc.h.push_back(unipoly_from_json(cj));
        if (rank < 0) rank = static_cast<int>(pc.h.size());
        pieces.push_back(std::move(pc));
    }
    return ControlLaw(rank, std::move(pieces));
}

inline Json piecewise_path_to_json(const PiecewisePath& path) {
    Json arr = Json::array();
    for (const auto& pp : path.pieces()) {
        Json piece;
        piece["t0"] = rational_to_string(pp.t0);
        piece["t1"] = rational_to_string(pp.t1);
        Json comps = Json::array();
        for (const auto& xk : pp.x) comps.push_back(unipoly_to_json(xk));
        piece["components"] = std::move(comps);
        arr.push_back(std::move(piece));
    }
    return arr;
}

inline PiecewisePath piecewise_path_from_json(const Json& arr) {
    if (!arr.is_array() || arr.empty()) throw std::runtime_error("path: expected array of pieces");
    std::vector<PathPiece> pieces;
    for (const auto& piece : arr) {
        PathPiece pp;
        pp.t0 = parse_rational(piece.at("t0").get<std::string>());
        pp.t1 = parse_rational(piece.at("t1").get<std::string>());
        for (const auto& cj : piece.at("components")) pp.x.push_back(unipoly_from_json(cj));
        pieces.push_back(std::move(pp));
    }
    return PiecewisePath(std::move(pieces));
}

// ---------------------------------------------------------------------------
// Extremal tables: {"i": index, "entries": [{"alpha": [...], "k", "num",
// "den"}]}, entries in canonical (alpha, k) order.
// ---------------------------------------------------------------------------

inline Json extremal_table_to_json(const ExtremalTable& t) {
    Json out;
    out["i"] = t.i;
    Json entries = Json::array();
    for (const auto& [a, row] : t.cells) {
        Json alpha = Json::array();
        for (std::size_t k = 1; k <= t.dim; ++k) alpha.push_back(a[k]);
        for (const auto& [k, c] : row) {
            Json e;
            e["alpha"] = alpha;
            e["k"] = k;
            rational_to_json(c, e);
            entries.push_back(std::move(e));
        }
    }
    out["entries"] = std::move(entries);
    return out;
}

inline ExtremalTable extremal_table_from_json(const Json& obj, std::size_t dim) {
    ExtremalTable t;
    t.i = obj.at("i").get<int>();
    t.dim = dim;
    for (const auto& e : obj.at("entries")) {
        const Json& alpha = e.at("alpha");
        if (!alpha.is_array() || alpha.size() != dim)
            throw std::runtime_error("extremal table: bad alpha vector");
        MultiIndex a(dim);
        for (std::size_t k = 0; k < dim; ++k) a.set(k + 1, alpha[k].get<std::uint32_t>());
        int k = e.at("k").get<int>();
        if (k < 1 || k > static_cast<int>(dim)) throw std::runtime_error("extremal table: bad column");
        t.cells[a].emplace_back(k, rational_from_json(e));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Hall basis description.
// ---------------------------------------------------------------------------

inline Json basis_to_json(const HallBasis& b) {
    Json out;
    out["rank"] = b.rank();
    out["step"] = b.step();
    out["dimension"] = b.dimension();
    Json layers = Json::array();
    for (auto d : b.layer_dims()) layers.push_back(d);
    out["layers"] = std::move(layers);
    Json elems = Json::array();
    for (int l = 1; l <= b.dimension(); ++l) {
        const HallElement& e = b.element(l);
        Json je;
        je["index"] = e.index;
        je["degree"] = e.degree;
        je["children"] = Json::array({e.left, e.right});
        je["ell0"] = e.chain_start;
        Json chain = Json::array();
        for (int c : e.chain) chain.push_back(c);
        je["chain"] = std::move(chain);
        Json mult = Json::array();
        const MultiIndex& I = b.chain_multiplicity(l);
        for (std::size_t k = 1; k <= static_cast<std::size_t>(b.dimension()); ++k)
            mult.push_back(I[k]);
        je["I"] = std::move(mult);
        elems.push_back(std::move(je));
    }
    out["elements"] = std::move(elems);
    return out;
}

// ---------------------------------------------------------------------------
// Quotient presentations: {"r", "s", "S": [ints], "zeta": [[rational
// strings]]} (rows over the free basis, columns over the selection).
// ---------------------------------------------------------------------------

struct QuotientSpec {
    int rank = 0;
    int step = 0;
    std::vector<int> selected;
    RatMat zeta;
};

inline Json quotient_spec_to_json(const QuotientSpec& q) {
    Json out;
    out["r"] = q.rank;
    out["s"] = q.step;
    out["S"] = q.selected;
    Json z = Json::array();
    for (const auto& row : q.zeta) z.push_back(ratvec_to_json(row));
    out["zeta"] = std::move(z);
    return out;
}

inline QuotientSpec quotient_spec_from_json(const Json& obj) {
    QuotientSpec q;
    q.rank = obj.at("r").get<int>();
    q.step = obj.at("s").get<int>();
    q.selected = obj.at("S").get<std::vector<int>>();
    for (const auto& row : obj.at("zeta")) q.zeta.push_back(ratvec_from_json(row));
    return q;
}

// ---------------------------------------------------------------------------
// Classification reports.
// ---------------------------------------------------------------------------

inline Json classification_to_json(const Classification& c) {
    Json out;
    out["corank"] = c.corank;
    Json ab = Json::array();
    for (const auto& v : c.abnormal_basis) ab.push_back(ratvec_to_json(v));
    out["abnormal_basis"] = std::move(ab);
    Json gb = Json::array();
    for (const auto& v : c.goh_basis) gb.push_back(ratvec_to_json(v));
    out["goh_basis"] = std::move(gb);
    out["strict"] =
        c.strict == Strictness::StrictlyAbnormalCandidate ? "candidate" : "normal-capable";
    return out;
}

inline Classification classification_from_json(const Json& obj) {
    Classification c;
    c.corank = obj.at("corank").get<std::size_t>();
    for (const auto& v : obj.at("abnormal_basis")) c.abnormal_basis.push_back(ratvec_from_json(v));
    for (const auto& v : obj.at("goh_basis")) c.goh_basis.push_back(ratvec_from_json(v));
    std::string s = obj.at("strict").get<std::string>();
    if (s == "candidate")
        c.strict = Strictness::StrictlyAbnormalCandidate;
    else if (s == "normal-capable")
        c.strict = Strictness::NormalCapable;
    else
        throw std::runtime_error("classification: unknown strictness tag");
    return c;
}

// ---------------------------------------------------------------------------
// Constants cache. The file stores the structure constants (i > j only; the
// rest follows by antisymmetry) and the generalized table, versioned by
// format and basis-ordering tags. Loading revalidates everything cheaply
// checkable without rebuilding the bracket algebra: grading, Hall-pair
// entries, the generalized recurrence, and the Jacobi identity.
// ---------------------------------------------------------------------------

inline constexpr int kCacheFormat = 1;
inline constexpr const char* kOrderingTag = "hall-degree-lex-v1";

inline Json context_to_json(const GroupContext& ctx) {
    Json out;
    out["format"] = kCacheFormat;
    out["ordering"] = kOrderingTag;
    out["rank"] = ctx.rank();
    out["step"] = ctx.step();
    out["dimension"] = ctx.dimension();
    Json sc = Json::array();
    for (int i = 1; i <= ctx.dimension(); ++i)
        for (int j = 1; j < i; ++j)
            for (const auto& [k, c] : ctx.structure_constants(i, j)) {
                Json e;
                e["i"] = i;
                e["j"] = j;
                e["k"] = k;
                rational_to_json(c, e);
                sc.push_back(std::move(e));
            }
    out["structure"] = std::move(sc);
    Json gsc = Json::array();
    for (int i = 1; i <= ctx.dimension(); ++i)
        for (const auto& [a, row] : ctx.generalized_row(i)) {
            Json alpha = Json::array();
            for (std::size_t k = 1; k <= static_cast<std::size_t>(ctx.dimension()); ++k)
                alpha.push_back(a[k]);
            for (const auto& [k, c] : row) {
                Json e;
                e["i"] = i;
                e["alpha"] = alpha;
                e["k"] = k;
                rational_to_json(c, e);
                gsc.push_back(std::move(e));
            }
        }
    out["generalized"] = std::move(gsc);
    return out;
}

namespace detail {

inline const Rational& sparse_lookup(const SparseVec& v, int k) {
    static const Rational zero(0);
    for (const auto& [kk, c] : v)
        if (kk == k) return c;
    return zero;
}

inline bool sparse_equal(const SparseVec& a, const SparseVec& b) {
    std::map<int, Rational> ma, mb;
    for (const auto& [k, c] : a)
        if (c != 0) ma[k] = c;
    for (const auto& [k, c] : b)
        if (c != 0) mb[k] = c;
    return ma == mb;
}

}  // namespace detail

inline void validate_context_tables(const GroupContext& ctx) {
    const HallBasis& b = ctx.basis();
    int n = ctx.dimension();
    auto fail = [](const std::string& what) {
        throw std::runtime_error("constants cache: " + what);
    };

    for (int i = 1; i <= n; ++i) {
        if (!ctx.structure_constants(i, i).empty()) fail("nonzero bracket of an element with itself");
        for (int j = 1; j <= n; ++j) {
            const SparseVec& row = ctx.structure_constants(i, j);
            for (const auto& [k, c] : row) {
                if (k < 1 || k > n) fail("bracket column out of range");
                if (c == 0) fail("stored zero coefficient");
                if (b.degree(k) != b.degree(i) + b.degree(j)) fail("bracket entry violates the grading");
            }
            // antisymmetry
            const SparseVec& opp = ctx.structure_constants(j, i);
            if (row.size() != opp.size()) fail("bracket table is not antisymmetric");
            for (const auto& [k, c] : row)
                if (detail::sparse_lookup(opp, k) != -c) fail("bracket table is not antisymmetric");
            int l = b.bracket_index(i, j);
            if (l != 0 && !(row.size() == 1 && row.front().first == l && row.front().second == 1))
                fail("basis bracket pair does not map to its basis element");
        }
    }

    // Jacobi identity over all triples.
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                if (!jacobi_defect(ctx, i, j, k).empty()) fail("Jacobi identity fails");

    // Generalized table: delta row at alpha = 0, grading, and the peel-one
    // recurrence against the first-order table.
    for (int i = 1; i <= n; ++i) {
        const auto& rows = ctx.generalized_row(i);
        auto zit = rows.find(MultiIndex(static_cast<std::size_t>(n)));
        if (zit == rows.end() ||
            !detail::sparse_equal(zit->second, SparseVec{{i, Rational(1)}}))
            fail("generalized table misses the identity cell");
        for (const auto& [a, row] : rows) {
            int wd = static_cast<int>(a.weighted_degree(b.degrees()));
            if (b.degree(i) + wd > b.step()) fail("generalized cell beyond the step");
            for (const auto& [k, c] : row) {
                if (k < 1 || k > n) fail("generalized column out of range");
                if (c == 0) fail("stored zero generalized coefficient");
                if (b.degree(k) != b.degree(i) + wd) fail("generalized entry violates the grading");
            }
            if (a.is_zero()) continue;
            std::size_t u = a.leading_index();
            MultiIndex prev = a;
            prev.bump(u, -1);
            std::map<int, Rational> expect;
            for (const auto& [m, cm] : ctx.generalized_structure_constants(i, prev))
                for (const auto& [k, ck] : ctx.structure_constants(m, static_cast<int>(u))) {
                    expect[k] += cm * ck;
                }
            SparseVec want;
            for (const auto& [k, c] : expect)
                if (c != 0) want.emplace_back(k, c);
            if (!detail::sparse_equal(row, want)) fail("generalized recurrence fails");
        }
        // and no required cell may be missing: walk expected supports
        for (const auto& [a, row] : rows) {
            (void)row;
            if (a.is_zero()) continue;
            std::size_t u = a.leading_index();
            MultiIndex prev = a;
            prev.bump(u, -1);
            if (!prev.is_zero() && rows.find(prev) == rows.end()) {
                // the parent cell may legitimately be absent only if it is zero,
                // in which case this cell must be zero too and would not be stored
                fail("generalized table misses a parent cell");
            }
        }
    }
}

inline void save_json_file(const Json& j, const std::filesystem::path& file) {
    std::filesystem::create_directories(file.parent_path());
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << j.dump(1);
        out << "\n";
    }
    std::filesystem::rename(tmp, file);
}

inline Json load_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("constants cache: unparseable JSON in " + file.string() + ": " +
                                 e.what());
    }
    return j;
}

inline GroupContext context_from_json(const Json& j, std::size_t dimension_cap = 1000) {
    auto fail = [](const std::string& what) {
        throw std::runtime_error("constants cache: " + what);
    };
    if (!j.contains("format") || j.at("format").get<int>() != kCacheFormat)
        fail("unknown format version");
    if (!j.contains("ordering") || j.at("ordering").get<std::string>() != kOrderingTag)
        fail("basis ordering tag mismatch");
    int rank = j.at("rank").get<int>();
    int step = j.at("step").get<int>();
    int n = j.at("dimension").get<int>();

    HallBasis probe = HallBasis::build(rank, step, dimension_cap);
    if (probe.dimension() != n) fail("stored dimension disagrees with the basis");

    std::vector<std::vector<SparseVec>> sc(static_cast<std::size_t>(n),
                                           std::vector<SparseVec>(static_cast<std::size_t>(n)));
    for (const auto& e : j.at("structure")) {
        int i = e.at("i").get<int>(), jj = e.at("j").get<int>(), k = e.at("k").get<int>();
        if (i < 1 || i > n || jj < 1 || jj >= i || k < 1 || k > n)
            fail("structure entry out of range");
        Rational c = rational_from_json(e);
        sc[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(jj - 1)].emplace_back(k, c);
        sc[static_cast<std::size_t>(jj - 1)][static_cast<std::size_t>(i - 1)].emplace_back(k, -c);
    }
    std::vector<std::map<MultiIndex, SparseVec>> gsc(static_cast<std::size_t>(n));
    for (const auto& e : j.at("generalized")) {
        int i = e.at("i").get<int>(), k = e.at("k").get<int>();
        if (i < 1 || i > n || k < 1 || k > n) fail("generalized entry out of range");
        const Json& alpha = e.at("alpha");
        if (!alpha.is_array() || static_cast<int>(alpha.size()) != n)
            fail("generalized entry with bad alpha");
        MultiIndex a(static_cast<std::size_t>(n));
        for (std::size_t q = 0; q < alpha.size(); ++q) a.set(q + 1, alpha[q].get<std::uint32_t>());
        gsc[static_cast<std::size_t>(i - 1)][a].emplace_back(k, rational_from_json(e));
    }

    GroupContext ctx =
        GroupContext::assemble_preverified(rank, step, std::move(sc), std::move(gsc), dimension_cap);
    validate_context_tables(ctx);
    return ctx;
}

inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("EXTREMAL_LAB_CACHE")) return std::filesystem::path(env);
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"))
        return std::filesystem::path(xdg) / "extremal-lab";
    if (const char* home = std::getenv("HOME"))
        return std::filesystem::path(home) / ".cache" / "extremal-lab";
    return std::filesystem::path(".extremal-lab-cache");
}

inline std::filesystem::path cache_file_path(const std::filesystem::path& dir, int rank, int step) {
    return dir / ("constants_r" + std::to_string(rank) + "_s" + std::to_string(step) + ".json");
}

inline GroupContext load_or_build_context(int rank, int step, const std::filesystem::path& dir,
                                          std::size_t dimension_cap = 1000) {
    std::filesystem::path file = cache_file_path(dir, rank, step);
    if (std::filesystem::exists(file)) {
        Json j = load_json_file(file);
        GroupContext ctx = context_from_json(j, dimension_cap);
        if (ctx.rank() != rank || ctx.step() != step)
            throw std::runtime_error("constants cache: file does not match the requested group");
        return ctx;
    }
    GroupContext::Options opts;
    opts.dimension_cap = dimension_cap;
    GroupContext ctx = GroupContext::build(rank, step, opts);
    save_json_file(context_to_json(ctx), file);
    return ctx;
}

}  // namespace extremal

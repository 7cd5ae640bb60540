#pragma once

#include "extremal/hall_basis.hpp"
#include "extremal/polynomial.hpp"
#include "extremal/vector_field.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace extremal {

// Sparse vector over basis indices, sorted by index, nonzero entries only.
using SparseVec = std::vector<std::pair<int, Rational>>;

inline Rational sparse_entry(const SparseVec& v, int k) {
    for (const auto& [i, c] : v)
        if (i == k) return c;
    return Rational(0);
}

// All multi-indices over positions 1..weights.size() whose weighted degree
// is at most budget, in graded-lex order. Positions with weight > budget
// never appear.
inline std::vector<MultiIndex> enumerate_weighted_multi_indices(const std::vector<int>& weights,
                                                                int budget) {
    std::vector<MultiIndex> out;
    MultiIndex cur(weights.size());
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos > weights.size()) {
            out.push_back(cur);
            return;
        }
        int w = weights[pos - 1];
        for (int e = 0; e * w <= remaining; ++e) {
            cur.set(pos, static_cast<std::uint32_t>(e));
            self(self, pos + 1, remaining - e * w);
            if (w == 0) break; // defensive; weights are >= 1
        }
        cur.set(pos, 0);
    };
    rec(rec, 1, budget);
    std::sort(out.begin(), out.end());
    return out;
}

// A free nilpotent group realized on R^n: Hall basis, polynomial vector
// fields for every basis element, and the exact structure-constant tables
// read off from those fields.
//
// The generator fields follow the triangular polynomial realization: for
// a generator i, the component at position l is
//     (-1)^{|I(l)|} / I(l)!  x^{I(l)}
// whenever the chain of X_l starts at i (and zero otherwise). Composite
// fields are literal Lie brackets of their children. The coefficient of
// each [X_i, X_j] (and of every iterated bracket [X_i, X_alpha]) in the
// basis is read at the origin and certified by checking that the residual
// field vanishes identically; a nonzero residual aborts the build.
class GroupContext {
public:
    struct Options {
        std::size_t dimension_cap = 1000;
    };

    static GroupContext build(int rank, int step, const Options& opts) {
        GroupContext ctx;
        ctx.basis_ = HallBasis::build(rank, step, opts.dimension_cap);
        ctx.build_fields();
        ctx.build_structure_constants();
        ctx.build_generalized_constants();
        return ctx;
    }

    static GroupContext build(int rank, int step) { return build(rank, step, Options{}); }

    // Installs externally validated tables (used by the disk cache);
    // fields and basis are rebuilt, tables are taken as given. The caller
    // is responsible for having verified the tables.
    static GroupContext assemble_preverified(int rank, int step,
                                             std::vector<std::vector<SparseVec>> sc,
                                             std::vector<std::map<MultiIndex, SparseVec>> gsc,
                                             std::size_t dimension_cap = 1000) {
        GroupContext ctx;
        ctx.basis_ = HallBasis::build(rank, step, dimension_cap);
        ctx.build_fields();
        if (sc.size() != static_cast<std::size_t>(ctx.dimension()) ||
            gsc.size() != static_cast<std::size_t>(ctx.dimension()))
            throw std::invalid_argument("GroupContext: table size mismatch");
        ctx.sc_ = std::move(sc);
        ctx.gsc_ = std::move(gsc);
        return ctx;
    }

    const HallBasis& basis() const { return basis_; }
    int rank() const { return basis_.rank(); }
    int step() const { return basis_.step(); }
    int dimension() const { return basis_.dimension(); }

    const PolyVectorField& field(int i) const {
        if (i < 1 || i > dimension()) throw std::out_of_range("GroupContext::field");
        return fields_[static_cast<std::size_t>(i - 1)];
    }

    // c_{ij}^. with [X_i, X_j] = sum_k c_{ij}^k X_k.
    const SparseVec& structure_constants(int i, int j) const {
        if (i < 1 || i > dimension() || j < 1 || j > dimension())
            throw std::out_of_range("GroupContext::structure_constants");
        return sc_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    }

    // c_{i alpha}^. for the ascending-index iterated bracket [X_i, X_alpha].
    // Entries of weighted degree beyond the step vanish by nilpotency and
    // are not stored.
    const SparseVec& generalized_structure_constants(int i, const MultiIndex& alpha) const {
        if (i < 1 || i > dimension()) throw std::out_of_range("GroupContext::generalized_structure_constants");
        const auto& row = gsc_[static_cast<std::size_t>(i - 1)];
        auto it = row.find(alpha);
        return it == row.end() ? empty_ : it->second;
    }

    const std::map<MultiIndex, SparseVec>& generalized_row(int i) const {
        if (i < 1 || i > dimension()) throw std::out_of_range("GroupContext::generalized_row");
        return gsc_[static_cast<std::size_t>(i - 1)];
    }

    const std::vector<std::vector<SparseVec>>& structure_table() const { return sc_; }
    const std::vector<std::map<MultiIndex, SparseVec>>& generalized_table() const { return gsc_; }

private:
    void build_fields() {
        int n = dimension();
        fields_.assign(static_cast<std::size_t>(n), PolyVectorField(static_cast<std::size_t>(n)));
        for (int i = 1; i <= n; ++i) {
            const HallElement& e = basis_.element(i);
            PolyVectorField& f = fields_[static_cast<std::size_t>(i - 1)];
            if (e.is_generator()) {
                for (int l = 1; l <= n; ++l) {
                    if (basis_.element(l).chain_start != i) continue;
                    const MultiIndex& I = basis_.chain_multiplicity(l);
                    Rational c(1, I.factorial_product());
                    if (I.total_degree() % 2 == 1) c = -c;
                    f.component(static_cast<std::size_t>(l)).add_term(I, c);
                }
            } else {
                f = vf_bracket(fields_[static_cast<std::size_t>(e.left - 1)],
                               fields_[static_cast<std::size_t>(e.right - 1)]);
            }
        }
        // Frame property: X_l(0) = e_l.
        for (int l = 1; l <= n; ++l) {
            auto v = fields_[static_cast<std::size_t>(l - 1)].value_at_origin();
            for (int k = 1; k <= n; ++k)
                if (v[static_cast<std::size_t>(k - 1)] != Rational(k == l ? 1 : 0))
                    throw std::logic_error("GroupContext: field " + std::to_string(l) +
                                           " does not reduce to the unit frame at the origin");
        }
    }

    SparseVec read_at_origin(const PolyVectorField& f) const {
        SparseVec out;
        auto v = f.value_at_origin();
        for (int k = 1; k <= dimension(); ++k)
            if (v[static_cast<std::size_t>(k - 1)] != 0) out.emplace_back(k, v[static_cast<std::size_t>(k - 1)]);
        return out;
    }

    PolyVectorField span_combination(const SparseVec& coeffs) const {
        PolyVectorField acc(static_cast<std::size_t>(dimension()));
        for (const auto& [k, c] : coeffs) acc += c * fields_[static_cast<std::size_t>(k - 1)];
        return acc;
    }

    void certify_span(const PolyVectorField& f, const SparseVec& coeffs, const std::string& what) const {
        if (!(f - span_combination(coeffs)).is_zero())
            throw std::logic_error("GroupContext: residual field for " + what +
                                   " is nonzero; realization or ordering is inconsistent");
    }

    void build_structure_constants() {
        int n = dimension();
        sc_.assign(static_cast<std::size_t>(n), std::vector<SparseVec>(static_cast<std::size_t>(n)));
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j < i; ++j) {
                PolyVectorField b = vf_bracket(field(i), field(j));
                SparseVec c = read_at_origin(b);
                certify_span(b, c, "[X_" + std::to_string(i) + ", X_" + std::to_string(j) + "]");
                sc_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = c;
                SparseVec neg;
                neg.reserve(c.size());
                for (const auto& [k, v] : c) neg.emplace_back(k, -v);
                sc_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = std::move(neg);
            }
        }
    }

    void build_generalized_constants() {
        int n = dimension();
        gsc_.assign(static_cast<std::size_t>(n), {});
        std::vector<int> weights = basis_.degrees();
        auto alphas = enumerate_weighted_multi_indices(weights, step() - 1);
        for (int i = 1; i <= n; ++i) {
            int budget = step() - basis_.degree(i);
            std::map<MultiIndex, PolyVectorField> fold; // [X_i, X_alpha] as a field
            for (const auto& alpha : alphas) {
                if (static_cast<int>(alpha.weighted_degree(weights)) > budget) continue;
                PolyVectorField f(static_cast<std::size_t>(n));
                if (alpha.is_zero()) {
                    f = field(i);
                } else {
                    std::size_t u = alpha.leading_index();
                    MultiIndex prev = alpha;
                    prev.bump(u, -1);
                    f = vf_bracket(fold.at(prev), field(static_cast<int>(u)));
                }
                SparseVec c = read_at_origin(f);
                certify_span(f, c, "iterated bracket of X_" + std::to_string(i));
                if (!c.empty()) gsc_[static_cast<std::size_t>(i - 1)][alpha] = std::move(c);
                fold.emplace(alpha, std::move(f));
            }
        }
    }

    HallBasis basis_;
    std::vector<PolyVectorField> fields_;
    std::vector<std::vector<SparseVec>> sc_;
    std::vector<std::map<MultiIndex, SparseVec>> gsc_;
    inline static const SparseVec empty_{};
};

// Jacobi defect of the structure table on the triple (i, j, k):
// sum of cyclic contributions of [[X_i, X_j], X_k]; zero for a Lie algebra.
inline SparseVec jacobi_defect(const GroupContext& ctx, int i, int j, int k) {
    std::map<int, Rational> acc;
    auto add = [&](int a, int b, int c) {
        // [[X_a, X_b], X_c] = sum_m c_{ab}^m [X_m, X_c]
        for (const auto& [m, cab] : ctx.structure_constants(a, b))
            for (const auto& [l, cmc] : ctx.structure_constants(m, c)) acc[l] += cab * cmc;
    };
    add(i, j, k);
    add(j, k, i);
    add(k, i, j);
    SparseVec out;
    for (const auto& [l, v] : acc)
        if (v != 0) out.emplace_back(l, v);
    return out;
}

// Incremental fold [ ... [[X_i, X_q], X_{beta ascending}] ... ] in field
// space, memoized so identity sweeps over many beta share work.
class CommutatorFold {
public:
    explicit CommutatorFold(const GroupContext& ctx) : ctx_(ctx) {}

    // [X_i, X_alpha] with the ascending-index bracketing convention.
    const PolyVectorField& iterated(int i, const MultiIndex& alpha) {
        auto key = std::make_pair(i, alpha);
        auto it = single_.find(key);
        if (it != single_.end()) return it->second;
        PolyVectorField f(static_cast<std::size_t>(ctx_.dimension()));
        if (alpha.is_zero()) {
            f = ctx_.field(i);
        } else {
            std::size_t u = alpha.leading_index();
            MultiIndex prev = alpha;
            prev.bump(u, -1);
            const PolyVectorField& base = iterated(i, prev);
            if (!base.is_zero()) f = vf_bracket(base, ctx_.field(static_cast<int>(u)));
        }
        return single_.emplace(std::move(key), std::move(f)).first->second;
    }

    // [[X_i, X_q], X_beta], beta folded in ascending index order.
    const PolyVectorField& double_fold(int i, int q, const MultiIndex& beta) {
        auto key = std::make_tuple(i, q, beta);
        auto it = double_.find(key);
        if (it != double_.end()) return it->second;
        PolyVectorField f(static_cast<std::size_t>(ctx_.dimension()));
        if (beta.is_zero()) {
            f = vf_bracket(ctx_.field(i), ctx_.field(q));
        } else {
            std::size_t u = beta.leading_index();
            MultiIndex prev = beta;
            prev.bump(u, -1);
            const PolyVectorField& base = double_fold(i, q, prev);
            if (!base.is_zero()) f = vf_bracket(base, ctx_.field(static_cast<int>(u)));
        }
        return double_.emplace(std::move(key), std::move(f)).first->second;
    }

private:
    const GroupContext& ctx_;
    std::map<std::pair<int, MultiIndex>, PolyVectorField> single_;
    std::map<std::tuple<int, int, MultiIndex>, PolyVectorField> double_;
};

// Expansion of a double bracket against the chain elements rooted at a
// generator q:
//   [[X_i, X_q], X_beta] = sum_l  beta! / ((beta - I(l))! I(l)!) [X_i, X_{beta - I(l) + e_l}]
// where l ranges over basis elements whose chain starts at q with
// I(l) <= beta. Both sides are expanded as concrete vector fields.
inline bool check_commutator_expansion(const GroupContext& ctx, int i, int q,
                                       const MultiIndex& beta, CommutatorFold& fold) {
    if (q < 1 || q > ctx.rank()) throw std::invalid_argument("check_commutator_expansion: q must be a generator");
    const PolyVectorField& lhs = fold.double_fold(i, q, beta);

    PolyVectorField rhs(static_cast<std::size_t>(ctx.dimension()));
    for (int l = 1; l <= ctx.dimension(); ++l) {
        if (ctx.basis().element(l).chain_start != q) continue;
        const MultiIndex& I = ctx.basis().chain_multiplicity(l);
        if (!beta.dominates(I)) continue;
        MultiIndex rest = *beta.minus(I);
        Integer num = 1;
        // beta! / (beta - I)! accumulated coordinate-wise as falling factorials.
        for (std::size_t p = 1; p <= beta.dimension(); ++p)
            for (std::uint32_t e = rest[p]; e < beta[p]; ++e) num *= (e + 1);
        Rational coeff(num, I.factorial_product());
        MultiIndex arg = rest;
        arg.bump(static_cast<std::size_t>(l), +1);
        const PolyVectorField& term = fold.iterated(i, arg);
        if (!term.is_zero()) rhs += coeff * term;
    }
    return lhs == rhs;
}

inline bool check_commutator_expansion(const GroupContext& ctx, int i, int q, const MultiIndex& beta) {
    CommutatorFold fold(ctx);
    return check_commutator_expansion(ctx, i, q, beta, fold);
}

// Time-t flow of the field X_l from the symbolic start point x, returned
// as n polynomials in (x_1..x_n, t) with t at position n+1. The system is
// triangular: the component at position m only involves positions below m,
// so one pass of substitution and integration in increasing m solves it
// exactly.
inline std::vector<Polynomial> symbolic_flow(const GroupContext& ctx, int l) {
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    std::size_t dim = n + 1;
    std::vector<Polynomial> y;
    y.reserve(n);
    std::vector<Polynomial> args(n + 1, Polynomial(dim));
    args[n] = Polynomial::variable(dim, n + 1); // t substitutes for itself
    const PolyVectorField& X = ctx.field(l);
    for (std::size_t m = 1; m <= n; ++m) {
        const Polynomial& rhs_x = X.component(m);
        for (const auto& [a, c] : rhs_x.terms())
            if (a.leading_index() >= m)
                throw std::logic_error("symbolic_flow: component depends on an unsolved coordinate");
        // Lift the component to (x, t) variables, then substitute the
        // already-solved flow components.
        Polynomial rhs(dim);
        for (const auto& [a, c] : rhs_x.terms()) {
            std::vector<std::uint32_t> e(a.exponents());
            e.push_back(0);
            rhs.add_term(MultiIndex(std::move(e)), c);
        }
        Polynomial ym = Polynomial::variable(dim, m) + rhs.substitute(args).integral(dim);
        args[m - 1] = ym;
        y.push_back(std::move(ym));
    }
    return y;
}

// Composes the generator flows e^{x_1 X_1} ... e^{x_n X_n} applied to the
// origin and checks that the resulting map is the identity of R^n, i.e.
// that the realization uses exponential coordinates of the second kind.
inline bool check_exponential_coordinates(const GroupContext& ctx) {
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    std::vector<Polynomial> point(n, Polynomial(n)); // starts at the origin
    for (std::size_t l = n; l >= 1; --l) {
        auto flow = symbolic_flow(ctx, static_cast<int>(l));
        std::vector<Polynomial> args;
        args.reserve(n + 1);
        for (std::size_t j = 0; j < n; ++j) args.push_back(point[j]);
        args.push_back(Polynomial::variable(n, l)); // flow time is x_l
        for (std::size_t m = 0; m < n; ++m) point[m] = flow[m].substitute(args);
    }
    for (std::size_t m = 1; m <= n; ++m)
        if (point[m - 1] != Polynomial::variable(n, m)) return false;
    return true;
}

} // namespace extremal

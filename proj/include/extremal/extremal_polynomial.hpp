#pragma once

#include "extremal/group_context.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace extremal {

// Bilinear table behind the family v -> P_i^v: cell (alpha, k) holds
//     (-1)^{|alpha|} / alpha!  c_{i alpha}^k
// so that P_i^v(x) = sum_alpha x^alpha sum_k cell(alpha, k) v_k.
// Cells exist only when degree(i) + weighted degree(alpha) <= step, and
// every stored k satisfies degree(k) = degree(i) + weighted degree(alpha).
struct ExtremalTable {
    int i = 0;
    std::size_t dim = 0;
    std::map<MultiIndex, SparseVec> cells;
};

inline ExtremalTable extremal_polynomial(const GroupContext& ctx, int i) {
    if (i < 1 || i > ctx.dimension()) throw std::out_of_range("extremal_polynomial: bad index");
    ExtremalTable t;
    t.i = i;
    t.dim = static_cast<std::size_t>(ctx.dimension());
    for (const auto& [alpha, cs] : ctx.generalized_row(i)) {
        Rational f(1, alpha.factorial_product());
        if (alpha.total_degree() % 2 == 1) f = -f;
        SparseVec row;
        row.reserve(cs.size());
        for (const auto& [k, c] : cs) row.emplace_back(k, f * c);
        t.cells.emplace(alpha, std::move(row));
    }
    return t;
}

inline std::vector<ExtremalTable> build_extremal_family(const GroupContext& ctx) {
    std::vector<ExtremalTable> fam;
    fam.reserve(static_cast<std::size_t>(ctx.dimension()));
    for (int i = 1; i <= ctx.dimension(); ++i) fam.push_back(extremal_polynomial(ctx, i));
    return fam;
}

// P_i^v for a concrete covector v.
inline Polynomial specialize_covector(const ExtremalTable& t, const std::vector<Rational>& v) {
    if (v.size() != t.dim) throw std::invalid_argument("specialize_covector: covector dimension mismatch");
    Polynomial p(t.dim);
    for (const auto& [alpha, row] : t.cells) {
        Rational c = 0;
        for (const auto& [k, w] : row) c += w * v[static_cast<std::size_t>(k - 1)];
        p.add_term(alpha, c);
    }
    return p;
}

// Coefficient polynomial of v_k inside P_i^v, i.e. P_i^{e_k}.
inline Polynomial covector_slice(const ExtremalTable& t, int k) {
    Polynomial p(t.dim);
    for (const auto& [alpha, row] : t.cells) p.add_term(alpha, sparse_entry(row, k));
    return p;
}

// X_i P_j^v = sum_k c_{ij}^k P_k^v, checked as exact polynomial identity.
inline bool check_derivative_identity(const GroupContext& ctx, const std::vector<ExtremalTable>& family,
                                      int i, int j, const std::vector<Rational>& v) {
    Polynomial lhs = ctx.field(i).apply(specialize_covector(family.at(static_cast<std::size_t>(j - 1)), v));
    Polynomial rhs(static_cast<std::size_t>(ctx.dimension()));
    for (const auto& [k, c] : ctx.structure_constants(i, j))
        rhs += c * specialize_covector(family.at(static_cast<std::size_t>(k - 1)), v);
    return lhs == rhs;
}

struct NontrivialityReport {
    std::vector<int> vanishing_first_layer;  // generator indices i with P_i^v identically zero
    bool all_first_layer_zero = false;
    bool second_layer_all_zero = false;
};

// Which generator polynomials vanish identically for this v, with the two
// structural consequences enforced: all of them vanish only for v = 0, and
// a vanishing second layer forces every coordinate of degree >= 2 to be 0.
inline NontrivialityReport nontriviality_report(const GroupContext& ctx,
                                                const std::vector<ExtremalTable>& family,
                                                const std::vector<Rational>& v) {
    NontrivialityReport rep;
    int r = ctx.rank();
    for (int i = 1; i <= r; ++i)
        if (specialize_covector(family.at(static_cast<std::size_t>(i - 1)), v).is_zero())
            rep.vanishing_first_layer.push_back(i);
    rep.all_first_layer_zero = static_cast<int>(rep.vanishing_first_layer.size()) == r;

    if (rep.all_first_layer_zero) {
        for (const auto& vi : v)
            if (vi != 0)
                throw std::logic_error("nontriviality_report: every first-layer polynomial vanished for a nonzero covector");
    }

    if (ctx.step() >= 2) {
        int start = ctx.basis().layer_start(2);
        int count = ctx.basis().layer_dims()[1];
        rep.second_layer_all_zero = true;
        for (int i = start; i < start + count; ++i)
            if (!specialize_covector(family.at(static_cast<std::size_t>(i - 1)), v).is_zero()) {
                rep.second_layer_all_zero = false;
                break;
            }
        if (rep.second_layer_all_zero) {
            for (int k = r + 1; k <= ctx.dimension(); ++k)
                if (v[static_cast<std::size_t>(k - 1)] != 0)
                    throw std::logic_error("nontriviality_report: second layer vanished but a higher coordinate of v is nonzero");
        }
    }
    return rep;
}

// Defining polynomials of the variety where an abnormal curve with
// covector v must live: first layer only, or first and second layer for
// the Goh-strengthened variety.
inline std::vector<Polynomial> abnormal_variety_generators(const GroupContext& ctx,
                                                           const std::vector<ExtremalTable>& family,
                                                           const std::vector<Rational>& v) {
    std::vector<Polynomial> gen;
    for (int i = 1; i <= ctx.rank(); ++i)
        gen.push_back(specialize_covector(family.at(static_cast<std::size_t>(i - 1)), v));
    return gen;
}

inline std::vector<Polynomial> goh_variety_generators(const GroupContext& ctx,
                                                      const std::vector<ExtremalTable>& family,
                                                      const std::vector<Rational>& v) {
    if (ctx.step() < 2) throw std::invalid_argument("goh_variety_generators: needs step >= 2");
    std::vector<Polynomial> gen;
    int top = ctx.basis().layer_start(2) + ctx.basis().layer_dims()[1];
    for (int i = 1; i < top; ++i)
        gen.push_back(specialize_covector(family.at(static_cast<std::size_t>(i - 1)), v));
    return gen;
}

// For v vanishing on the first layer, each derivative X_k P_i^v with
// k, i <= rank lies in the span of the second-layer family; returned as
// an exact check of that expansion.
inline bool check_second_layer_span(const GroupContext& ctx, const std::vector<ExtremalTable>& family,
                                    const std::vector<Rational>& v) {
    for (int i = 1; i <= ctx.rank(); ++i)
        if (v[static_cast<std::size_t>(i - 1)] != 0)
            throw std::invalid_argument("check_second_layer_span: v must vanish on the first layer");
    for (int k = 1; k <= ctx.rank(); ++k) {
        for (int i = 1; i <= ctx.rank(); ++i) {
            Polynomial lhs = ctx.field(k).apply(specialize_covector(family.at(static_cast<std::size_t>(i - 1)), v));
            Polynomial rhs(static_cast<std::size_t>(ctx.dimension()));
            for (const auto& [l, c] : ctx.structure_constants(k, i)) {
                if (ctx.basis().degree(l) != 2)
                    throw std::logic_error("check_second_layer_span: bracket of two generators left the second layer");
                rhs += c * specialize_covector(family.at(static_cast<std::size_t>(l - 1)), v);
            }
            if (lhs != rhs) return false;
        }
    }
    return true;
}

} // namespace extremal

#pragma once

#include "extremal/curves.hpp"
#include "extremal/extremal_polynomial.hpp"
#include "extremal/group_context.hpp"
#include "extremal/linalg.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extremal {

// ---------------------------------------------------------------------------
// A stratified group presented as a quotient of the free group: a selection
// S = {s_1 < ... < s_m} of basis indices whose images span the quotient, and
// an n x m matrix zeta with  (projection of Y_i) = sum_a zeta_{ia} Xbar_a.
// Validation derives the induced structure constants
//     cbar_{ab}^q = sum_k c_{s_a s_b}^k zeta_{kq}
// and checks that zeta really is a Lie algebra homomorphism.
// ---------------------------------------------------------------------------

class QuotientGroup {
public:
    QuotientGroup(const GroupContext& free_ctx, std::vector<int> selected, RatMat zeta)
        : free_(&free_ctx), s_(std::move(selected)), zeta_(std::move(zeta)) {
        const HallBasis& b = free_ctx.basis();
        int n = free_ctx.dimension();
        int r = free_ctx.rank();
        int m = static_cast<int>(s_.size());
        if (m < r || m > n) throw std::invalid_argument("QuotientGroup: bad selection size");
        for (int a = 0; a < m; ++a) {
            if (s_[static_cast<std::size_t>(a)] < 1 || s_[static_cast<std::size_t>(a)] > n)
                throw std::invalid_argument("QuotientGroup: selection index out of range");
            if (a > 0 && s_[static_cast<std::size_t>(a)] <= s_[static_cast<std::size_t>(a - 1)])
                throw std::invalid_argument("QuotientGroup: selection must be strictly increasing");
        }
        for (int a = 0; a < r; ++a)
            if (s_[static_cast<std::size_t>(a)] != a + 1)
                throw std::invalid_argument("QuotientGroup: selection must start with the generators");
        if (static_cast<int>(zeta_.size()) != n)
            throw std::invalid_argument("QuotientGroup: zeta must have one row per free basis element");
        for (const auto& row : zeta_)
            if (static_cast<int>(row.size()) != m)
                throw std::invalid_argument("QuotientGroup: zeta must have one column per selected element");

        for (int a = 1; a <= m; ++a)
            for (int q = 1; q <= m; ++q) {
                const Rational& z = zeta_[static_cast<std::size_t>(s_[static_cast<std::size_t>(a - 1)] - 1)]
                                         [static_cast<std::size_t>(q - 1)];
                if (z != ((a == q) ? 1 : 0))
                    throw std::invalid_argument("QuotientGroup: selected rows of zeta must be unit rows");
            }
        for (int i = 1; i <= n; ++i)
            for (int q = 1; q <= m; ++q)
                if (zeta_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(q - 1)] != 0 &&
                    b.degree(i) != b.degree(s_[static_cast<std::size_t>(q - 1)]))
                    throw std::invalid_argument("QuotientGroup: zeta mixes layers");

        for (int a = 1; a <= m; ++a)
            for (int bq = 1; bq <= m; ++bq) {
                SparseVec cb;
                std::vector<Rational> acc(static_cast<std::size_t>(m), Rational(0));
                for (const auto& [k, c] :
                     free_ctx.structure_constants(s_[static_cast<std::size_t>(a - 1)],
                                                  s_[static_cast<std::size_t>(bq - 1)]))
                    for (int q = 1; q <= m; ++q)
                        acc[static_cast<std::size_t>(q - 1)] +=
                            c * zeta_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(q - 1)];
                for (int q = 1; q <= m; ++q)
                    if (acc[static_cast<std::size_t>(q - 1)] != 0)
                        cb.emplace_back(q, acc[static_cast<std::size_t>(q - 1)]);
                if (!cb.empty()) induced_[{a, bq}] = std::move(cb);
            }

        // zeta must push every free bracket onto the induced bracket of the
        // pushed vectors.
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                std::vector<Rational> lhs(static_cast<std::size_t>(m), Rational(0));
                for (const auto& [k, c] : free_ctx.structure_constants(i, j))
                    for (int q = 1; q <= m; ++q)
                        lhs[static_cast<std::size_t>(q - 1)] +=
                            c * zeta_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(q - 1)];
                std::vector<Rational> rhs(static_cast<std::size_t>(m), Rational(0));
                for (int a = 1; a <= m; ++a) {
                    const Rational& zi =
                        zeta_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(a - 1)];
                    if (zi == 0) continue;
                    for (int bq = 1; bq <= m; ++bq) {
                        const Rational& zj =
                            zeta_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(bq - 1)];
                        if (zj == 0) continue;
                        for (const auto& [q, c] : induced(a, bq))
                            rhs[static_cast<std::size_t>(q - 1)] += zi * zj * c;
                    }
                }
                if (lhs != rhs)
                    throw std::invalid_argument(
                        "QuotientGroup: zeta is not a homomorphism at bracket pair (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
            }
    }

    const GroupContext& free_group() const { return *free_; }
    int rank() const { return free_->rank(); }
    int dimension() const { return static_cast<int>(s_.size()); }
    const std::vector<int>& selected() const { return s_; }
    const RatMat& zeta() const { return zeta_; }
    int degree(int a) const { return free_->basis().degree(s_.at(static_cast<std::size_t>(a - 1))); }

    const SparseVec& induced(int a, int b) const {
        auto it = induced_.find({a, b});
        if (it == induced_.end()) {
            static const SparseVec empty;
            return empty;
        }
        return it->second;
    }

private:
    const GroupContext* free_;
    std::vector<int> s_;
    RatMat zeta_;
    std::map<std::pair<int, int>, SparseVec> induced_;
};

inline QuotientGroup build_quotient(const GroupContext& free_ctx, std::vector<int> selected,
                                    RatMat zeta) {
    return QuotientGroup(free_ctx, std::move(selected), std::move(zeta));
}

inline QuotientGroup identity_quotient(const GroupContext& ctx) {
    int n = ctx.dimension();
    std::vector<int> s(static_cast<std::size_t>(n));
    RatMat z(static_cast<std::size_t>(n), RatVec(static_cast<std::size_t>(n), Rational(0)));
    for (int i = 1; i <= n; ++i) {
        s[static_cast<std::size_t>(i - 1)] = i;
        z[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)] = 1;
    }
    return QuotientGroup(ctx, std::move(s), std::move(z));
}

// Covector pullback: a quotient covector lambda0 in R^m determines the free
// covector v_i = sum_a zeta_{ia} (lambda0)_a (so v agrees with lambda0 on the
// selected slots).
inline RatVec pullback_covector(const QuotientGroup& q, const RatVec& lambda0) {
    std::size_t m = static_cast<std::size_t>(q.dimension());
    if (lambda0.size() != m) throw std::invalid_argument("pullback_covector: dimension mismatch");
    std::size_t n = static_cast<std::size_t>(q.free_group().dimension());
    RatVec v(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < m; ++a) v[i] += q.zeta()[i][a] * lambda0[a];
    return v;
}

// Lifting preserves controls: the lift of the quotient curve driven by h is
// the free development of the same h.
inline DevelopedCurve lift_curve(const QuotientGroup& q, const ControlLaw& law) {
    return develop(q.free_group(), law);
}

// Dual characterization in the quotient: with v pulled back from lambda0, the
// functions lambda_a(t) = P_{s_a}^v(kappa(t)) along the lift kappa must solve
// the quotient's own dual system
//     dlambda_a = -sum_q sum_{j<=r} cbar_{aj}^q h_j lambda_q,
// starting at lambda0.
inline bool quotient_dual_check(const QuotientGroup& q, const ExtremalFamily& family,
                                const ControlLaw& law, const RatVec& lambda0) {
    std::size_t m = static_cast<std::size_t>(q.dimension());
    if (lambda0.size() != m) throw std::invalid_argument("quotient_dual_check: dimension mismatch");
    RatVec v = pullback_covector(q, lambda0);
    for (std::size_t a = 0; a < m; ++a)
        if (v[static_cast<std::size_t>(q.selected()[a] - 1)] != lambda0[a])
            throw std::logic_error("quotient_dual_check: pullback lost the selected coordinates");

    DevelopedCurve curve = lift_curve(q, law);
    DualCurve dual = dual_from_covector(family, curve, v);

    int r = q.rank();
    RatVec expect_start = lambda0;
    for (std::size_t p = 0; p < dual.pieces().size(); ++p) {
        const PathPiece& dp = dual.pieces()[p];
        std::vector<UniPoly> lam(m);
        for (std::size_t a = 0; a < m; ++a)
            lam[a] = dp.x[static_cast<std::size_t>(q.selected()[a] - 1)];
        for (std::size_t a = 0; a < m; ++a)
            if (lam[a].evaluate(Rational(0)) != expect_start[a]) return false;
        for (int a = 1; a <= static_cast<int>(m); ++a) {
            UniPoly res = lam[static_cast<std::size_t>(a - 1)].derivative();
            for (int j = 1; j <= r; ++j) {
                UniPoly acc;
                for (const auto& [qi, c] : q.induced(a, j))
                    acc += lam[static_cast<std::size_t>(qi - 1)] * c;
                if (!(acc == UniPoly()))
                    res += curve.law.pieces()[p].h[static_cast<std::size_t>(j - 1)] * acc;
            }
            if (!(res == UniPoly())) return false;
        }
        Rational len = dp.t1 - dp.t0;
        for (std::size_t a = 0; a < m; ++a) expect_start[a] = lam[a].evaluate(len);
    }
    return true;
}

// Exact content of the covector pullback property: the free dual of the
// pulled-back covector coincides componentwise with the zeta-combination of
// the selected dual components.
inline bool check_pullback_compatibility(const QuotientGroup& q, const ExtremalFamily& family,
                                         const ControlLaw& law, const RatVec& lambda0) {
    RatVec v = pullback_covector(q, lambda0);
    DevelopedCurve curve = lift_curve(q, law);
    DualCurve dual = dual_from_covector(family, curve, v);
    std::size_t n = dual.dimension();
    std::size_t m = static_cast<std::size_t>(q.dimension());
    for (const auto& dp : dual.pieces())
        for (std::size_t i = 0; i < n; ++i) {
            UniPoly mu;
            for (std::size_t a = 0; a < m; ++a) {
                const Rational& z = q.zeta()[i][a];
                if (z != 0) mu += dp.x[static_cast<std::size_t>(q.selected()[a] - 1)] * z;
            }
            if (!(mu == dp.x[i])) return false;
        }
    return true;
}

// Nullspace over lambda0 of the abnormality conditions for the lift,
// expressed through the pullback.
inline std::vector<RatVec> find_quotient_abnormal_covectors(const QuotientGroup& q,
                                                            const ExtremalFamily& family,
                                                            const ControlLaw& law) {
    DevelopedCurve curve = lift_curve(q, law);
    CurveLinearSystem sys = covector_conditions(family, curve, q.rank(), Rational(0));
    std::size_t n = family.size();
    std::size_t m = static_cast<std::size_t>(q.dimension());
    RatMat contracted;
    contracted.reserve(sys.m.size());
    for (const auto& row : sys.m) {
        RatVec r2(m, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (row[i] == 0) continue;
            for (std::size_t a = 0; a < m; ++a) r2[a] += row[i] * q.zeta()[i][a];
        }
        contracted.push_back(std::move(r2));
    }
    return nullspace_basis(contracted, m);
}

}  // namespace extremal

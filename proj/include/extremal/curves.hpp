#pragma once

#include "extremal/extremal_polynomial.hpp"
#include "extremal/group_context.hpp"
#include "extremal/linalg.hpp"
#include "extremal/univariate.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace extremal {

using ExtremalFamily = std::vector<ExtremalTable>;

// ---------------------------------------------------------------------------
// Controls: piecewise-polynomial coefficient functions h_1..h_r on [0, 1].
// Each piece stores its polynomials in local time u = t - t0.
// ---------------------------------------------------------------------------

struct ControlPiece {
    Rational t0, t1;
    std::vector<UniPoly> h;
};

class ControlLaw {
public:
    ControlLaw(int rank, std::vector<ControlPiece> pieces)
        : rank_(rank), pieces_(std::move(pieces)) {
        if (rank_ < 1) throw std::invalid_argument("ControlLaw: rank must be >= 1");
        if (pieces_.empty()) throw std::invalid_argument("ControlLaw: no pieces");
        if (pieces_.front().t0 != 0 || pieces_.back().t1 != 1)
            throw std::invalid_argument("ControlLaw: pieces must cover [0, 1]");
        for (std::size_t p = 0; p < pieces_.size(); ++p) {
            if (!(pieces_[p].t0 < pieces_[p].t1))
                throw std::invalid_argument("ControlLaw: pieces must have positive length");
            if (p + 1 < pieces_.size() && pieces_[p].t1 != pieces_[p + 1].t0)
                throw std::invalid_argument("ControlLaw: pieces must be contiguous");
            if (static_cast<int>(pieces_[p].h.size()) != rank_)
                throw std::invalid_argument("ControlLaw: control count differs from rank");
        }
    }

    static ControlLaw single(std::vector<UniPoly> h) {
        int r = static_cast<int>(h.size());
        std::vector<ControlPiece> ps;
        ps.push_back(ControlPiece{Rational(0), Rational(1), std::move(h)});
        return ControlLaw(r, std::move(ps));
    }

    int rank() const { return rank_; }
    const std::vector<ControlPiece>& pieces() const { return pieces_; }

    std::size_t piece_index_at(const Rational& t) const {
        if (t < 0 || t > 1) throw std::out_of_range("ControlLaw: time outside [0, 1]");
        for (std::size_t p = 0; p < pieces_.size(); ++p)
            if (t <= pieces_[p].t1) return p;
        return pieces_.size() - 1;
    }

    std::vector<Rational> evaluate(const Rational& t) const {
        const ControlPiece& pc = pieces_[piece_index_at(t)];
        std::vector<Rational> out;
        out.reserve(pc.h.size());
        for (const auto& hj : pc.h) out.push_back(hj.evaluate(t - pc.t0));
        return out;
    }

    int max_degree() const {
        int d = 0;
        for (const auto& pc : pieces_)
            for (const auto& hj : pc.h) d = std::max(d, hj.degree());
        return d;
    }

private:
    int rank_;
    std::vector<ControlPiece> pieces_;
};

// ---------------------------------------------------------------------------
// Piecewise-polynomial curves in R^n (shared by paths and dual curves).
// ---------------------------------------------------------------------------

struct PathPiece {
    Rational t0, t1;
    std::vector<UniPoly> x;

    friend bool operator==(const PathPiece& a, const PathPiece& b) {
        return a.t0 == b.t0 && a.t1 == b.t1 && a.x == b.x;
    }
};

class PiecewisePath {
public:
    PiecewisePath() = default;

    explicit PiecewisePath(std::vector<PathPiece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw std::invalid_argument("PiecewisePath: no pieces");
        for (std::size_t p = 0; p < pieces_.size(); ++p) {
            if (!(pieces_[p].t0 < pieces_[p].t1))
                throw std::invalid_argument("PiecewisePath: pieces must have positive length");
            if (p + 1 < pieces_.size() && pieces_[p].t1 != pieces_[p + 1].t0)
                throw std::invalid_argument("PiecewisePath: pieces must be contiguous");
            if (pieces_[p].x.size() != pieces_.front().x.size())
                throw std::invalid_argument("PiecewisePath: component count differs between pieces");
        }
    }

    const std::vector<PathPiece>& pieces() const { return pieces_; }
    std::size_t dimension() const { return pieces_.empty() ? 0 : pieces_.front().x.size(); }

    std::size_t piece_index_at(const Rational& t) const {
        if (pieces_.empty() || t < pieces_.front().t0 || t > pieces_.back().t1)
            throw std::out_of_range("PiecewisePath: time outside the curve's span");
        for (std::size_t p = 0; p < pieces_.size(); ++p)
            if (t <= pieces_[p].t1) return p;
        return pieces_.size() - 1;
    }

    std::vector<Rational> evaluate(const Rational& t) const {
        const PathPiece& pp = pieces_[piece_index_at(t)];
        std::vector<Rational> out;
        out.reserve(pp.x.size());
        for (const auto& xk : pp.x) out.push_back(xk.evaluate(t - pp.t0));
        return out;
    }

    std::vector<Rational> start_value() const { return evaluate(pieces_.front().t0); }
    std::vector<Rational> end_value() const { return evaluate(pieces_.back().t1); }

    friend bool operator==(const PiecewisePath& a, const PiecewisePath& b) {
        return a.pieces_ == b.pieces_;
    }

private:
    std::vector<PathPiece> pieces_;
};

using DualCurve = PiecewisePath;

struct DevelopedCurve {
    ControlLaw law;
    PiecewisePath path;
};

// Powers of one piece's components, grown on demand. The referenced vector
// must stay in place while the cache is alive.
class PiecePowers {
public:
    explicit PiecePowers(const std::vector<UniPoly>& x) : x_(x), pw_(x.size()) {}

    const UniPoly& power(std::size_t k, std::uint32_t e) {
        auto& row = pw_.at(k - 1);
        if (row.empty()) row.push_back(UniPoly::constant(Rational(1)));
        while (row.size() <= e) row.push_back(row.back() * x_[k - 1]);
        return row[e];
    }

    UniPoly monomial(const MultiIndex& a) {
        UniPoly m = UniPoly::constant(Rational(1));
        for (std::size_t k = 1; k <= x_.size(); ++k)
            if (a[k] != 0) m = m * power(k, a[k]);
        return m;
    }

private:
    const std::vector<UniPoly>& x_;
    std::vector<std::vector<UniPoly>> pw_;
};

inline UniPoly compose_on_piece(const Polynomial& p, PiecePowers& pw) {
    UniPoly r;
    for (const auto& [a, c] : p.terms()) r += pw.monomial(a) * c;
    return r;
}

// ---------------------------------------------------------------------------
// Development: the horizontal curve from the origin driven by the controls,
//     dgamma_l = h_{j(l)} * sign / I(l)! * gamma^{I(l)},   j(l) = chain start,
// integrated exactly in ascending index order (each I(l) only touches
// earlier components).
// ---------------------------------------------------------------------------

inline DevelopedCurve develop(const GroupContext& ctx, const ControlLaw& law) {
    if (law.rank() != ctx.rank())
        throw std::invalid_argument("develop: control rank differs from group rank");
    const HallBasis& b = ctx.basis();
    std::size_t n = static_cast<std::size_t>(ctx.dimension());

    std::vector<Rational> x0(n, Rational(0));
    std::vector<PathPiece> out;
    out.reserve(law.pieces().size());
    for (const auto& pc : law.pieces()) {
        PathPiece pp{pc.t0, pc.t1, std::vector<UniPoly>(n)};
        PiecePowers pw(pp.x);
        for (int l = 1; l <= static_cast<int>(n); ++l) {
            int j = b.element(l).chain_start;
            const MultiIndex& mult = b.chain_multiplicity(l);
            Rational c = (mult.total_degree() % 2 == 0) ? Rational(1) : Rational(-1);
            c /= Rational(mult.factorial_product());
            UniPoly rhs = pc.h[static_cast<std::size_t>(j - 1)] * c;
            if (!mult.is_zero()) rhs = rhs * pw.monomial(mult);
            pp.x[static_cast<std::size_t>(l - 1)] =
                rhs.antiderivative() + UniPoly::constant(x0[static_cast<std::size_t>(l - 1)]);
        }
        Rational len = pc.t1 - pc.t0;
        for (std::size_t k = 0; k < n; ++k) x0[k] = pp.x[k].evaluate(len);
        out.push_back(std::move(pp));
    }
    return DevelopedCurve{law, PiecewisePath(std::move(out))};
}

// Dual curve lambda_i(t) = P_i^{v0}(gamma(t)) read off the extremal tables.
inline DualCurve dual_from_covector(const ExtremalFamily& family, const DevelopedCurve& curve,
                                    const RatVec& v0) {
    std::size_t n = curve.path.dimension();
    if (family.size() != n || v0.size() != n)
        throw std::invalid_argument("dual_from_covector: dimension mismatch");
    std::vector<Polynomial> spec;
    spec.reserve(n);
    for (std::size_t i = 0; i < n; ++i) spec.push_back(specialize_covector(family[i], v0));

    std::vector<PathPiece> out;
    out.reserve(curve.path.pieces().size());
    for (const auto& pp : curve.path.pieces()) {
        PiecePowers pw(pp.x);
        PathPiece dp{pp.t0, pp.t1, std::vector<UniPoly>(n)};
        for (std::size_t i = 0; i < n; ++i) dp.x[i] = compose_on_piece(spec[i], pw);
        out.push_back(std::move(dp));
    }
    return DualCurve(std::move(out));
}

// ---------------------------------------------------------------------------
// Adjoint system  dlambda_i = -sum_k sum_{j<=r} c_{ij}^k h_j lambda_k,
// lambda(0) = v0, solved per piece by formal power-series (Picard) iteration.
// The layered grading makes the iteration stationary after at most `step`
// rounds; the result is certified a posteriori by exact residual substitution.
// ---------------------------------------------------------------------------

inline DualCurve adjoint_integrate(const GroupContext& ctx, const DevelopedCurve& curve,
                                   const RatVec& v0) {
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    if (v0.size() != n) throw std::invalid_argument("adjoint_integrate: covector dimension mismatch");
    int r = ctx.rank();

    auto bracket_sum = [&](const std::vector<UniPoly>& lam, int i, int j) {
        UniPoly acc;
        for (const auto& [k, c] : ctx.structure_constants(i, j))
            acc += lam[static_cast<std::size_t>(k - 1)] * c;
        return acc;
    };

    RatVec lam0 = v0;
    std::vector<PathPiece> out;
    out.reserve(curve.law.pieces().size());
    for (const auto& pc : curve.law.pieces()) {
        std::vector<UniPoly> cur(n);
        for (std::size_t i = 0; i < n; ++i) cur[i] = UniPoly::constant(lam0[i]);
        bool stable = false;
        for (int round = 0; round <= ctx.step() + 1 && !stable; ++round) {
            std::vector<UniPoly> next(n);
            for (int i = 1; i <= static_cast<int>(n); ++i) {
                UniPoly rhs;
                for (int j = 1; j <= r; ++j) {
                    UniPoly acc = bracket_sum(cur, i, j);
                    if (!(acc == UniPoly())) rhs -= pc.h[static_cast<std::size_t>(j - 1)] * acc;
                }
                next[static_cast<std::size_t>(i - 1)] =
                    rhs.antiderivative() + UniPoly::constant(lam0[static_cast<std::size_t>(i - 1)]);
            }
            stable = next == cur;
            cur = std::move(next);
        }
        if (!stable) throw std::logic_error("adjoint_integrate: power series did not stabilize");
        for (int i = 1; i <= static_cast<int>(n); ++i) {
            UniPoly res = cur[static_cast<std::size_t>(i - 1)].derivative();
            for (int j = 1; j <= r; ++j) {
                UniPoly acc = bracket_sum(cur, i, j);
                if (!(acc == UniPoly())) res += pc.h[static_cast<std::size_t>(j - 1)] * acc;
            }
            if (!(res == UniPoly()))
                throw std::logic_error("adjoint_integrate: nonzero residual after substitution");
        }
        Rational len = pc.t1 - pc.t0;
        for (std::size_t i = 0; i < n; ++i) lam0[i] = cur[i].evaluate(len);
        out.push_back(PathPiece{pc.t0, pc.t1, std::move(cur)});
    }
    return DualCurve(std::move(out));
}

// The two sides are computed by independent code paths: the adjoint solver
// only uses first-order structure constants, the dual composition only uses
// the extremal tables.
inline bool verify_master_identity(const GroupContext& ctx, const ExtremalFamily& family,
                                   const DevelopedCurve& curve, const RatVec& v0) {
    return adjoint_integrate(ctx, curve, v0) == dual_from_covector(family, curve, v0);
}

// ---------------------------------------------------------------------------
// Covector classification. The conditions "P_i^v(gamma(t)) = rhs_i(t) for all
// t" are linear in v; each t-power of each piece contributes one row.
// ---------------------------------------------------------------------------

struct CurveLinearSystem {
    RatMat m;
    RatVec b;
};

// sigma = 0 builds the homogeneous system P_i^v(gamma) = 0 for i = 1..imax;
// otherwise the right-hand side is sigma * h_i (requires imax <= rank).
inline CurveLinearSystem covector_conditions(const ExtremalFamily& family,
                                             const DevelopedCurve& curve, int imax,
                                             const Rational& sigma) {
    std::size_t n = curve.path.dimension();
    if (family.size() != n) throw std::invalid_argument("covector_conditions: family dimension mismatch");
    if (imax < 1 || imax > static_cast<int>(n))
        throw std::invalid_argument("covector_conditions: bad constraint range");
    if (sigma != 0 && imax > curve.law.rank())
        throw std::invalid_argument("covector_conditions: inhomogeneous rows need control indices");

    CurveLinearSystem sys;
    for (std::size_t p = 0; p < curve.path.pieces().size(); ++p) {
        const PathPiece& pp = curve.path.pieces()[p];
        PiecePowers pw(pp.x);
        for (int i = 1; i <= imax; ++i) {
            std::vector<UniPoly> q(n);
            for (const auto& [a, row] : family[static_cast<std::size_t>(i - 1)].cells) {
                UniPoly mono = pw.monomial(a);
                for (const auto& [k, c] : row) q[static_cast<std::size_t>(k - 1)] += mono * c;
            }
            UniPoly rhs;
            if (sigma != 0)
                rhs = curve.law.pieces()[p].h[static_cast<std::size_t>(i - 1)] * sigma;
            int dmax = rhs.degree();
            for (const auto& col : q) dmax = std::max(dmax, col.degree());
            for (int d = 0; d <= dmax; ++d) {
                RatVec row(n, Rational(0));
                bool nonzero = false;
                for (std::size_t k = 0; k < n; ++k) {
                    row[k] = q[k].coefficient(static_cast<std::size_t>(d));
                    if (row[k] != 0) nonzero = true;
                }
                Rational rv = rhs.coefficient(static_cast<std::size_t>(d));
                if (nonzero || rv != 0) {
                    sys.m.push_back(std::move(row));
                    sys.b.push_back(rv);
                }
            }
        }
    }
    return sys;
}

// Basis of {v : P_i^v(gamma(t)) = 0 for all t, i = 1..r}. Its dimension is
// the corank of the curve; nonzero members are abnormal covectors.
inline std::vector<RatVec> find_abnormal_covectors(const GroupContext& ctx,
                                                   const ExtremalFamily& family,
                                                   const DevelopedCurve& curve) {
    CurveLinearSystem sys = covector_conditions(family, curve, ctx.rank(), Rational(0));
    return nullspace_basis(sys.m, family.size());
}

// Same system extended over the first two layers; nonzero members certify
// Goh extremals.
inline std::vector<RatVec> find_goh_covectors(const GroupContext& ctx,
                                              const ExtremalFamily& family,
                                              const DevelopedCurve& curve) {
    int imax = ctx.rank();
    if (ctx.step() >= 2)
        imax = ctx.basis().layer_start(2) + static_cast<int>(ctx.basis().layer_dims()[1]) - 1;
    CurveLinearSystem sys = covector_conditions(family, curve, imax, Rational(0));
    return nullspace_basis(sys.m, family.size());
}

enum class Strictness { NormalCapable, StrictlyAbnormalCandidate };

// Is there a covector v with P_j^v(gamma) = sigma h_j for j = 1..r?
inline bool normal_certificate_exists(const GroupContext& ctx, const ExtremalFamily& family,
                                      const DevelopedCurve& curve, int sigma) {
    CurveLinearSystem sys = covector_conditions(family, curve, ctx.rank(), Rational(sigma));
    return solve_linear(sys.m, sys.b, family.size()).has_value();
}

// Solvability of P_j^v(gamma) = sigma h_j (j = 1..r) over v, for both sign
// conventions. Unsolvable under both means the curve cannot be normal for
// this parametrization.
inline Strictness strictness_check(const GroupContext& ctx, const ExtremalFamily& family,
                                   const DevelopedCurve& curve) {
    for (int s : {1, -1})
        if (normal_certificate_exists(ctx, family, curve, s)) return Strictness::NormalCapable;
    return Strictness::StrictlyAbnormalCandidate;
}

struct Classification {
    std::size_t corank = 0;
    std::vector<RatVec> abnormal_basis;
    std::vector<RatVec> goh_basis;
    Strictness strict = Strictness::NormalCapable;
};

inline Classification classify(const GroupContext& ctx, const ExtremalFamily& family,
                               const DevelopedCurve& curve) {
    Classification c;
    c.abnormal_basis = find_abnormal_covectors(ctx, family, curve);
    c.goh_basis = find_goh_covectors(ctx, family, curve);
    c.corank = c.abnormal_basis.size();
    c.strict = strictness_check(ctx, family, curve);
    return c;
}

// ---------------------------------------------------------------------------
// Frame cross-check. With the frame matrix A[l][k] = (X_k)_l (unit lower
// triangular), the 1-form coordinates xi = A^{-T} lambda must satisfy
//     dxi_k = -sum_{j<=r} sum_i h_j (d(X_j)_i/dx_k)(gamma) xi_i.
// xi is computed exactly per piece by back substitution and the equation is
// checked at `samples` midpoint times.
// ---------------------------------------------------------------------------

inline bool theta_frame_check(const GroupContext& ctx, const DevelopedCurve& curve,
                              const DualCurve& dual, int samples) {
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    if (samples < 1) throw std::invalid_argument("theta_frame_check: sample count must be positive");
    if (dual.dimension() != n || dual.pieces().size() != curve.path.pieces().size())
        throw std::invalid_argument("theta_frame_check: dual does not match the curve");

    for (std::size_t k = 1; k <= n; ++k) {
        const PolyVectorField& X = ctx.field(static_cast<int>(k));
        for (std::size_t l = 1; l < k; ++l)
            if (!X.component(l).is_zero())
                throw std::logic_error("theta_frame_check: frame matrix not lower triangular");
        if (!(X.component(k) == Polynomial::constant(n, Rational(1))))
            throw std::logic_error("theta_frame_check: frame diagonal differs from one");
    }

    // xi per piece, by back substitution in A^T xi = lambda.
    std::vector<std::vector<UniPoly>> xi(curve.path.pieces().size());
    for (std::size_t p = 0; p < curve.path.pieces().size(); ++p) {
        const PathPiece& pp = curve.path.pieces()[p];
        const PathPiece& dp = dual.pieces()[p];
        if (dp.t0 != pp.t0 || dp.t1 != pp.t1)
            throw std::invalid_argument("theta_frame_check: dual pieces differ from curve pieces");
        PiecePowers pw(pp.x);
        std::vector<UniPoly> row(n);
        for (std::size_t k = n; k >= 1; --k) {
            UniPoly s = dp.x[k - 1];
            const PolyVectorField& Xk = ctx.field(static_cast<int>(k));
            for (std::size_t l = k + 1; l <= n; ++l) {
                const Polynomial& a = Xk.component(l);
                if (!a.is_zero()) s -= compose_on_piece(a, pw) * row[l - 1];
            }
            row[k - 1] = std::move(s);
        }
        xi[p] = std::move(row);
    }

    int r = ctx.rank();
    for (int m = 1; m <= samples; ++m) {
        Rational t(2 * m - 1, 2 * static_cast<long>(samples));
        std::size_t p = curve.path.piece_index_at(t);
        const PathPiece& pp = curve.path.pieces()[p];
        Rational u = t - pp.t0;
        std::vector<Rational> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = pp.x[k].evaluate(u);
        std::vector<Rational> xival(n), hval(static_cast<std::size_t>(r));
        for (std::size_t k = 0; k < n; ++k) xival[k] = xi[p][k].evaluate(u);
        for (int j = 1; j <= r; ++j)
            hval[static_cast<std::size_t>(j - 1)] =
                curve.law.pieces()[p].h[static_cast<std::size_t>(j - 1)].evaluate(u);

        for (std::size_t k = 1; k <= n; ++k) {
            Rational lhs = xi[p][k - 1].derivative().evaluate(u);
            Rational rhs(0);
            for (int j = 1; j <= r; ++j) {
                const PolyVectorField& Xj = ctx.field(j);
                for (std::size_t i = 1; i <= n; ++i) {
                    const Polynomial& comp = Xj.component(i);
                    if (comp.is_zero()) continue;
                    Polynomial d = comp.partial(k);
                    if (d.is_zero()) continue;
                    rhs -= hval[static_cast<std::size_t>(j - 1)] * d.evaluate(x) * xival[i - 1];
                }
            }
            if (lhs != rhs) return false;
        }
    }
    return true;
}

inline bool theta_frame_check(const GroupContext& ctx, const ExtremalFamily& family,
                              const DevelopedCurve& curve, const RatVec& v0, int samples) {
    return theta_frame_check(ctx, curve, dual_from_covector(family, curve, v0), samples);
}

// ---------------------------------------------------------------------------
// Numeric shooting for normal extremals:  dx = -sum_j P_j^{v0}(x) X_j(x),
// fixed-step fourth-order Runge-Kutta in double precision. The quantity
// sum_j P_j^{v0}(x)^2 is conserved by the flow; its drift is the diagnostic.
// ---------------------------------------------------------------------------

struct CompiledPoly {
    struct Term {
        double c = 0;
        std::vector<std::pair<std::size_t, std::uint32_t>> e;
    };
    std::vector<Term> terms;

    static CompiledPoly from(const Polynomial& p) {
        CompiledPoly out;
        for (const auto& [a, c] : p.terms()) {
            Term t;
            t.c = to_double(c);
            for (std::size_t k = 1; k <= a.dimension(); ++k)
                if (a[k] != 0) t.e.emplace_back(k - 1, a[k]);
            out.terms.push_back(std::move(t));
        }
        return out;
    }

    double evaluate(const std::vector<double>& x) const {
        double s = 0;
        for (const auto& t : terms) {
            double m = t.c;
            for (const auto& [k, e] : t.e) {
                double b = x[k];
                for (std::uint32_t q = 0; q < e; ++q) m *= b;
            }
            s += m;
        }
        return s;
    }
};

struct ShootResult {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    double initial_hamiltonian = 0;
    double max_drift = 0;
};

inline ShootResult normal_shoot(const GroupContext& ctx, const ExtremalFamily& family,
                                const RatVec& v0, double horizon, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("normal_shoot: step must be positive");
    if (!(horizon > 0)) throw std::invalid_argument("normal_shoot: horizon must be positive");
    std::size_t n = static_cast<std::size_t>(ctx.dimension());
    if (v0.size() != n) throw std::invalid_argument("normal_shoot: covector dimension mismatch");
    int r = ctx.rank();

    std::vector<CompiledPoly> pj;
    for (int j = 1; j <= r; ++j)
        pj.push_back(CompiledPoly::from(
            specialize_covector(family[static_cast<std::size_t>(j - 1)], v0)));
    std::vector<std::vector<std::pair<std::size_t, CompiledPoly>>> fields(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j)
        for (std::size_t l = 1; l <= n; ++l) {
            const Polynomial& comp = ctx.field(j).component(l);
            if (!comp.is_zero())
                fields[static_cast<std::size_t>(j - 1)].emplace_back(l - 1, CompiledPoly::from(comp));
        }

    auto rhs = [&](const std::vector<double>& x) {
        std::vector<double> dx(n, 0.0);
        for (int j = 0; j < r; ++j) {
            double pval = pj[static_cast<std::size_t>(j)].evaluate(x);
            if (pval == 0) continue;
            for (const auto& [l, comp] : fields[static_cast<std::size_t>(j)])
                dx[l] -= pval * comp.evaluate(x);
        }
        return dx;
    };
    auto hamiltonian = [&](const std::vector<double>& x) {
        double s = 0;
        for (int j = 0; j < r; ++j) {
            double pval = pj[static_cast<std::size_t>(j)].evaluate(x);
            s += pval * pval;
        }
        return s;
    };

    long steps = std::lround(horizon / dt);
    if (steps < 1) steps = 1;
    double step = horizon / static_cast<double>(steps);

    ShootResult res;
    std::vector<double> x(n, 0.0);
    res.initial_hamiltonian = hamiltonian(x);
    res.times.push_back(0.0);
    res.states.push_back(x);
    for (long s = 1; s <= steps; ++s) {
        std::vector<double> k1 = rhs(x), tmp(n);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        std::vector<double> k2 = rhs(tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        std::vector<double> k3 = rhs(tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
        std::vector<double> k4 = rhs(tmp);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        res.times.push_back(static_cast<double>(s) * step);
        res.states.push_back(x);
        res.max_drift = std::max(res.max_drift, std::abs(hamiltonian(x) - res.initial_hamiltonian));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Curve length and third-layer vanishing.
// ---------------------------------------------------------------------------

inline Rational control_energy(const ControlLaw& law) {
    Rational e(0);
    for (const auto& pc : law.pieces()) {
        Rational len = pc.t1 - pc.t0;
        for (const auto& hj : pc.h) e += (hj * hj).antiderivative().evaluate(len);
    }
    return e;
}

inline double curve_length(const ControlLaw& law) {
    return std::sqrt(to_double(control_energy(law)));
}

struct ThirdLayerReport {
    bool has_common_zero = false;
    bool identically_zero = true;
};

// Do the third-layer dual components share a zero on [0, 1]? Decided exactly
// per piece: gcd of the components, then root counting on the closed piece.
inline ThirdLayerReport regular_abnormal_indicator(const GroupContext& ctx,
                                                   const ExtremalFamily& family,
                                                   const DevelopedCurve& curve, const RatVec& v0) {
    if (ctx.rank() != 2 || ctx.step() < 3)
        throw std::invalid_argument("regular_abnormal_indicator: needs rank 2 and step >= 3");
    DualCurve dual = dual_from_covector(family, curve, v0);
    int l0 = ctx.basis().layer_start(3);
    int cnt = static_cast<int>(ctx.basis().layer_dims()[2]);

    ThirdLayerReport rep;
    for (const auto& dp : dual.pieces()) {
        UniPoly g;
        bool all_zero = true;
        for (int i = l0; i < l0 + cnt; ++i) {
            const UniPoly& li = dp.x[static_cast<std::size_t>(i - 1)];
            if (!(li == UniPoly())) all_zero = false;
            g = uni_gcd(g, li);
        }
        if (all_zero) {
            rep.has_common_zero = true;
            continue;
        }
        rep.identically_zero = false;
        if (g.degree() >= 1 && count_roots_closed(g, Rational(0), dp.t1 - dp.t0) > 0)
            rep.has_common_zero = true;
    }
    return rep;
}

// Precompose a single-piece law with a polynomial time change fixing 0 and 1:
// the new controls are h_j(tau(t)) tau'(t), tracing the same image.
inline ControlLaw reparametrize(const ControlLaw& law, const UniPoly& tau) {
    if (law.pieces().size() != 1)
        throw std::invalid_argument("reparametrize: single-piece laws only");
    if (tau.evaluate(Rational(0)) != 0 || tau.evaluate(Rational(1)) != 1)
        throw std::invalid_argument("reparametrize: time change must fix the interval ends");
    UniPoly dtau = tau.derivative();
    std::vector<UniPoly> h2;
    h2.reserve(law.pieces().front().h.size());
    for (const auto& hj : law.pieces().front().h) h2.push_back(hj.compose(tau) * dtau);
    return ControlLaw::single(std::move(h2));
}

}  // namespace extremal

#pragma once

#include "extremal/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace extremal {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

namespace detail {

struct IntEchelon {
    std::vector<std::vector<Integer>> rows;
    std::vector<std::size_t> pivot_cols; // one per nonzero row, ascending
    std::size_t ncols = 0;
};

inline Integer exact_div(const Integer& a, const Integer& b) {
    Integer q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw std::logic_error("linalg: inexact division in fraction-free elimination");
    return q;
}

// Fraction-free (Bareiss) forward elimination. Rational input rows are
// scaled to integers first; intermediate entries stay integral, with the
// two-term cross-multiplication update divided exactly by the previous
// pivot. Row order within the echelon is deterministic.
inline IntEchelon fraction_free_echelon(const RatMat& m, std::size_t ncols) {
    IntEchelon ech;
    ech.ncols = ncols;
    for (const auto& row : m) {
        if (row.size() != ncols) throw std::invalid_argument("linalg: ragged matrix");
        Integer scale = 1;
        for (const auto& v : row) scale = boost::multiprecision::lcm(scale, denominator(v));
        std::vector<Integer> irow(ncols);
        bool nonzero = false;
        for (std::size_t j = 0; j < ncols; ++j) {
            irow[j] = numerator(row[j]) * (scale / denominator(row[j]));
            nonzero = nonzero || irow[j] != 0;
        }
        if (nonzero) ech.rows.push_back(std::move(irow));
    }

    std::size_t nrows = ech.rows.size();
    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
        std::size_t pr = rank;
        while (pr < nrows && ech.rows[pr][col] == 0) ++pr;
        if (pr == nrows) continue;
        std::swap(ech.rows[rank], ech.rows[pr]);
        const Integer pivot = ech.rows[rank][col];
        for (std::size_t i = rank + 1; i < nrows; ++i) {
            const Integer head = ech.rows[i][col];
            for (std::size_t j = col + 1; j < ncols; ++j)
                ech.rows[i][j] = exact_div(pivot * ech.rows[i][j] - head * ech.rows[rank][j], prev);
            ech.rows[i][col] = 0;
        }
        prev = pivot;
        ech.pivot_cols.push_back(col);
        ++rank;
    }
    ech.rows.resize(rank);
    return ech;
}

} // namespace detail

inline std::size_t matrix_rank(const RatMat& m, std::size_t ncols) {
    return detail::fraction_free_echelon(m, ncols).pivot_cols.size();
}

// Basis of { v : M v = 0 }, one vector per free column, in column order.
// The free coordinate of each basis vector is normalized to 1.
inline std::vector<RatVec> nullspace_basis(const RatMat& m, std::size_t ncols) {
    auto ech = detail::fraction_free_echelon(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t c : ech.pivot_cols) is_pivot[c] = true;

    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        RatVec v(ncols, Rational(0));
        v[f] = 1;
        for (std::size_t k = ech.pivot_cols.size(); k-- > 0;) {
            std::size_t p = ech.pivot_cols[k];
            Rational s = 0;
            for (std::size_t j = p + 1; j < ncols; ++j)
                if (ech.rows[k][j] != 0 && v[j] != 0) s += Rational(ech.rows[k][j]) * v[j];
            v[p] = -s / Rational(ech.rows[k][p]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Any solution of M v = b, or nullopt if the system is inconsistent.
// Free coordinates are set to zero.
inline std::optional<RatVec> solve_linear(const RatMat& m, const RatVec& b, std::size_t ncols) {
    if (m.size() != b.size()) throw std::invalid_argument("solve_linear: size mismatch");
    RatMat aug(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        aug[i] = m[i];
        aug[i].push_back(b[i]);
    }
    auto ech = detail::fraction_free_echelon(aug, ncols + 1);
    for (std::size_t c : ech.pivot_cols)
        if (c == ncols) return std::nullopt;

    RatVec v(ncols, Rational(0));
    for (std::size_t k = ech.pivot_cols.size(); k-- > 0;) {
        std::size_t p = ech.pivot_cols[k];
        Rational s = Rational(ech.rows[k][ncols]);
        for (std::size_t j = p + 1; j < ncols; ++j)
            if (ech.rows[k][j] != 0 && v[j] != 0) s -= Rational(ech.rows[k][j]) * v[j];
        v[p] = s / Rational(ech.rows[k][p]);
    }
    return v;
}

// Whether v lies in the span of the given vectors.
inline bool in_span(const std::vector<RatVec>& vectors, const RatVec& v) {
    if (vectors.empty())
        return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
    std::size_t dim = v.size();
    RatMat m(dim, RatVec(vectors.size(), Rational(0)));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != dim) throw std::invalid_argument("in_span: dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) m[i][j] = vectors[j][i];
    }
    return solve_linear(m, v, vectors.size()).has_value();
}

} // namespace extremal

#pragma once

#include "extremal/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace extremal {

// Dense univariate polynomial with exact rational coefficients,
// coefficient of t^k at position k. Trailing zeros are trimmed.
class UniPoly {
public:
    UniPoly() = default;

    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly zero() { return UniPoly(); }

    static UniPoly constant(const Rational& a) {
        UniPoly p;
        if (a != 0) p.c_ = {a};
        return p;
    }

    static UniPoly t() { return UniPoly({Rational(0), Rational(1)}); }

    bool is_zero() const { return c_.empty(); }

    // Degree of the zero polynomial is -1 by convention.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<Rational>& coefficients() const { return c_; }

    Rational coefficient(std::size_t k) const {
        return k < c_.size() ? c_[k] : Rational(0);
    }

    void set_coefficient(std::size_t k, const Rational& v) {
        if (k >= c_.size()) c_.resize(k + 1, Rational(0));
        c_[k] = v;
        trim();
    }

    Rational evaluate(const Rational& t) const {
        Rational r = 0;
        for (std::size_t k = c_.size(); k-- > 0;) r = r * t + c_[k];
        return r;
    }

    double evaluate_double(double t) const {
        double r = 0;
        for (std::size_t k = c_.size(); k-- > 0;) r = r * t + to_double(c_[k]);
        return r;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<unsigned>(k));
        return UniPoly(std::move(d));
    }

    // Antiderivative vanishing at 0.
    UniPoly antiderivative() const {
        if (c_.empty()) return UniPoly();
        std::vector<Rational> a(c_.size() + 1, Rational(0));
        for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / Rational(static_cast<unsigned>(k + 1));
        return UniPoly(std::move(a));
    }

    // p(q(t)) by Horner over polynomial arguments.
    UniPoly compose(const UniPoly& q) const {
        UniPoly r;
        for (std::size_t k = c_.size(); k-- > 0;) {
            r = r * q;
            r += UniPoly::constant(c_[k]);
        }
        return r;
    }

    // p(t + a), exact Taylor shift.
    UniPoly shift(const Rational& a) const {
        return compose(UniPoly({a, Rational(1)}));
    }

    UniPoly& operator+=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }

    UniPoly& operator-=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }

    UniPoly& operator*=(const Rational& a) {
        if (a == 0) { c_.clear(); return *this; }
        for (auto& v : c_) v *= a;
        return *this;
    }

    friend UniPoly operator+(UniPoly a, const UniPoly& b) { a += b; return a; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { a -= b; return a; }
    friend UniPoly operator*(UniPoly a, const Rational& c) { a *= c; return a; }
    friend UniPoly operator*(const Rational& c, UniPoly a) { a *= c; return a; }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.c_.empty() || b.c_.empty()) return UniPoly();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }

    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

// Quotient and remainder of a by b, b nonzero.
inline std::pair<UniPoly, UniPoly> uni_divmod(UniPoly a, const UniPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("uni_divmod: division by zero polynomial");
    Rational lead = b.coefficient(static_cast<std::size_t>(b.degree()));
    UniPoly quot;
    while (!a.is_zero() && a.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
        Rational q = a.coefficient(static_cast<std::size_t>(a.degree())) / lead;
        std::vector<Rational> m(shift + 1, Rational(0));
        m[shift] = q;
        UniPoly mono(std::move(m));
        quot += mono;
        a -= mono * b;
    }
    return {std::move(quot), std::move(a)};
}

inline UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    return uni_divmod(std::move(a), b).second;
}

inline UniPoly uni_divexact(UniPoly a, const UniPoly& b) {
    auto [q, r] = uni_divmod(std::move(a), b);
    if (!r.is_zero()) throw std::invalid_argument("uni_divexact: inexact division");
    return q;
}

// Monic gcd; gcd(0, 0) = 0.
inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = uni_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rational lead = a.coefficient(static_cast<std::size_t>(a.degree()));
        a *= Rational(1) / lead;
    }
    return a;
}

namespace detail {

inline int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

inline int sturm_sign_changes(const std::vector<UniPoly>& seq, const Rational& t) {
    int changes = 0, prev = 0;
    for (const auto& p : seq) {
        int s = sign_of(p.evaluate(t));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

} // namespace detail

// Number of distinct real roots of p in the closed interval [a, b],
// counted via a Sturm sequence on the squarefree part. Requires a <= b
// and p nonzero.
inline int count_roots_closed(const UniPoly& p, const Rational& a, const Rational& b) {
    if (a > b) throw std::invalid_argument("count_roots_closed: empty interval");
    if (p.is_zero()) throw std::invalid_argument("count_roots_closed: zero polynomial");
    if (a == b) return p.evaluate(a) == 0 ? 1 : 0;
    if (p.degree() == 0) return 0;

    UniPoly sf = uni_divexact(p, uni_gcd(p, p.derivative()));

    // Deflate endpoint roots so the Sturm count covers the open interval.
    int endpoints = 0;
    if (sf.evaluate(a) == 0) {
        sf = uni_divexact(sf, UniPoly({-a, Rational(1)}));
        ++endpoints;
    }
    if (sf.evaluate(b) == 0) {
        sf = uni_divexact(sf, UniPoly({-b, Rational(1)}));
        ++endpoints;
    }
    if (sf.degree() <= 0) return endpoints;

    std::vector<UniPoly> seq;
    seq.push_back(sf);
    seq.push_back(sf.derivative());
    while (!seq.back().is_zero()) {
        UniPoly r = -uni_rem(seq[seq.size() - 2], seq.back());
        seq.push_back(std::move(r));
    }
    seq.pop_back();

    return endpoints + detail::sturm_sign_changes(seq, a) - detail::sturm_sign_changes(seq, b);
}

} // namespace extremal

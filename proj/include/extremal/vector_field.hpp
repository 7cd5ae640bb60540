#pragma once

#include "extremal/polynomial.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace extremal {

// Vector field on R^n with polynomial components, X = sum_k comp[k] d/dx_k.
class PolyVectorField {
public:
    PolyVectorField() = default;

    explicit PolyVectorField(std::size_t n) : comp_(n, Polynomial(n)) {}

    static PolyVectorField zero(std::size_t n) { return PolyVectorField(n); }

    std::size_t dimension() const { return comp_.size(); }

    const Polynomial& component(std::size_t k) const {
        if (k < 1 || k > comp_.size()) throw std::out_of_range("PolyVectorField::component");
        return comp_[k - 1];
    }

    Polynomial& component(std::size_t k) {
        if (k < 1 || k > comp_.size()) throw std::out_of_range("PolyVectorField::component");
        return comp_[k - 1];
    }

    bool is_zero() const {
        for (const auto& p : comp_)
            if (!p.is_zero()) return false;
        return true;
    }

    std::vector<Rational> value_at(const std::vector<Rational>& x) const {
        std::vector<Rational> v;
        v.reserve(comp_.size());
        for (const auto& p : comp_) v.push_back(p.evaluate(x));
        return v;
    }

    std::vector<Rational> value_at_origin() const {
        return value_at(std::vector<Rational>(comp_.size(), Rational(0)));
    }

    // Directional derivative X(f) = sum_k comp_k df/dx_k.
    Polynomial apply(const Polynomial& f) const {
        if (f.dimension() != comp_.size()) throw std::invalid_argument("PolyVectorField::apply: dimension mismatch");
        Polynomial r(comp_.size());
        for (std::size_t k = 1; k <= comp_.size(); ++k) {
            if (comp_[k - 1].is_zero()) continue;
            r += comp_[k - 1] * f.partial(k);
        }
        return r;
    }

    PolyVectorField& operator+=(const PolyVectorField& other) {
        check_dim(other);
        for (std::size_t k = 0; k < comp_.size(); ++k) comp_[k] += other.comp_[k];
        return *this;
    }

    PolyVectorField& operator-=(const PolyVectorField& other) {
        check_dim(other);
        for (std::size_t k = 0; k < comp_.size(); ++k) comp_[k] -= other.comp_[k];
        return *this;
    }

    PolyVectorField& operator*=(const Rational& c) {
        for (auto& p : comp_) p *= c;
        return *this;
    }

    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { a += b; return a; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { a -= b; return a; }
    friend PolyVectorField operator*(const Rational& c, PolyVectorField a) { a *= c; return a; }

    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
        return a.comp_ == b.comp_;
    }

private:
    void check_dim(const PolyVectorField& other) const {
        if (comp_.size() != other.comp_.size())
            throw std::invalid_argument("PolyVectorField: dimension mismatch");
    }

    std::vector<Polynomial> comp_;
};

// Lie bracket [X, Y]_l = sum_k (X_k dY_l/dx_k - Y_k dX_l/dx_k).
inline PolyVectorField vf_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    if (X.dimension() != Y.dimension()) throw std::invalid_argument("vf_bracket: dimension mismatch");
    std::size_t n = X.dimension();
    PolyVectorField Z(n);
    if (X.is_zero() || Y.is_zero()) return Z;
    for (std::size_t l = 1; l <= n; ++l) {
        Polynomial zl(n);
        for (std::size_t k = 1; k <= n; ++k) {
            const Polynomial& xk = X.component(k);
            const Polynomial& yk = Y.component(k);
            if (!xk.is_zero()) zl += xk * Y.component(l).partial(k);
            if (!yk.is_zero()) zl -= yk * X.component(l).partial(k);
        }
        Z.component(l) = zl;
    }
    return Z;
}

} // namespace extremal

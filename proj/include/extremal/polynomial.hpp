#pragma once

#include "extremal/multi_index.hpp"
#include "extremal/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace extremal {

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are keyed by MultiIndex in graded-lex order, so iteration (and
// hence serialization) is canonical. Stored coefficients are never zero.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, Rational>;

    Polynomial() = default;

    explicit Polynomial(std::size_t dim) : dim_(dim) {}

    static Polynomial zero(std::size_t dim) { return Polynomial(dim); }

    static Polynomial constant(std::size_t dim, const Rational& c) {
        Polynomial p(dim);
        if (c != 0) p.terms_[MultiIndex(dim)] = c;
        return p;
    }

    static Polynomial variable(std::size_t dim, std::size_t i) {
        return monomial(MultiIndex::unit(dim, i), 1);
    }

    static Polynomial monomial(const MultiIndex& alpha, const Rational& c) {
        Polynomial p(alpha.dimension());
        if (c != 0) p.terms_[alpha] = c;
        return p;
    }

    std::size_t dimension() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    Rational coefficient(const MultiIndex& alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const MultiIndex& alpha, const Rational& c) {
        if (alpha.dimension() != dim_) throw std::invalid_argument("Polynomial::add_term: dimension mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(alpha, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& other) {
        check_dim(other);
        for (const auto& [a, c] : other.terms_) add_term(a, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other) {
        check_dim(other);
        for (const auto& [a, c] : other.terms_) add_term(a, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto& [a, v] : terms_) v *= c;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { a *= c; return a; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { a *= c; return a; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_dim(b);
        Polynomial r(a.dim_);
        for (const auto& [ai, ac] : a.terms_)
            for (const auto& [bi, bc] : b.terms_)
                r.add_term(ai.plus(bi), ac * bc);
        return r;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [a, v] : r.terms_) v = -v;
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    Rational evaluate(const std::vector<Rational>& x) const {
        if (x.size() != dim_) throw std::invalid_argument("Polynomial::evaluate: point dimension mismatch");
        Rational sum = 0;
        for (const auto& [a, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 1; i <= dim_; ++i)
                if (auto e = a[i]; e != 0) t *= rational_pow(x[i - 1], e);
            sum += t;
        }
        return sum;
    }

    // d/dx_i, 1-based.
    Polynomial partial(std::size_t i) const {
        Polynomial r(dim_);
        for (const auto& [a, c] : terms_) {
            std::uint32_t e = a[i];
            if (e == 0) continue;
            MultiIndex b = a;
            b.bump(i, -1);
            r.add_term(b, c * e);
        }
        return r;
    }

    // Antiderivative in x_i with zero constant of integration.
    Polynomial integral(std::size_t i) const {
        Polynomial r(dim_);
        for (const auto& [a, c] : terms_) {
            MultiIndex b = a;
            b.bump(i, +1);
            r.add_term(b, c / Rational(a[i] + 1));
        }
        return r;
    }

    // Substitute args[i-1] for x_i. All args must share one dimension.
    Polynomial substitute(const std::vector<Polynomial>& args) const {
        if (args.size() != dim_) throw std::invalid_argument("Polynomial::substitute: argument count mismatch");
        std::size_t out_dim = args.empty() ? 0 : args[0].dimension();
        for (const auto& p : args)
            if (p.dimension() != out_dim) throw std::invalid_argument("Polynomial::substitute: mixed dimensions");

        // Cache powers of each argument up to the largest exponent used.
        std::vector<std::vector<Polynomial>> powers(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            powers[i].push_back(Polynomial::constant(out_dim, 1));

        Polynomial r(out_dim);
        for (const auto& [a, c] : terms_) {
            Polynomial t = Polynomial::constant(out_dim, c);
            for (std::size_t i = 1; i <= dim_; ++i) {
                std::uint32_t e = a[i];
                if (e == 0) continue;
                auto& pw = powers[i - 1];
                while (pw.size() <= e) pw.push_back(pw.back() * args[i - 1]);
                t = t * pw[e];
            }
            r += t;
        }
        return r;
    }

    std::optional<std::uint64_t> max_total_degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first.total_degree();
    }

    // Max weighted degree over terms; nullopt for the zero polynomial.
    std::optional<std::uint64_t> max_weighted_degree(const std::vector<int>& weights) const {
        std::optional<std::uint64_t> best;
        for (const auto& [a, c] : terms_) {
            std::uint64_t d = a.weighted_degree(weights);
            if (!best || d > *best) best = d;
        }
        return best;
    }

    bool is_weighted_homogeneous(const std::vector<int>& weights, std::uint64_t degree) const {
        for (const auto& [a, c] : terms_)
            if (a.weighted_degree(weights) != degree) return false;
        return true;
    }

private:
    void check_dim(const Polynomial& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    }

    std::size_t dim_ = 0;
    TermMap terms_;
};

} // namespace extremal

#pragma once

#include "extremal/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace extremal {

// Exponent vector of fixed dimension. Ordered graded-lexicographically:
// first by total degree, ties broken by lexicographic comparison of the
// exponents. This order is the canonical one used for serialization.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::size_t dim) : e_(dim, 0) {}

    MultiIndex(std::initializer_list<std::uint32_t> init) : e_(init) {}

    explicit MultiIndex(std::vector<std::uint32_t> exps) : e_(std::move(exps)) {}

    // Unit multi-index at 1-based position i.
    static MultiIndex unit(std::size_t dim, std::size_t i) {
        MultiIndex m(dim);
        m.set(i, 1);
        return m;
    }

    std::size_t dimension() const { return e_.size(); }

    // 1-based access; out-of-range reads are 0.
    std::uint32_t operator[](std::size_t i) const {
        return (i >= 1 && i <= e_.size()) ? e_[i - 1] : 0;
    }

    void set(std::size_t i, std::uint32_t v) {
        if (i < 1 || i > e_.size()) throw std::out_of_range("MultiIndex::set");
        e_[i - 1] = v;
    }

    void bump(std::size_t i, std::int64_t delta) {
        if (i < 1 || i > e_.size()) throw std::out_of_range("MultiIndex::bump");
        std::int64_t v = static_cast<std::int64_t>(e_[i - 1]) + delta;
        if (v < 0) throw std::invalid_argument("MultiIndex::bump: negative exponent");
        e_[i - 1] = static_cast<std::uint32_t>(v);
    }

    std::uint64_t total_degree() const {
        return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
    }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](std::uint32_t v) { return v == 0; });
    }

    // Largest 1-based position with nonzero exponent; 0 for the zero index.
    std::size_t leading_index() const {
        for (std::size_t i = e_.size(); i >= 1; --i)
            if (e_[i - 1] != 0) return i;
        return 0;
    }

    // alpha! = prod_i alpha_i!
    Integer factorial_product() const {
        Integer f = 1;
        for (std::uint32_t v : e_)
            if (v > 1) f *= extremal::factorial(v);
        return f;
    }

    bool dominates(const MultiIndex& other) const {
        check_dim(other);
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] < other.e_[i]) return false;
        return true;
    }

    MultiIndex plus(const MultiIndex& other) const {
        check_dim(other);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += other.e_[i];
        return r;
    }

    // Componentwise difference; empty if any entry would go negative.
    std::optional<MultiIndex> minus(const MultiIndex& other) const {
        check_dim(other);
        MultiIndex r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (r.e_[i] < other.e_[i]) return std::nullopt;
            r.e_[i] -= other.e_[i];
        }
        return r;
    }

    // Weighted degree sum_i alpha_i * w_i for 1-based weights w.
    std::uint64_t weighted_degree(const std::vector<int>& weights) const {
        std::uint64_t d = 0;
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (e_[i] == 0) continue;
            if (i >= weights.size()) throw std::out_of_range("MultiIndex::weighted_degree");
            d += static_cast<std::uint64_t>(e_[i]) * static_cast<std::uint64_t>(weights[i]);
        }
        return d;
    }

    const std::vector<std::uint32_t>& exponents() const { return e_; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }

    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        a.check_dim(b);
        if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
        for (std::size_t i = 0; i < a.e_.size(); ++i)
            if (auto c = a.e_[i] <=> b.e_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

private:
    void check_dim(const MultiIndex& other) const {
        if (e_.size() != other.e_.size())
            throw std::invalid_argument("MultiIndex: dimension mismatch");
    }

    std::vector<std::uint32_t> e_;
};

} // namespace extremal

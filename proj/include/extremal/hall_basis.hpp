#pragma once

#include "extremal/multi_index.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace extremal {

// Thrown when a requested (rank, step) pair would exceed the configured
// dimension cap. Mapped to a dedicated exit code by the CLI.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HallElement {
    int index = 0;       // 1-based position in the basis
    int degree = 0;      // number of generators in the bracket
    int left = 0;        // children; 0 for generators
    int right = 0;
    int chain_start = 0; // leading generator of the left-normed chain
    std::vector<int> chain; // remaining chain entries, ascending

    bool is_generator() const { return left == 0; }
};

// M. Hall basis of the free nilpotent Lie algebra of the given rank and
// step. A bracket [X_i, X_j] of degree d is admitted when i > j, both
// factors are basis elements, and, if X_i = [X_h, X_k], additionally
// k <= j. Elements are indexed by ascending degree; within one degree,
// composite elements are ordered by ascending (degree of right child,
// left child index, right child index). Every basis element flattens to
// a left-normed chain [[[X_{c0}, X_{c1}], X_{c2}], ..., X_{ch}] whose
// tail c1 <= c2 <= ... <= ch is what `chain` stores.
class HallBasis {
public:
    static std::vector<long long> witt_dimensions(int rank, int step) {
        if (rank < 1) throw std::invalid_argument("HallBasis: rank must be >= 1");
        if (step < 1) throw std::invalid_argument("HallBasis: step must be >= 1");
        std::vector<long long> dims(static_cast<std::size_t>(step) + 1, 0);
        for (int d = 1; d <= step; ++d) {
            Integer sum = 0;
            for (int e = 1; e <= d; ++e) {
                if (d % e != 0) continue;
                int mu = moebius(e);
                if (mu == 0) continue;
                Integer p = 1;
                for (int k = 0; k < d / e; ++k) p *= rank;
                sum += mu * p;
            }
            Integer nd = sum / d;
            if (nd * d != sum) throw std::logic_error("HallBasis: Witt count not divisible");
            dims[static_cast<std::size_t>(d)] = nd.convert_to<long long>();
        }
        return dims;
    }

    static HallBasis build(int rank, int step, std::size_t dimension_cap = 1000) {
        auto witt = witt_dimensions(rank, step);
        long long total = 0;
        for (int d = 1; d <= step; ++d) total += witt[static_cast<std::size_t>(d)];
        if (total > static_cast<long long>(dimension_cap))
            throw ResourceCapError("HallBasis: dimension " + std::to_string(total) +
                                   " exceeds cap " + std::to_string(dimension_cap));

        HallBasis b;
        b.rank_ = rank;
        b.step_ = step;
        b.dim_ = static_cast<int>(total);
        b.layer_dims_.assign(static_cast<std::size_t>(step), 0);
        b.elems_.reserve(static_cast<std::size_t>(total));

        for (int i = 1; i <= rank; ++i) {
            HallElement g;
            g.index = i;
            g.degree = 1;
            g.chain_start = i;
            b.elems_.push_back(std::move(g));
        }
        b.layer_dims_[0] = rank;

        for (int d = 2; d <= step; ++d) {
            // key: (degree of right child, left index, right index)
            std::vector<std::tuple<int, int, int>> candidates;
            for (int i = 1; i <= static_cast<int>(b.elems_.size()); ++i) {
                const HallElement& ei = b.elems_[static_cast<std::size_t>(i - 1)];
                for (int j = 1; j < i; ++j) {
                    const HallElement& ej = b.elems_[static_cast<std::size_t>(j - 1)];
                    if (ei.degree + ej.degree != d) continue;
                    if (!ei.is_generator() && ei.right > j) continue;
                    candidates.emplace_back(ej.degree, i, j);
                }
            }
            std::sort(candidates.begin(), candidates.end());

            for (const auto& [dj, i, j] : candidates) {
                const HallElement& ei = b.elems_[static_cast<std::size_t>(i - 1)];
                HallElement e;
                e.index = static_cast<int>(b.elems_.size()) + 1;
                e.degree = d;
                e.left = i;
                e.right = j;
                e.chain_start = ei.chain_start;
                e.chain = ei.chain;
                e.chain.push_back(j);
                b.pair_index_[{i, j}] = e.index;
                b.elems_.push_back(std::move(e));
            }
            long long built = static_cast<long long>(candidates.size());
            if (built != witt[static_cast<std::size_t>(d)])
                throw std::logic_error("HallBasis: layer count disagrees with Witt dimension");
            b.layer_dims_[static_cast<std::size_t>(d - 1)] = static_cast<int>(built);
        }

        b.chain_mult_.reserve(b.elems_.size());
        for (const auto& e : b.elems_) {
            MultiIndex I(static_cast<std::size_t>(b.dim_));
            for (int c : e.chain) I.bump(static_cast<std::size_t>(c), +1);
            b.chain_mult_.push_back(std::move(I));
        }
        return b;
    }

    int rank() const { return rank_; }
    int step() const { return step_; }
    int dimension() const { return dim_; }

    // Number of basis elements of each degree 1..step.
    const std::vector<int>& layer_dims() const { return layer_dims_; }

    const HallElement& element(int i) const {
        if (i < 1 || i > dim_) throw std::out_of_range("HallBasis::element");
        return elems_[static_cast<std::size_t>(i - 1)];
    }

    int degree(int i) const { return element(i).degree; }

    // First index of the given degree layer.
    int layer_start(int d) const {
        if (d < 1 || d > step_) throw std::out_of_range("HallBasis::layer_start");
        int start = 1;
        for (int k = 1; k < d; ++k) start += layer_dims_[static_cast<std::size_t>(k - 1)];
        return start;
    }

    // Weights vector for MultiIndex / Polynomial weighted degrees.
    std::vector<int> degrees() const {
        std::vector<int> w(static_cast<std::size_t>(dim_));
        for (int i = 1; i <= dim_; ++i) w[static_cast<std::size_t>(i - 1)] = degree(i);
        return w;
    }

    // Multiplicity vector I(l) of the chain tail of X_l.
    const MultiIndex& chain_multiplicity(int l) const {
        if (l < 1 || l > dim_) throw std::out_of_range("HallBasis::chain_multiplicity");
        return chain_mult_[static_cast<std::size_t>(l - 1)];
    }

    // Largest chain entry of X_l; 0 for generators.
    int chain_last(int l) const {
        const HallElement& e = element(l);
        return e.chain.empty() ? 0 : e.chain.back();
    }

    // Basis index of [X_i, X_j] when that pair was admitted, else 0.
    int bracket_index(int i, int j) const {
        auto it = pair_index_.find({i, j});
        return it == pair_index_.end() ? 0 : it->second;
    }

    // Whether [X_l, X_k] is itself a basis element: the chain-tail test
    // u_{I(l)} <= k < l together with the step bound. On success the
    // index of the resulting element is written through out_index.
    bool is_hall_bracket(int l, int k, int* out_index = nullptr) const {
        if (l < 1 || l > dim_ || k < 1 || k > dim_) throw std::out_of_range("HallBasis::is_hall_bracket");
        if (!(chain_last(l) <= k && k < l)) return false;
        if (degree(l) + degree(k) > step_) return false;
        int idx = bracket_index(l, k);
        if (idx == 0) throw std::logic_error("HallBasis: chain-tail test disagrees with admission");
        if (out_index) *out_index = idx;
        return true;
    }

    // Chain-prefix order: j precedes l when X_j is one of the nested
    // prefixes [X_{c0}, X_{c1}, ..., X_{ck}] of X_l. Reflexive; walks
    // the left-child chain.
    bool precedes(int j, int l) const {
        if (j < 1 || j > dim_ || l < 1 || l > dim_) throw std::out_of_range("HallBasis::precedes");
        int cur = l;
        while (true) {
            if (cur == j) return true;
            const HallElement& e = element(cur);
            if (e.is_generator()) return false;
            cur = e.left;
        }
    }

private:
    static int moebius(int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p != 0) continue;
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
        if (n > 1) m = -m;
        return m;
    }

    int rank_ = 0;
    int step_ = 0;
    int dim_ = 0;
    std::vector<int> layer_dims_;
    std::vector<HallElement> elems_;
    std::vector<MultiIndex> chain_mult_;
    std::map<std::pair<int, int>, int> pair_index_;
};

} // namespace extremal

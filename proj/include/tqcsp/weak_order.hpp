#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqcsp/rational.hpp"

namespace tqcsp {

// Default ceiling for exhaustive orbit stores. Ordered Bell growth makes
// anything beyond this impractical, and no gadget needs arity > 5.
inline constexpr int kDefaultArityCeiling = 7;

// ── WeakOrder ───────────────────────────────────────────────────────────────
//
// A weak order (ordered partition) on n coordinates, stored as a dense
// 0-based rank map: ranks[i] < ranks[j] iff coordinate i is strictly below
// coordinate j, equal ranks mean equal values. Every rank in {0,..,m-1} is
// inhabited. This is the canonical form of an orbit of an n-tuple of
// rationals under order automorphisms: two tuples lie in the same orbit iff
// they canonicalize to the same WeakOrder.

class WeakOrder {
public:
    WeakOrder() = default;

    // Canonicalizes an arbitrary rank-like vector (e.g. [5,9,9] -> [0,1,1]).
    explicit WeakOrder(std::vector<int> raw) : ranks_(std::move(raw)) {
        if (ranks_.empty()) throw std::invalid_argument("empty tuple");
        canonicalize_in_place();
    }

    template <typename T>
    static WeakOrder of_values(std::span<const T> values) {
        if (values.empty()) throw std::invalid_argument("empty tuple");
        std::vector<int> idx(values.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return values[a] < values[b]; });
        std::vector<int> ranks(values.size());
        int r = 0;
        ranks[idx[0]] = 0;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            if (values[idx[k - 1]] < values[idx[k]]) ++r;
            ranks[idx[k]] = r;
        }
        WeakOrder w;
        w.ranks_ = std::move(ranks);
        w.blocks_ = r + 1;
        return w;
    }

    static WeakOrder of_values(std::initializer_list<Rational> values) {
        return of_values(std::span<const Rational>(values.begin(), values.size()));
    }

    int arity() const { return static_cast<int>(ranks_.size()); }
    int blocks() const { return blocks_; }
    int rank(int i) const { return ranks_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& ranks() const { return ranks_; }

    // Rank reversal: the orbit of (-t[1],...,-t[n]).
    WeakOrder dual() const {
        WeakOrder w = *this;
        for (int& r : w.ranks_) r = blocks_ - 1 - r;
        return w;
    }

    // Canonical pattern of the kept coordinates; repeated indices allowed.
    WeakOrder restrict_to(std::span<const int> keep) const {
        if (keep.empty()) throw std::invalid_argument("empty keep set");
        std::vector<int> sub;
        sub.reserve(keep.size());
        for (int i : keep) {
            if (i < 0 || i >= arity()) throw std::out_of_range("restrict: bad index");
            sub.push_back(ranks_[static_cast<std::size_t>(i)]);
        }
        return WeakOrder(std::move(sub));
    }

    // All 2m+1 weak orders on n+1 coordinates whose restriction to the first
    // n coordinates is this one, in canonical ascending slot order:
    // below block 0, equal block 0, between 0 and 1, ..., above block m-1.
    std::vector<WeakOrder> extensions() const {
        std::vector<WeakOrder> out;
        out.reserve(2 * static_cast<std::size_t>(blocks_) + 1);
        for (int slot = 0; slot <= 2 * blocks_; ++slot) {
            WeakOrder w;
            w.ranks_ = ranks_;
            if (slot % 2 == 1) {  // equal to block slot/2
                w.ranks_.push_back(slot / 2);
                w.blocks_ = blocks_;
            } else {              // strictly in gap slot/2
                int gap = slot / 2;
                for (int& r : w.ranks_) if (r >= gap) ++r;
                w.ranks_.push_back(gap);
                w.blocks_ = blocks_ + 1;
            }
            out.push_back(std::move(w));
        }
        return out;
    }

    // Serialized form is a bare JSON array of ranks, e.g. [0,1,1].
    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < ranks_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(ranks_[i]);
        }
        return s + "]";
    }

    friend bool operator==(const WeakOrder& a, const WeakOrder& b) = default;
    friend std::strong_ordering operator<=>(const WeakOrder& a, const WeakOrder& b) {
        if (auto c = a.arity() <=> b.arity(); c != 0) return c;
        return a.ranks_ <=> b.ranks_;
    }

private:
    void canonicalize_in_place() {
        std::vector<int> sorted(ranks_);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int& r : ranks_) {
            r = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), r) -
                                 sorted.begin());
        }
        blocks_ = static_cast<int>(sorted.size());
    }

    std::vector<int> ranks_;
    int blocks_ = 0;
};

inline WeakOrder canonical_order(std::span<const Rational> values) {
    return WeakOrder::of_values(values);
}

struct WeakOrderHash {
    std::size_t operator()(const WeakOrder& w) const {
        std::size_t h = 1469598103934665603ull;
        for (int r : w.ranks()) {
            h ^= static_cast<std::size_t>(r) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// ── Enumeration ─────────────────────────────────────────────────────────────

// All weak orders on n coordinates (ordered Bell numbers: 1, 3, 13, 75, ...),
// in canonical sorted order. Built by extending the unique order on one
// coordinate; each order on n coordinates restricts uniquely to its prefix,
// so no deduplication is needed.
inline std::vector<WeakOrder> enumerate_weak_orders(int n, int arity_ceiling = kDefaultArityCeiling) {
    if (n < 1) throw std::invalid_argument("arity must be positive");
    if (n > arity_ceiling) throw std::invalid_argument("arity bound exceeded");
    std::vector<WeakOrder> cur = {WeakOrder({0})};
    for (int k = 2; k <= n; ++k) {
        std::vector<WeakOrder> next;
        for (const WeakOrder& w : cur)
            for (WeakOrder& e : w.extensions()) next.push_back(std::move(e));
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
}

// ── Joins ───────────────────────────────────────────────────────────────────
//
// All weak orders on the variable union whose restrictions to the two
// argument variable sets are w1 and w2. Built by interleaving the two block
// chains (shared variables pin blocks together), not by filtering all orders
// on the union.

namespace detail {

struct JoinState {
    const WeakOrder& w1;
    const WeakOrder& w2;
    // pin1[i] = block of w2 that block i of w1 must share a value with, or -1.
    std::vector<int> pin1, pin2;
    std::vector<std::vector<int>> coords1, coords2;  // block -> coordinate lists
    int union_arity = 0;
    std::vector<WeakOrder> out;

    void emit(std::vector<std::pair<int, int>>& merged) {
        // merged: sequence of (block-of-w1 or -1, block-of-w2 or -1), rank order.
        std::vector<int> ranks(static_cast<std::size_t>(union_arity), -1);
        for (std::size_t r = 0; r < merged.size(); ++r) {
            auto [b1, b2] = merged[r];
            if (b1 >= 0)
                for (int c : coords1[static_cast<std::size_t>(b1)]) ranks[static_cast<std::size_t>(c)] = static_cast<int>(r);
            if (b2 >= 0)
                for (int c : coords2[static_cast<std::size_t>(b2)]) ranks[static_cast<std::size_t>(c)] = static_cast<int>(r);
        }
        WeakOrder w(std::move(ranks));
        out.push_back(std::move(w));
    }

    void search(int i, int j, std::vector<std::pair<int, int>>& merged) {
        if (i == w1.blocks() && j == w2.blocks()) {
            emit(merged);
            return;
        }
        bool can_a = i < w1.blocks();
        bool can_b = j < w2.blocks();
        // Pinned blocks must be emitted jointly with their partner.
        if (can_a && pin1[static_cast<std::size_t>(i)] == -1) {
            merged.emplace_back(i, -1);
            search(i + 1, j, merged);
            merged.pop_back();
        }
        if (can_b && pin2[static_cast<std::size_t>(j)] == -1) {
            merged.emplace_back(-1, j);
            search(i, j + 1, merged);
            merged.pop_back();
        }
        if (can_a && can_b) {
            bool pinned_pair = pin1[static_cast<std::size_t>(i)] == j;
            bool both_free = pin1[static_cast<std::size_t>(i)] == -1 && pin2[static_cast<std::size_t>(j)] == -1;
            if (pinned_pair || both_free) {
                merged.emplace_back(i, j);
                search(i + 1, j + 1, merged);
                merged.pop_back();
            }
        }
    }
};

}  // namespace detail

// vars1/vars2 are variable ids; the result orders are over vars1 followed by
// the vars2 ids not already present, in vars2 order (written to out_vars if
// non-null). Inconsistent shared-variable patterns yield the empty set.
inline std::vector<WeakOrder> join_orders(const WeakOrder& w1, std::span<const int> vars1,
                                          const WeakOrder& w2, std::span<const int> vars2,
                                          std::vector<int>* out_vars = nullptr) {
    if (static_cast<int>(vars1.size()) != w1.arity() ||
        static_cast<int>(vars2.size()) != w2.arity())
        throw std::invalid_argument("join: variable list does not match arity");

    std::vector<int> union_vars(vars1.begin(), vars1.end());
    std::map<int, int> pos;  // var id -> union coordinate
    for (std::size_t i = 0; i < vars1.size(); ++i) pos[vars1[i]] = static_cast<int>(i);
    for (int v : vars2)
        if (!pos.count(v)) {
            pos[v] = static_cast<int>(union_vars.size());
            union_vars.push_back(v);
        }
    if (out_vars) *out_vars = union_vars;

    detail::JoinState st{w1, w2, {}, {}, {}, {}, static_cast<int>(union_vars.size()), {}};
    st.pin1.assign(static_cast<std::size_t>(w1.blocks()), -1);
    st.pin2.assign(static_cast<std::size_t>(w2.blocks()), -1);
    st.coords1.assign(static_cast<std::size_t>(w1.blocks()), {});
    st.coords2.assign(static_cast<std::size_t>(w2.blocks()), {});
    for (int i = 0; i < w1.arity(); ++i)
        st.coords1[static_cast<std::size_t>(w1.rank(i))].push_back(pos[vars1[static_cast<std::size_t>(i)]]);
    for (int j = 0; j < w2.arity(); ++j) {
        int c = pos[vars2[static_cast<std::size_t>(j)]];
        bool shared = false;
        for (std::size_t i = 0; i < vars1.size(); ++i)
            if (vars1[i] == vars2[static_cast<std::size_t>(j)]) { shared = true; break; }
        if (!shared) st.coords2[static_cast<std::size_t>(w2.rank(j))].push_back(c);
    }

    // Pins from shared variables; bail out on inconsistency.
    for (std::size_t i = 0; i < vars1.size(); ++i)
        for (std::size_t j = 0; j < vars2.size(); ++j)
            if (vars1[i] == vars2[j]) {
                int b1 = w1.rank(static_cast<int>(i));
                int b2 = w2.rank(static_cast<int>(j));
                int& p1 = st.pin1[static_cast<std::size_t>(b1)];
                int& p2 = st.pin2[static_cast<std::size_t>(b2)];
                if ((p1 != -1 && p1 != b2) || (p2 != -1 && p2 != b1)) return {};
                p1 = b2;
                p2 = b1;
            }
    // Pinned pairs must be order-isomorphic.
    int last = -1;
    for (int b1 = 0; b1 < w1.blocks(); ++b1) {
        int p = st.pin1[static_cast<std::size_t>(b1)];
        if (p == -1) continue;
        if (p <= last) return {};
        last = p;
    }

    std::vector<std::pair<int, int>> merged;
    st.search(0, 0, merged);
    std::sort(st.out.begin(), st.out.end());
    return st.out;
}

}  // namespace tqcsp

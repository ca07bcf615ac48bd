#pragma once

// Independent test oracles. Everything here recomputes expected values by a
// different route than the library (brute force, enumeration, concrete
// numeric instantiation) and must stay independent of the implementation
// paths it checks.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "tqcsp/binary_ops.hpp"
#include "tqcsp/piecewise.hpp"
#include "tqcsp/preserve.hpp"
#include "tqcsp/qcsp.hpp"
#include "tqcsp/rational.hpp"
#include "tqcsp/relation.hpp"
#include "tqcsp/weak_order.hpp"

namespace oracle {

using tqcsp::BinaryComparisonOp;
using tqcsp::Rational;
using tqcsp::TemporalRelation;
using tqcsp::UnaryPiecewiseOp;
using tqcsp::WeakOrder;

// ── Weak-order counting oracle ──────────────────────────────────────────────
// All surjections of [n] onto [m] for m <= n, deduplicated as rank vectors.
inline std::set<std::vector<int>> surjection_rank_vectors(int n) {
    std::set<std::vector<int>> out;
    for (int m = 1; m <= n; ++m) {
        std::vector<int> v(static_cast<std::size_t>(n), 0);
        while (true) {
            std::vector<bool> hit(static_cast<std::size_t>(m), false);
            for (int x : v) hit[static_cast<std::size_t>(x)] = true;
            if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) out.insert(v);
            int i = n - 1;
            while (i >= 0 && v[static_cast<std::size_t>(i)] == m - 1) {
                v[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++v[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

// ── Numeric image oracle for unary ops ──────────────────────────────────────
//
// Instantiates every placement with concrete rationals on a grid refining all
// breakpoints and image landmarks, applies the op's executable form
// componentwise, and canonicalizes. Enumerates all strictly increasing
// m-tuples of grid values as block values of the orbit.
inline std::set<WeakOrder> numeric_unary_images(const UnaryPiecewiseOp& op, const WeakOrder& w) {
    const int m = w.blocks();
    std::vector<Rational> grid = op.numeric_grid(std::max(m, 2));
    std::set<WeakOrder> out;
    std::vector<int> pick(static_cast<std::size_t>(m));
    auto rec = [&](auto&& self, int b, int from) -> void {
        if (b == m) {
            std::vector<Rational> imgs;
            imgs.reserve(static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k)
                imgs.push_back(op.eval(grid[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])]));
            std::vector<Rational> tuple;
            tuple.reserve(static_cast<std::size_t>(w.arity()));
            for (int i = 0; i < w.arity(); ++i)
                tuple.push_back(imgs[static_cast<std::size_t>(w.rank(i))]);
            out.insert(WeakOrder::of_values(std::span<const Rational>(tuple)));
            return;
        }
        for (int g = from; g < static_cast<int>(grid.size()); ++g) {
            pick[static_cast<std::size_t>(b)] = g;
            self(self, b + 1, g + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// ── Numeric image oracle for binary comparison-rule ops ─────────────────────
//
// Concrete first-argument tuples are drawn on a grid around 0 (covering every
// sign placement of the blocks); the rule is then evaluated on the concrete
// rationals to rank the output tuple. A closed-form representative of pp
// cross-checks the rule itself elsewhere.
inline std::set<WeakOrder> numeric_binary_images(const BinaryComparisonOp& op, const WeakOrder& w1,
                                                 const WeakOrder& w2) {
    const int m1 = w1.blocks();
    std::set<WeakOrder> out;
    // every sign split of the m1 blocks around 0: below / at / above
    for (int slot = 0; slot <= 2 * m1; ++slot) {
        std::vector<Rational> a_vals(static_cast<std::size_t>(m1));
        for (int b = 0; b < m1; ++b) {
            int v;
            if (slot % 2 == 1) v = b - slot / 2;                 // block slot/2 sits at 0
            else v = b < slot / 2 ? b - slot / 2 : b - slot / 2 + 1;  // 0 in gap slot/2
            a_vals[static_cast<std::size_t>(b)] = Rational(v);
        }
        std::vector<Rational> b_vals(static_cast<std::size_t>(w2.blocks()));
        for (int b = 0; b < w2.blocks(); ++b) b_vals[static_cast<std::size_t>(b)] = Rational(b);

        const int n = w1.arity();
        auto sgn = [](const Rational& r) { return r.sign(); };
        auto cmp3 = [](const Rational& x, const Rational& y) { return x < y ? -1 : x > y ? 1 : 0; };
        auto out_cmp = [&](int i, int j) {
            const Rational& a1 = a_vals[static_cast<std::size_t>(w1.rank(i))];
            const Rational& a2 = a_vals[static_cast<std::size_t>(w1.rank(j))];
            const Rational& b1 = b_vals[static_cast<std::size_t>(w2.rank(i))];
            const Rational& b2 = b_vals[static_cast<std::size_t>(w2.rank(j))];
            return op.compare(sgn(a1), sgn(a2), cmp3(a1, a2), cmp3(b1, b2));
        };
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::sort(idx.begin(), idx.end(), [&](int i, int j) { return out_cmp(i, j) < 0; });
        std::vector<int> ranks(static_cast<std::size_t>(n));
        int r = 0;
        ranks[static_cast<std::size_t>(idx[0])] = 0;
        for (int k = 1; k < n; ++k) {
            if (out_cmp(idx[static_cast<std::size_t>(k - 1)], idx[static_cast<std::size_t>(k)]) < 0) ++r;
            ranks[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] = r;
        }
        out.insert(WeakOrder(std::move(ranks)));
    }
    return out;
}

// Closed-form representative of pp: a for a <= 0, otherwise an
// order-embedding of b into (0,inf).
inline Rational concrete_pp(const Rational& a, const Rational& b) {
    if (a.sign() <= 0) return a;
    if (b.sign() <= 0) return Rational(1) / (Rational(1) - b);  // (0,1]
    return b + Rational(1);                                     // (1,inf)
}

// ── Exhaustive relation enumeration ─────────────────────────────────────────
inline std::vector<TemporalRelation> all_relations(int arity) {
    std::vector<WeakOrder> orbits = tqcsp::enumerate_weak_orders(arity);
    std::vector<TemporalRelation> out;
    const std::size_t count = static_cast<std::size_t>(1) << orbits.size();
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        TemporalRelation r{arity, {}, ""};
        for (std::size_t i = 0; i < orbits.size(); ++i)
            if (mask & (static_cast<std::size_t>(1) << i)) r.orbits.insert(orbits[i]);
        out.push_back(std::move(r));
    }
    return out;
}

// ── Naive QCSP evaluator ────────────────────────────────────────────────────
//
// Keeps the full weak order of all assigned variables, no memoization, no
// projection, no early atom checks: every atom is evaluated at the leaves
// only. Independent of the production evaluator's state machinery.
inline bool naive_qcsp(const tqcsp::QcspInstance& inst, const tqcsp::Language& lang,
                       std::size_t pos, const std::vector<tqcsp::WeakOrder>& states) {
    using tqcsp::Formula;
    if (pos == inst.prefix.size()) {
        const tqcsp::WeakOrder& full = states.back();
        std::map<std::string, int> position;
        for (std::size_t i = 0; i < inst.prefix.size(); ++i)
            position[inst.prefix[i].second] = static_cast<int>(i);
        for (const tqcsp::FormulaPtr& a : inst.atoms) {
            std::vector<std::string> names;
            const tqcsp::TemporalRelation* rel = nullptr;
            tqcsp::TemporalRelation builtin;
            if (a->kind == Formula::Kind::RelAtom) {
                rel = lang.find(a->rel);
                names = a->args;
            } else {
                builtin = tqcsp::relation_of(tqcsp::Formula::atom("l", a->cmp, "r"),
                                             std::vector<std::string>{"l", "r"});
                rel = &builtin;
                names = {a->lhs, a->rhs};
            }
            std::vector<int> idx;
            for (const std::string& v : names) idx.push_back(position.at(v));
            if (!rel->contains(full.restrict_to(idx))) return false;
        }
        return true;
    }
    bool exists = inst.prefix[pos].first == tqcsp::Quantifier::Exists;
    std::vector<tqcsp::WeakOrder> children;
    if (states.empty()) children = {tqcsp::WeakOrder({0})};
    else children = states.back().extensions();
    for (const tqcsp::WeakOrder& child : children) {
        std::vector<tqcsp::WeakOrder> next = states;
        next.push_back(child);
        bool sub = naive_qcsp(inst, lang, pos + 1, next);
        if (exists && sub) return true;
        if (!exists && !sub) return false;
    }
    return !exists;
}

inline bool naive_qcsp(const tqcsp::QcspInstance& inst, const tqcsp::Language& lang) {
    return naive_qcsp(inst, lang, 0, {});
}

// ── Random helpers (fixed seeds at call sites) ──────────────────────────────
inline WeakOrder random_weak_order(std::mt19937& rng, int arity) {
    std::vector<int> ranks(static_cast<std::size_t>(arity));
    std::uniform_int_distribution<int> dist(0, arity - 1);
    for (int& r : ranks) r = dist(rng);
    return WeakOrder(std::move(ranks));
}

inline TemporalRelation random_relation(std::mt19937& rng, int arity, double density = 0.5) {
    TemporalRelation r{arity, {}, ""};
    std::bernoulli_distribution keep(density);
    for (const WeakOrder& w : tqcsp::enumerate_weak_orders(arity))
        if (keep(rng)) r.orbits.insert(w);
    return r;
}

}  // namespace oracle

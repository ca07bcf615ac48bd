#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tqcsp/binary_ops.hpp"
#include "tqcsp/piecewise.hpp"
#include "tqcsp/relation.hpp"
#include "tqcsp/weak_order.hpp"

namespace tqcsp {

// ── Placements ──────────────────────────────────────────────────────────────
//
// A placement assigns each rank block of a weak order to a cell or attainable
// breakpoint of a piecewise operation, consistently with the cell order: the
// finite case split that makes preservation decidable. Open cells host any
// number of blocks, point cells at most one, unattainable cuts none.

using Placement = std::vector<int>;  // block -> cell index (weakly increasing)

inline std::vector<Placement> enumerate_placements(const UnaryPiecewiseOp& op, int blocks) {
    std::vector<Placement> out;
    Placement cur(static_cast<std::size_t>(blocks));
    const auto& cells = op.cells();
    auto rec = [&](auto&& self, int b, int min_cell) -> void {
        if (b == blocks) {
            out.push_back(cur);
            return;
        }
        for (int c = min_cell; c < static_cast<int>(cells.size()); ++c) {
            cur[static_cast<std::size_t>(b)] = c;
            // at most one block per point cell
            int next_min = cells[static_cast<std::size_t>(c)].is_point ? c + 1 : c;
            self(self, b + 1, next_min);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// ── Symbolic image computation ──────────────────────────────────────────────

namespace detail {

// Per-block output constraints for one placement.
struct BlockImage {
    bool pinned = false;
    int landmark = -1;       // pinned blocks
    ImageInterval interval;  // free blocks
};

// Candidate output pattern feasibility on the landmark scale. Positions are
// integers: 2g = dense gap g, 2j+1 = landmark j. Greedy minimal assignment
// over output classes; correctness is the usual exchange argument on chains
// of interval constraints.
inline bool feasible_pattern(const std::vector<int>& cand_ranks,
                             const std::vector<BlockImage>& blocks, int num_landmarks) {
    int classes = 0;
    for (int r : cand_ranks) classes = std::max(classes, r + 1);
    const int top = 2 * num_landmarks;
    int prev = -1;
    for (int cls = 0; cls < classes; ++cls) {
        int pinned_lm = -1;
        int lo_pos = 0, hi_pos = top;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (cand_ranks[b] != cls) continue;
            const BlockImage& bi = blocks[b];
            if (bi.pinned) {
                if (pinned_lm != -1 && pinned_lm != bi.landmark) return false;
                pinned_lm = bi.landmark;
            } else {
                if (bi.interval.lo >= 0) lo_pos = std::max(lo_pos, 2 * bi.interval.lo + 2);
                if (bi.interval.hi >= 0) hi_pos = std::min(hi_pos, 2 * bi.interval.hi);
            }
        }
        int min_start = prev == -1 ? 0 : (prev % 2 == 0 ? prev : prev + 1);
        int pos;
        if (pinned_lm != -1) {
            pos = 2 * pinned_lm + 1;
            if (pos < min_start || pos < lo_pos || pos > hi_pos) return false;
        } else {
            pos = std::max(lo_pos, min_start);
            if (pos > hi_pos) return false;
        }
        prev = pos;
    }
    return true;
}

// Within-cell monotonicity: blocks sharing a monotone cell must be strictly
// ordered in the direction of the cell.
inline bool chains_ok(const std::vector<int>& cand_ranks, const Placement& placement,
                      const UnaryPiecewiseOp& op) {
    for (std::size_t b = 0; b + 1 < placement.size(); ++b) {
        if (placement[b] != placement[b + 1]) continue;
        const Cell& cell = op.cells()[static_cast<std::size_t>(placement[b])];
        if (cell.behavior == CellBehavior::Increasing) {
            if (!(cand_ranks[b] < cand_ranks[b + 1])) return false;
        } else if (cell.behavior == CellBehavior::Decreasing) {
            if (!(cand_ranks[b] > cand_ranks[b + 1])) return false;
        }
        // constant cells: equality is forced by the shared pinned landmark
    }
    return true;
}

}  // namespace detail

// All weak orders of op(t) over rational tuples t in the orbit w: for each
// placement of w's blocks, every output pattern consistent with the cell
// behaviors and realizable on the landmark scale.
inline std::set<WeakOrder> unary_images(const UnaryPiecewiseOp& op, const WeakOrder& w) {
    std::set<WeakOrder> images;
    const int m = w.blocks();
    std::vector<WeakOrder> candidates = enumerate_weak_orders(m);
    for (const Placement& pl : enumerate_placements(op, m)) {
        std::vector<detail::BlockImage> blocks(static_cast<std::size_t>(m));
        for (int b = 0; b < m; ++b) {
            const Cell& cell = op.cells()[static_cast<std::size_t>(pl[static_cast<std::size_t>(b)])];
            if (cell.monotone()) {
                blocks[static_cast<std::size_t>(b)] = {false, -1, cell.image};
            } else {
                blocks[static_cast<std::size_t>(b)] = {true, cell.landmark, {}};
            }
        }
        for (const WeakOrder& cand : candidates) {
            if (!detail::chains_ok(cand.ranks(), pl, op)) continue;
            if (!detail::feasible_pattern(cand.ranks(), blocks,
                                          static_cast<int>(op.landmarks().size())))
                continue;
            std::vector<int> out(static_cast<std::size_t>(w.arity()));
            for (int i = 0; i < w.arity(); ++i)
                out[static_cast<std::size_t>(i)] = cand.rank(w.rank(i));
            images.insert(WeakOrder(std::move(out)));
        }
    }
    return images;
}

// ── Preservation checks ─────────────────────────────────────────────────────

struct UnaryViolation {
    WeakOrder source;
    WeakOrder image;
};

// Least witness in orbit/image enumeration order, or nullopt when preserved.
inline std::optional<UnaryViolation> preserves_unary(const UnaryPiecewiseOp& op,
                                                     const TemporalRelation& r) {
    for (const WeakOrder& w : r.orbits)
        for (const WeakOrder& img : unary_images(op, w))
            if (!r.contains(img)) return UnaryViolation{w, img};
    return std::nullopt;
}

struct BinaryViolation {
    WeakOrder lhs, rhs;
    int zero_slot;  // placement of 0 in lhs's block chain (extension slot)
    WeakOrder image;
};

// Output pattern of a comparison-rule op on argument orbits (w1, w2) with the
// given placement of 0 in w1's block chain. Slot numbering follows
// WeakOrder::extensions: even 2g = 0 lies in gap g, odd 2k+1 = 0 equals
// block k.
inline WeakOrder binary_image(const BinaryComparisonOp& op, const WeakOrder& w1,
                              const WeakOrder& w2, int zero_slot) {
    const int n = w1.arity();
    std::vector<int> sign(static_cast<std::size_t>(w1.blocks()));
    for (int b = 0; b < w1.blocks(); ++b) {
        if (zero_slot % 2 == 1) {
            int k = zero_slot / 2;
            sign[static_cast<std::size_t>(b)] = b < k ? -1 : b == k ? 0 : 1;
        } else {
            int g = zero_slot / 2;
            sign[static_cast<std::size_t>(b)] = b < g ? -1 : 1;
        }
    }
    auto cmp3 = [](int a, int b) { return a < b ? -1 : a > b ? 1 : 0; };
    auto out_cmp = [&](int i, int j) {
        return op.compare(sign[static_cast<std::size_t>(w1.rank(i))],
                          sign[static_cast<std::size_t>(w1.rank(j))],
                          cmp3(w1.rank(i), w1.rank(j)), cmp3(w2.rank(i), w2.rank(j)));
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
    WeakOrder w(std::move(ranks));
    return w;
}

inline std::optional<BinaryViolation> preserves_binary(const BinaryComparisonOp& op,
                                                       const TemporalRelation& r) {
    for (const WeakOrder& w1 : r.orbits)
        for (const WeakOrder& w2 : r.orbits)
            for (int slot = 0; slot <= 2 * w1.blocks(); ++slot) {
                WeakOrder img = binary_image(op, w1, w2, slot);
                if (!r.contains(img)) return BinaryViolation{w1, w2, slot, img};
            }
    return std::nullopt;
}

struct JoinOpViolation {
    WeakOrder lhs, rhs;
    WeakOrder join;
    WeakOrder image;
};

// min/max need the relative order of the two argument tuples, i.e. all joins
// of the argument orbits over disjoint variable sets.
inline std::optional<JoinOpViolation> preserves_join_op(const JoinRuleOp& op,
                                                        const TemporalRelation& r) {
    const int n = r.arity;
    std::vector<int> vars1(static_cast<std::size_t>(n)), vars2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        vars1[static_cast<std::size_t>(i)] = i;
        vars2[static_cast<std::size_t>(i)] = n + i;
    }
    for (const WeakOrder& w1 : r.orbits)
        for (const WeakOrder& w2 : r.orbits)
            for (const WeakOrder& j : join_orders(w1, vars1, w2, vars2)) {
                std::vector<int> out(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    int a = j.rank(i), b = j.rank(n + i);
                    out[static_cast<std::size_t>(i)] = op.is_min ? std::min(a, b) : std::max(a, b);
                }
                WeakOrder img(std::move(out));
                if (!r.contains(img)) return JoinOpViolation{w1, w2, j, img};
            }
    return std::nullopt;
}

// True iff the all-equal orbit of r's arity is present (then every constant
// operation preserves r).
inline bool preserved_by_constant(const TemporalRelation& r) {
    return r.contains(WeakOrder(std::vector<int>(static_cast<std::size_t>(r.arity), 0)));
}

// True iff membership depends only on the equality pattern: every reordering
// of an orbit's blocks stays inside.
inline bool closed_under_all_permutations(const TemporalRelation& r) {
    for (const WeakOrder& w : r.orbits) {
        std::vector<int> perm(static_cast<std::size_t>(w.blocks()));
        for (int i = 0; i < w.blocks(); ++i) perm[static_cast<std::size_t>(i)] = i;
        do {
            std::vector<int> ranks(static_cast<std::size_t>(w.arity()));
            for (int i = 0; i < w.arity(); ++i)
                ranks[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(w.rank(i))];
            if (!r.contains(WeakOrder(std::move(ranks)))) return false;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return true;
}

// ── Operation registry ──────────────────────────────────────────────────────

using OpRef = std::variant<UnaryPiecewiseOp, BinaryComparisonOp, JoinRuleOp>;

inline std::string op_name(const OpRef& op) {
    return std::visit([](const auto& o) -> std::string {
        if constexpr (requires { o.name(); }) return o.name();
        else return o.name;
    }, op);
}

inline OpRef dual_of(const OpRef& op) {
    if (const auto* u = std::get_if<UnaryPiecewiseOp>(&op)) return u->dual();
    if (const auto* b = std::get_if<BinaryComparisonOp>(&op)) return b->dual();
    const auto& j = std::get<JoinRuleOp>(op);
    return JoinRuleOp{j.is_min ? "max" : "min", !j.is_min};  // dual of min is max
}

// Catalog addressable by the CLI names.
inline std::map<std::string, OpRef> op_registry() {
    std::map<std::string, OpRef> reg;
    reg.emplace("minus", ops::minus_op());
    reg.emplace("cyc", ops::cyc_op());
    reg.emplace("wave", ops::wave_op());
    reg.emplace("peak", ops::peak_op());
    for (int i = 1; i <= 5; ++i) reg.emplace("su" + std::to_string(i), ops::su_op(i));
    reg.emplace("ic", ops::ic_op());
    reg.emplace("ci", ops::ci_op());
    reg.emplace("const", ops::const_op());
    reg.emplace("pp", pp_op());
    reg.emplace("dpp", dpp_op());
    reg.emplace("lele", lele_op());
    reg.emplace("dlele", dlele_op());
    reg.emplace("min", min_op());
    reg.emplace("max", max_op());
    return reg;
}

inline OpRef op_by_name(const std::string& name) {
    auto reg = op_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw std::invalid_argument("unknown operation: " + name);
    return it->second;
}

// ── Language-level checks ───────────────────────────────────────────────────

struct LanguageViolation {
    std::string relation;
    std::string detail;  // deterministic least witness, rendered
};

inline std::optional<LanguageViolation> preserves_relation(const OpRef& op,
                                                           const TemporalRelation& r) {
    if (const auto* u = std::get_if<UnaryPiecewiseOp>(&op)) {
        if (auto v = preserves_unary(*u, r))
            return LanguageViolation{r.name, "orbit " + v->source.str() + " maps to " +
                                                 v->image.str() + " outside the relation"};
        return std::nullopt;
    }
    if (const auto* b = std::get_if<BinaryComparisonOp>(&op)) {
        if (auto v = preserves_binary(*b, r))
            return LanguageViolation{r.name, "orbits " + v->lhs.str() + ", " + v->rhs.str() +
                                                 " (zero slot " + std::to_string(v->zero_slot) +
                                                 ") map to " + v->image.str() +
                                                 " outside the relation"};
        return std::nullopt;
    }
    const auto& j = std::get<JoinRuleOp>(op);
    if (auto v = preserves_join_op(j, r))
        return LanguageViolation{r.name, "orbits " + v->lhs.str() + ", " + v->rhs.str() +
                                             " joined as " + v->join.str() + " map to " +
                                             v->image.str() + " outside the relation"};
    return std::nullopt;
}

inline std::optional<LanguageViolation> preserves_language(const OpRef& op, const Language& lang) {
    for (const TemporalRelation& r : lang.relations)
        if (auto v = preserves_relation(op, r)) return v;
    return std::nullopt;
}

}  // namespace tqcsp

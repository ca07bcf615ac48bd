#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tqcsp/binary_ops.hpp"
#include "tqcsp/definability.hpp"
#include "tqcsp/preserve.hpp"

namespace tqcsp {

// ── Exhaustive arity-3 law suites ───────────────────────────────────────────
//
// All 8192 ternary relations as 13-bit masks over the sorted orbit list, with
// precomputed image tables so each full sweep runs in milliseconds. These are
// the law checks the build stands on:
//   (a) Ord-Horn definable      <=>  preserved by lele and dlele
//   (b) up-closed (positive)    <=>  preserved by wave
//   (c) preserved by ic and ci   =>  preserved by su1
//   (d) pattern-closed          <=>  preserved by minus and cyc
//   (e) self-dual and preserved by (lele and dlele) or (pp and dpp)
//                                =>  Ord-Horn definable

class Arity3Tables {
public:
    Arity3Tables() : orbits_(enumerate_weak_orders(3)) {
        for (std::size_t i = 0; i < orbits_.size(); ++i) index_[orbits_[i]] = static_cast<int>(i);
        for (const auto& [name, op] : op_registry()) {
            if (const auto* u = std::get_if<UnaryPiecewiseOp>(&op)) {
                auto& table = unary_[name];
                table.fill(0);
                for (std::size_t i = 0; i < orbits_.size(); ++i)
                    for (const WeakOrder& img : unary_images(*u, orbits_[i]))
                        table[i] |= bit(index_.at(img));
            } else if (const auto* b = std::get_if<BinaryComparisonOp>(&op)) {
                auto& triples = binary_[name];
                for (std::size_t i = 0; i < orbits_.size(); ++i)
                    for (std::size_t j = 0; j < orbits_.size(); ++j)
                        for (int slot = 0; slot <= 2 * orbits_[i].blocks(); ++slot)
                            triples.push_back({static_cast<int>(i), static_cast<int>(j),
                                               index_.at(binary_image(*b, orbits_[i], orbits_[j], slot))});
            }
        }
        for (std::size_t i = 0; i < orbits_.size(); ++i) {
            dominated_[i] = 0;
            pattern_[i] = 0;
            dual_[i] = index_.at(orbits_[i].dual());
            for (std::size_t j = 0; j < orbits_.size(); ++j) {
                if (atom_dominates(orbits_[i], orbits_[j])) dominated_[i] |= bit(static_cast<int>(j));
                if (same_partition(orbits_[i], orbits_[j])) pattern_[i] |= bit(static_cast<int>(j));
            }
        }
        for (OHClause& c : detail::all_oh_clauses(3)) {
            std::uint16_t mask = 0;
            for (std::size_t i = 0; i < orbits_.size(); ++i)
                if (c.satisfied(orbits_[i])) mask |= bit(static_cast<int>(i));
            clause_masks_.push_back(mask);
        }
    }

    static constexpr std::uint16_t kFull = 0x1fff;  // all 13 orbits

    const std::vector<WeakOrder>& orbits() const { return orbits_; }
    int orbit_index(const WeakOrder& w) const { return index_.at(w); }

    std::uint16_t dual_mask(std::uint16_t r) const {
        std::uint16_t out = 0;
        for (int i = 0; i < 13; ++i)
            if (r & bit(i)) out |= bit(dual_[static_cast<std::size_t>(i)]);
        return out;
    }

    bool preserved_unary(const std::string& op, std::uint16_t r) const {
        const auto& table = unary_.at(op);
        for (int i = 0; i < 13; ++i)
            if ((r & bit(i)) && (table[static_cast<std::size_t>(i)] & ~r)) return false;
        return true;
    }

    bool preserved_binary(const std::string& op, std::uint16_t r) const {
        for (const auto& t : binary_.at(op))
            if ((r & bit(t[0])) && (r & bit(t[1])) && !(r & bit(t[2]))) return false;
        return true;
    }

    // conjunction of all entailed OH clauses equals the relation exactly
    bool oh_definable(std::uint16_t r) const {
        std::uint16_t conj = kFull;
        for (std::uint16_t cm : clause_masks_)
            if ((r & ~cm) == 0) conj &= cm;
        return conj == r;
    }

    bool up_closed(std::uint16_t r) const {
        for (int i = 0; i < 13; ++i)
            if ((r & bit(i)) && (dominated_[static_cast<std::size_t>(i)] & ~r)) return false;
        return true;
    }

    bool pattern_closed(std::uint16_t r) const {
        for (int i = 0; i < 13; ++i)
            if ((r & bit(i)) && (pattern_[static_cast<std::size_t>(i)] & ~r)) return false;
        return true;
    }

    TemporalRelation relation_of_mask(std::uint16_t r) const {
        TemporalRelation out{3, {}, ""};
        for (int i = 0; i < 13; ++i)
            if (r & bit(i)) out.orbits.insert(orbits_[static_cast<std::size_t>(i)]);
        return out;
    }

private:
    static std::uint16_t bit(int i) { return static_cast<std::uint16_t>(1u << i); }

    static bool same_partition(const WeakOrder& a, const WeakOrder& b) {
        for (int i = 0; i < a.arity(); ++i)
            for (int j = i + 1; j < a.arity(); ++j)
                if ((a.rank(i) == a.rank(j)) != (b.rank(i) == b.rank(j))) return false;
        return true;
    }

    std::vector<WeakOrder> orbits_;
    std::map<WeakOrder, int> index_;
    std::map<std::string, std::array<std::uint16_t, 13>> unary_;
    std::map<std::string, std::vector<std::array<int, 3>>> binary_;
    std::array<std::uint16_t, 13> dominated_{};
    std::array<std::uint16_t, 13> pattern_{};
    std::array<int, 13> dual_{};
    std::vector<std::uint16_t> clause_masks_;
};

struct SweepResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::optional<std::uint16_t> first_violation;
};

inline std::vector<SweepResult> run_arity3_sweeps() {
    Arity3Tables t;
    std::vector<SweepResult> results;
    auto sweep = [&](const std::string& name, auto&& law) {
        SweepResult res{name, 0, 0, std::nullopt};
        for (std::uint32_t r = 0; r <= Arity3Tables::kFull; ++r) {
            ++res.checked;
            if (!law(static_cast<std::uint16_t>(r))) {
                ++res.violations;
                if (!res.first_violation) res.first_violation = static_cast<std::uint16_t>(r);
            }
        }
        results.push_back(std::move(res));
    };
    sweep("oh-definable iff lele and dlele", [&](std::uint16_t r) {
        bool oh = t.oh_definable(r);
        bool pres = t.preserved_binary("lele", r) && t.preserved_binary("dlele", r);
        return oh == pres;
    });
    sweep("positive (up-closed) iff wave", [&](std::uint16_t r) {
        return t.up_closed(r) == t.preserved_unary("wave", r);
    });
    sweep("ic and ci imply su1", [&](std::uint16_t r) {
        if (!t.preserved_unary("ic", r) || !t.preserved_unary("ci", r)) return true;
        return t.preserved_unary("su1", r);
    });
    sweep("pattern-closed iff minus and cyc", [&](std::uint16_t r) {
        bool closed = t.pattern_closed(r);
        bool pres = t.preserved_unary("minus", r) && t.preserved_unary("cyc", r);
        return closed == pres;
    });
    sweep("self-dual with lele/dlele or pp/dpp is oh-definable", [&](std::uint16_t r) {
        if (t.dual_mask(r) != r) return true;
        bool route = (t.preserved_binary("lele", r) && t.preserved_binary("dlele", r)) ||
                     (t.preserved_binary("pp", r) && t.preserved_binary("dpp", r));
        if (!route) return true;
        return t.oh_definable(r);
    });
    return results;
}

}  // namespace tqcsp

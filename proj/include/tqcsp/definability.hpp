#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tqcsp/config.hpp"
#include "tqcsp/formula.hpp"
#include "tqcsp/pp.hpp"
#include "tqcsp/preserve.hpp"
#include "tqcsp/relation.hpp"

namespace tqcsp {

// ── Ord-Horn definability ───────────────────────────────────────────────────
//
// An OH clause is (x1 != y1 | ... | xk != yk | x R y) with R in {<, <=, =};
// either part may be absent. OH definitions are clause conjunctions, so the
// canonical-implicates method is complete: R is OH-definable iff the
// conjunction of all clauses entailed by R equals R exactly.

struct OHClause {
    std::vector<std::pair<int, int>> diseqs;  // unordered index pairs, i < j
    struct Literal {
        int lhs;
        Cmp rel;  // Less, Leq or Eq
        int rhs;
    };
    std::optional<Literal> literal;

    bool satisfied(const WeakOrder& w) const {
        for (auto [i, j] : diseqs)
            if (w.rank(i) != w.rank(j)) return true;
        if (literal) return cmp_eval(literal->rel, w.rank(literal->lhs), w.rank(literal->rhs));
        return false;
    }

    int size() const { return static_cast<int>(diseqs.size()) + (literal ? 1 : 0); }

    FormulaPtr to_formula(const std::vector<std::string>& names) const {
        std::vector<FormulaPtr> parts;
        for (auto [i, j] : diseqs)
            parts.push_back(Formula::atom(names[static_cast<std::size_t>(i)], Cmp::Neq,
                                          names[static_cast<std::size_t>(j)]));
        if (literal)
            parts.push_back(Formula::atom(names[static_cast<std::size_t>(literal->lhs)],
                                          literal->rel,
                                          names[static_cast<std::size_t>(literal->rhs)]));
        if (parts.empty())  // the empty clause is unsatisfiable
            return Formula::conj({Formula::atom(names[0], Cmp::Less, names[0])});
        return Formula::disj(std::move(parts));
    }
};

struct OHCertificate {
    int arity = 0;
    std::vector<OHClause> clauses;

    FormulaPtr to_formula(const std::vector<std::string>& names) const {
        std::vector<FormulaPtr> parts;
        for (const OHClause& c : clauses) parts.push_back(c.to_formula(names));
        if (parts.empty()) return Formula::atom(names[0], Cmp::Leq, names[0]);  // trivially true
        return Formula::conj(std::move(parts));
    }
};

namespace detail {

inline std::vector<OHClause> all_oh_clauses(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<std::optional<OHClause::Literal>> literals = {std::nullopt};
    for (Cmp rel : {Cmp::Less, Cmp::Leq, Cmp::Eq})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) literals.push_back(OHClause::Literal{i, rel, j});
    std::vector<OHClause> out;
    const std::size_t subsets = static_cast<std::size_t>(1) << pairs.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::pair<int, int>> ds;
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (mask & (static_cast<std::size_t>(1) << p)) ds.push_back(pairs[p]);
        for (const auto& lit : literals) out.push_back(OHClause{ds, lit});
    }
    // canonical order: small clauses first, then literal shape, then pairs
    std::sort(out.begin(), out.end(), [](const OHClause& a, const OHClause& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        bool al = a.literal.has_value(), bl = b.literal.has_value();
        if (al != bl) return al > bl;
        if (al && bl) {
            auto ka = std::tuple(static_cast<int>(a.literal->rel), a.literal->lhs, a.literal->rhs);
            auto kb = std::tuple(static_cast<int>(b.literal->rel), b.literal->lhs, b.literal->rhs);
            if (ka != kb) return ka < kb;
        }
        return a.diseqs < b.diseqs;
    });
    return out;
}

// Cost-weighted greedy cover: picks the best exclusion-per-clause ratio each
// round, ties resolving to the canonical-least item. Deterministic.
template <typename Item>
std::vector<Item> greedy_cover(const std::vector<Item>& items,
                               const std::vector<std::set<WeakOrder>>& excludes,
                               std::set<WeakOrder> to_exclude, const std::vector<int>& costs) {
    std::vector<Item> chosen;
    std::vector<bool> used(items.size(), false);
    while (!to_exclude.empty()) {
        std::size_t best = items.size();
        std::size_t best_gain = 0;
        int best_cost = 1;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (used[i]) continue;
            std::size_t gain = 0;
            for (const WeakOrder& w : excludes[i])
                if (to_exclude.count(w)) ++gain;
            if (gain == 0) continue;
            // gain/cost > best_gain/best_cost, by cross multiplication
            if (best == items.size() || gain * static_cast<std::size_t>(best_cost) >
                                            best_gain * static_cast<std::size_t>(costs[i])) {
                best_gain = gain;
                best_cost = costs[i];
                best = i;
            }
        }
        if (best == items.size()) break;  // cannot make progress
        used[best] = true;
        chosen.push_back(items[best]);
        for (const WeakOrder& w : excludes[best]) to_exclude.erase(w);
    }
    return chosen;
}

}  // namespace detail

// Complete decision: computes all entailed OH clauses, compares their
// conjunction with R, and prunes to a small certificate.
inline std::optional<OHCertificate> ordhorn_definition(const TemporalRelation& r,
                                                       int ceiling = kDefaultArityCeiling) {
    std::vector<WeakOrder> all = enumerate_weak_orders(r.arity, ceiling);
    std::vector<OHClause> entailed;
    for (OHClause& c : detail::all_oh_clauses(r.arity)) {
        bool ok = true;
        for (const WeakOrder& w : r.orbits)
            if (!c.satisfied(w)) {
                ok = false;
                break;
            }
        if (ok) entailed.push_back(std::move(c));
    }
    std::set<WeakOrder> excluded_target;
    for (const WeakOrder& w : all) {
        bool in_conj = true;
        for (const OHClause& c : entailed)
            if (!c.satisfied(w)) {
                in_conj = false;
                break;
            }
        if (in_conj && !r.contains(w)) return std::nullopt;  // conjunction exceeds R
        if (!r.contains(w)) excluded_target.insert(w);
    }
    std::vector<std::set<WeakOrder>> excludes(entailed.size());
    std::vector<int> costs(entailed.size());
    for (std::size_t i = 0; i < entailed.size(); ++i) {
        costs[i] = std::max(entailed[i].size(), 1);
        for (const WeakOrder& w : excluded_target)
            if (!entailed[i].satisfied(w)) excludes[i].insert(w);
    }
    OHCertificate cert{r.arity, detail::greedy_cover(entailed, excludes, excluded_target, costs)};
    return cert;
}

// ── Positive definability ───────────────────────────────────────────────────
//
// Positive formulas (and, or, <= only) are monotone in the <=-atoms, so R is
// positive-definable iff its orbit set is upward closed in atom inclusion;
// the certificate is the disjunction over orbits of their <=-atom
// conjunctions. Decided by up-closure, not clause conjunction: positive
// definitions allow conjunctions under disjunctions.

inline bool atom_dominates(const WeakOrder& lo, const WeakOrder& hi) {
    for (int i = 0; i < lo.arity(); ++i)
        for (int j = 0; j < lo.arity(); ++j)
            if (i != j && lo.rank(i) <= lo.rank(j) && !(hi.rank(i) <= hi.rank(j))) return false;
    return true;
}

struct PositiveResult {
    std::optional<FormulaPtr> certificate;
    // witness when not positive: inside member dominated by an outside orbit
    std::optional<std::pair<WeakOrder, WeakOrder>> violation;
    bool positive() const { return certificate.has_value(); }
};

inline PositiveResult positive_definition(const TemporalRelation& r,
                                          int ceiling = kDefaultArityCeiling) {
    std::vector<std::string> names = default_var_names(r.arity);
    for (const WeakOrder& w : r.orbits)
        for (const WeakOrder& other : enumerate_weak_orders(r.arity, ceiling))
            if (!r.contains(other) && atom_dominates(w, other))
                return {std::nullopt, std::make_pair(w, other)};
    if (r.orbits.empty()) {
        // vacuously up-closed; the quantifier-free DNF degenerates, but a
        // universally guarded atom is an honest positive definition of the
        // empty set
        return {Formula::quant(Formula::Kind::Forall, "_u",
                               Formula::atom("_u", Cmp::Leq, names[0])),
                std::nullopt};
    }
    std::vector<FormulaPtr> disjuncts;
    for (const WeakOrder& w : r.orbits) {
        std::vector<FormulaPtr> atoms;
        for (int i = 0; i < r.arity; ++i)
            for (int j = 0; j < r.arity; ++j)
                if (i != j && w.rank(i) <= w.rank(j))
                    atoms.push_back(Formula::atom(names[static_cast<std::size_t>(i)], Cmp::Leq,
                                                  names[static_cast<std::size_t>(j)]));
        if (atoms.empty()) atoms.push_back(Formula::atom(names[0], Cmp::Leq, names[0]));
        disjuncts.push_back(Formula::conj(std::move(atoms)));
    }
    return {Formula::disj(std::move(disjuncts)), std::nullopt};
}

// ── Equality definability ───────────────────────────────────────────────────

struct EqualityResult {
    std::optional<FormulaPtr> certificate;
    bool equality() const { return certificate.has_value(); }
};

inline EqualityResult equality_definition(const TemporalRelation& r) {
    if (!closed_under_all_permutations(r)) return {std::nullopt};
    std::vector<std::string> names = default_var_names(r.arity);
    std::set<std::vector<int>> partitions;  // signature: first index with equal rank
    for (const WeakOrder& w : r.orbits) {
        std::vector<int> sig(static_cast<std::size_t>(r.arity));
        for (int i = 0; i < r.arity; ++i) {
            sig[static_cast<std::size_t>(i)] = i;
            for (int j = 0; j < i; ++j)
                if (w.rank(j) == w.rank(i)) {
                    sig[static_cast<std::size_t>(i)] = sig[static_cast<std::size_t>(j)];
                    break;
                }
        }
        partitions.insert(std::move(sig));
    }
    if (partitions.empty()) {
        // empty relation: x != x
        return {Formula::atom(names[0], Cmp::Neq, names[0])};
    }
    std::vector<FormulaPtr> disjuncts;
    for (const std::vector<int>& sig : partitions) {
        std::vector<FormulaPtr> atoms;
        for (int i = 0; i < r.arity; ++i)
            for (int j = i + 1; j < r.arity; ++j)
                atoms.push_back(Formula::atom(
                    names[static_cast<std::size_t>(i)],
                    sig[static_cast<std::size_t>(i)] == sig[static_cast<std::size_t>(j)] ? Cmp::Eq
                                                                                         : Cmp::Neq,
                    names[static_cast<std::size_t>(j)]));
        if (atoms.empty()) atoms.push_back(Formula::atom(names[0], Cmp::Leq, names[0]));
        disjuncts.push_back(Formula::conj(std::move(atoms)));
    }
    return {Formula::disj(std::move(disjuncts))};
}

// ── Guarded Ord-Horn ────────────────────────────────────────────────────────
//
// GOH grammar over a fixed variable set:
//   basic:  x = y | x <= y | (x1 != y1 | ... | xp != yp)
//         | (x1 != x2 | ... | x1 != xq) | (x1 < y1) | (y1 != y2 | ... )
//   conj:   psi1 & psi2
//   guard:  (x1 <= y1) & ... & (xm <= ym) & (x1 != y1 | ... | xm != ym | psi)

struct GohFormula {
    enum class Kind { Eq, Leq, DiseqClause, GuardedLess, Conj, Guard };
    Kind kind = Kind::Conj;
    int a = -1, b = -1;                     // Eq/Leq operands; GuardedLess pivots a < b
    std::vector<std::pair<int, int>> pairs;  // DiseqClause (unordered) / Guard (ordered <=)
    std::vector<int> qa, qb;                 // GuardedLess disequality sides
    std::vector<GohFormula> kids;            // Conj parts; Guard inner formula = kids[0]

    bool eval(const WeakOrder& w) const {
        switch (kind) {
            case Kind::Eq: return w.rank(a) == w.rank(b);
            case Kind::Leq: return w.rank(a) <= w.rank(b);
            case Kind::DiseqClause:
                for (auto [i, j] : pairs)
                    if (w.rank(i) != w.rank(j)) return true;
                return false;
            case Kind::GuardedLess: {
                for (int v : qa)
                    if (w.rank(a) != w.rank(v)) return true;
                if (w.rank(a) < w.rank(b)) return true;
                for (int v : qb)
                    if (w.rank(b) != w.rank(v)) return true;
                return false;
            }
            case Kind::Conj:
                for (const GohFormula& k : kids)
                    if (!k.eval(w)) return false;
                return true;
            case Kind::Guard: {
                for (auto [x, y] : pairs)
                    if (!(w.rank(x) <= w.rank(y))) return false;
                for (auto [x, y] : pairs)
                    if (w.rank(x) != w.rank(y)) return true;
                return kids[0].eval(w);
            }
        }
        return false;
    }

    int clause_count() const {
        switch (kind) {
            case Kind::Conj: {
                int total = 0;
                for (const GohFormula& k : kids) total += k.clause_count();
                return total;
            }
            case Kind::Guard:
                return static_cast<int>(pairs.size()) + 1 + kids[0].clause_count();
            default:
                return 1;
        }
    }

    FormulaPtr to_formula(const std::vector<std::string>& names) const {
        auto var = [&](int i) { return names[static_cast<std::size_t>(i)]; };
        switch (kind) {
            case Kind::Eq: return Formula::atom(var(a), Cmp::Eq, var(b));
            case Kind::Leq: return Formula::atom(var(a), Cmp::Leq, var(b));
            case Kind::DiseqClause: {
                std::vector<FormulaPtr> parts;
                for (auto [i, j] : pairs) parts.push_back(Formula::atom(var(i), Cmp::Neq, var(j)));
                return Formula::disj(std::move(parts));
            }
            case Kind::GuardedLess: {
                std::vector<FormulaPtr> parts;
                for (int v : qa) parts.push_back(Formula::atom(var(a), Cmp::Neq, var(v)));
                parts.push_back(Formula::atom(var(a), Cmp::Less, var(b)));
                for (int v : qb) parts.push_back(Formula::atom(var(b), Cmp::Neq, var(v)));
                return Formula::disj(std::move(parts));
            }
            case Kind::Conj: {
                if (kids.empty())  // trivially true
                    return Formula::atom(names[0], Cmp::Leq, names[0]);
                std::vector<FormulaPtr> parts;
                for (const GohFormula& k : kids) parts.push_back(k.to_formula(names));
                return Formula::conj(std::move(parts));
            }
            case Kind::Guard: {
                std::vector<FormulaPtr> parts;
                for (auto [x, y] : pairs) parts.push_back(Formula::atom(var(x), Cmp::Leq, var(y)));
                std::vector<FormulaPtr> clause;
                for (auto [x, y] : pairs) clause.push_back(Formula::atom(var(x), Cmp::Neq, var(y)));
                clause.push_back(kids[0].to_formula(names));
                parts.push_back(Formula::disj(std::move(clause)));
                return Formula::conj(std::move(parts));
            }
        }
        return nullptr;
    }
};

// ── GOH recognition (structural, on comparison ASTs) ────────────────────────

namespace detail {

inline bool goh_rec(const FormulaPtr& f);

inline bool is_neq_atom(const FormulaPtr& f) {
    return f->kind == Formula::Kind::CmpAtom && f->cmp == Cmp::Neq;
}
inline bool is_leq_atom(const FormulaPtr& f) {
    return f->kind == Formula::Kind::CmpAtom && f->cmp == Cmp::Leq;
}

// Basic disjunction forms: pure disequality, or guarded-< with shared pivots.
inline bool goh_basic_or(const std::vector<FormulaPtr>& parts) {
    bool all_neq = true;
    int less_count = 0;
    for (const FormulaPtr& p : parts) {
        if (p->kind != Formula::Kind::CmpAtom) return false;
        if (p->cmp == Cmp::Neq) continue;
        all_neq = false;
        if (p->cmp == Cmp::Less) ++less_count;
        else return false;  // = or <= under a disjunction is not basic
    }
    if (all_neq) return !parts.empty();
    if (less_count != 1) return false;
    std::string x1, y1;
    for (const FormulaPtr& p : parts)
        if (p->cmp == Cmp::Less) {
            x1 = p->lhs;
            y1 = p->rhs;
        }
    for (const FormulaPtr& p : parts) {
        if (p->cmp != Cmp::Neq) continue;
        bool touches_x = p->lhs == x1 || p->rhs == x1;
        bool touches_y = p->lhs == y1 || p->rhs == y1;
        if (!touches_x && !touches_y) return false;
    }
    return true;
}

// Conjunction: every part GOH on its own, or a guard instance whose
// disequality clause is covered by <=-atoms among the siblings.
inline bool goh_conj(const std::vector<FormulaPtr>& parts) {
    std::set<std::pair<std::string, std::string>> leqs;
    for (const FormulaPtr& p : parts)
        if (is_leq_atom(p)) leqs.insert({p->lhs, p->rhs});

    for (const FormulaPtr& p : parts) {
        if (goh_rec(p)) continue;
        if (p->kind != Formula::Kind::Or) return false;
        // try to read p as the clause of a guard: some nonempty subset of its
        // != disjuncts is matched by sibling <= atoms, the rest is the inner
        // GOH formula
        std::vector<std::size_t> neq_idx;
        for (std::size_t i = 0; i < p->kids.size(); ++i)
            if (is_neq_atom(p->kids[i])) neq_idx.push_back(i);
        if (neq_idx.size() > 16) return false;
        bool matched = false;
        for (std::size_t mask = 1; mask < (static_cast<std::size_t>(1) << neq_idx.size()) && !matched;
             ++mask) {
            bool covered = true;
            for (std::size_t k = 0; k < neq_idx.size() && covered; ++k)
                if (mask & (static_cast<std::size_t>(1) << k)) {
                    const FormulaPtr& atom = p->kids[neq_idx[k]];
                    if (!leqs.count({atom->lhs, atom->rhs}) && !leqs.count({atom->rhs, atom->lhs}))
                        covered = false;
                }
            if (!covered) continue;
            std::vector<FormulaPtr> rest;
            std::set<std::size_t> in_guard;
            for (std::size_t k = 0; k < neq_idx.size(); ++k)
                if (mask & (static_cast<std::size_t>(1) << k)) in_guard.insert(neq_idx[k]);
            for (std::size_t i = 0; i < p->kids.size(); ++i)
                if (!in_guard.count(i)) rest.push_back(p->kids[i]);
            if (rest.empty()) matched = true;  // pure guard clause
            else matched = goh_rec(Formula::disj(std::move(rest)));
        }
        if (!matched) return false;
    }
    return true;
}

inline bool goh_rec(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::CmpAtom:
            // x = y, x <= y; a bare x < y is the degenerate guarded-< form
            return f->cmp == Cmp::Eq || f->cmp == Cmp::Leq || f->cmp == Cmp::Less ||
                   f->cmp == Cmp::Neq;  // one-literal disequality clause
        case Formula::Kind::Or:
            return goh_basic_or(f->kids);  // guard clauses need their sibling <= atoms
        case Formula::Kind::And:
            return goh_conj(f->kids);
        default:
            return false;
    }
}

}  // namespace detail

// Structural conformance of a quantifier-free comparison AST with the GOH
// grammar.
inline bool goh_recognize(const FormulaPtr& f) {
    if (detail::has_quantifier(f)) return false;
    return detail::goh_rec(f);
}

// ── Bounded GOH search ──────────────────────────────────────────────────────
//
// R is GOH-definable at guard depth <= D iff R equals its GOH hull: the
// intersection of all grammar components entailed by R, where a guard
// component's inner formula is (recursively) the hull of the orbits forced
// through the guard's all-equal case. Every conjunct of a GOH definition is
// entailed and every inner formula must contain those forced orbits, so the
// hull is the least depth-D GOH-definable relation containing R. The clause
// budget C applies to the pruned certificate; NotFoundWithinBound is not a
// proof of non-GOH-ness.

struct GohSearchResult {
    std::optional<GohFormula> certificate;
    bool hull_matches = false;   // semantic decision at depth D, ignoring C
    int clause_count = 0;        // of the pruned certificate, when found
};

namespace detail {

struct GohComponent {
    GohFormula formula;
    std::set<WeakOrder> relation;
};

class GohHull {
public:
    GohHull(int arity, SearchBounds bounds)
        : n_(arity), bounds_(bounds), all_(enumerate_weak_orders(arity)) {}

    // least GOH-definable superset of `w` at guard depth `depth`
    std::set<WeakOrder> hull(const std::set<WeakOrder>& w, int depth) {
        auto key = std::make_pair(std::vector<WeakOrder>(w.begin(), w.end()), depth);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::set<WeakOrder> acc(all_.begin(), all_.end());
        for (const GohComponent& c : components(w, depth)) {
            std::set<WeakOrder> next;
            for (const WeakOrder& o : acc)
                if (c.relation.count(o)) next.insert(o);
            acc = std::move(next);
        }
        memo_.emplace(std::move(key), acc);
        return acc;
    }

    // entailed components in canonical order (memoized; guards recurse)
    const std::vector<GohComponent>& components(const std::set<WeakOrder>& w, int depth) {
        auto key = std::make_pair(std::vector<WeakOrder>(w.begin(), w.end()), depth);
        auto found = comp_memo_.find(key);
        if (found != comp_memo_.end()) return found->second;
        std::vector<GohComponent> out;
        auto entailed = [&](const GohFormula& g) {
            for (const WeakOrder& o : w)
                if (!g.eval(o)) return false;
            return true;
        };
        auto add = [&](GohFormula g) {
            if (!entailed(g)) return;
            GohComponent c{std::move(g), {}};
            for (const WeakOrder& o : all_)
                if (c.formula.eval(o)) c.relation.insert(o);
            out.push_back(std::move(c));
        };

        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) {
                GohFormula eq;
                eq.kind = GohFormula::Kind::Eq;
                eq.a = i;
                eq.b = j;
                add(eq);
            }
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j) {
                    GohFormula leq;
                    leq.kind = GohFormula::Kind::Leq;
                    leq.a = i;
                    leq.b = j;
                    add(leq);
                }
        // pure disequality clauses over all nonempty pair subsets
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) pairs.emplace_back(i, j);
        for (std::size_t mask = 1; mask < (static_cast<std::size_t>(1) << pairs.size()); ++mask) {
            GohFormula d;
            d.kind = GohFormula::Kind::DiseqClause;
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if (mask & (static_cast<std::size_t>(1) << p)) d.pairs.push_back(pairs[p]);
            add(d);
        }
        // guarded-< basics with shared pivots
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                if (a == b) continue;
                std::vector<int> others_a, others_b;
                for (int v = 0; v < n_; ++v) {
                    if (v != a) others_a.push_back(v);
                    if (v != b) others_b.push_back(v);
                }
                const std::size_t na = others_a.size(), nb = others_b.size();
                for (std::size_t ma = 0; ma < (static_cast<std::size_t>(1) << na); ++ma)
                    for (std::size_t mb = 0; mb < (static_cast<std::size_t>(1) << nb); ++mb) {
                        GohFormula g;
                        g.kind = GohFormula::Kind::GuardedLess;
                        g.a = a;
                        g.b = b;
                        for (std::size_t k = 0; k < na; ++k)
                            if (ma & (static_cast<std::size_t>(1) << k)) g.qa.push_back(others_a[k]);
                        for (std::size_t k = 0; k < nb; ++k)
                            if (mb & (static_cast<std::size_t>(1) << k)) g.qb.push_back(others_b[k]);
                        add(g);
                    }
            }
        // guard components: nonempty sets of entailed <= pairs
        if (depth > 0) {
            std::vector<std::pair<int, int>> leq_pairs;
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    if (i == j) continue;
                    bool all_le = true;
                    for (const WeakOrder& o : w)
                        if (!(o.rank(i) <= o.rank(j))) {
                            all_le = false;
                            break;
                        }
                    if (all_le) leq_pairs.emplace_back(i, j);
                }
            const int cap = std::min<int>(static_cast<int>(leq_pairs.size()), bounds_.max_clauses);
            std::vector<int> idx;
            auto rec = [&](auto&& self, int start) -> void {
                if (!idx.empty()) {
                    GohFormula g;
                    g.kind = GohFormula::Kind::Guard;
                    for (int k : idx) g.pairs.push_back(leq_pairs[static_cast<std::size_t>(k)]);
                    std::set<WeakOrder> forced;
                    for (const WeakOrder& o : w) {
                        bool all_eq = true;
                        for (auto [x, y] : g.pairs)
                            if (o.rank(x) != o.rank(y)) {
                                all_eq = false;
                                break;
                            }
                        if (all_eq) forced.insert(o);
                    }
                    std::set<WeakOrder> inner_rel = hull(forced, depth - 1);
                    GohFormula inner = certificate_for(forced, inner_rel, depth - 1);
                    g.kids.push_back(std::move(inner));
                    GohComponent c{std::move(g), {}};
                    for (const WeakOrder& o : all_)
                        if (c.formula.eval(o)) c.relation.insert(o);
                    out.push_back(std::move(c));
                }
                if (static_cast<int>(idx.size()) >= cap) return;
                for (int k = start; k < static_cast<int>(leq_pairs.size()); ++k) {
                    idx.push_back(k);
                    self(self, k + 1);
                    idx.pop_back();
                }
            };
            rec(rec, 0);
        }
        return comp_memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    // conjunction certificate defining exactly `target` (= hull of w) from
    // components entailed by w
    GohFormula certificate_for(const std::set<WeakOrder>& w, const std::set<WeakOrder>& target,
                               int depth) {
        const std::vector<GohComponent>& comps = components(w, depth);
        std::set<WeakOrder> to_exclude;
        for (const WeakOrder& o : all_)
            if (!target.count(o)) to_exclude.insert(o);
        std::vector<std::set<WeakOrder>> excludes(comps.size());
        std::vector<int> costs(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) {
            costs[i] = std::max(comps[i].formula.clause_count(), 1);
            for (const WeakOrder& o : to_exclude)
                if (!comps[i].relation.count(o)) excludes[i].insert(o);
        }
        std::vector<GohComponent> chosen = greedy_cover(comps, excludes, to_exclude, costs);
        GohFormula conj;
        conj.kind = GohFormula::Kind::Conj;
        for (GohComponent& c : chosen) conj.kids.push_back(std::move(c.formula));
        if (conj.kids.size() == 1) return conj.kids[0];
        return conj;  // empty conjunction: target is the full relation
    }

private:
    int n_;
    SearchBounds bounds_;
    std::vector<WeakOrder> all_;
    std::map<std::pair<std::vector<WeakOrder>, int>, std::set<WeakOrder>> memo_;
    std::map<std::pair<std::vector<WeakOrder>, int>, std::vector<GohComponent>> comp_memo_;
};

}  // namespace detail

inline GohSearchResult goh_search(const TemporalRelation& r, SearchBounds bounds = {}) {
    if (!ordhorn_definition(r))
        throw std::invalid_argument("GOH requires Ord-Horn input");
    detail::GohHull engine(r.arity, bounds);
    GohSearchResult result;
    std::set<WeakOrder> h = engine.hull(r.orbits, bounds.max_guard_depth);
    result.hull_matches = (h == r.orbits);
    if (!result.hull_matches) return result;
    GohFormula cert = engine.certificate_for(r.orbits, r.orbits, bounds.max_guard_depth);
    result.clause_count = cert.clause_count();
    if (result.clause_count > bounds.max_clauses) return result;  // over the clause budget
    result.certificate = std::move(cert);
    return result;
}

}  // namespace tqcsp

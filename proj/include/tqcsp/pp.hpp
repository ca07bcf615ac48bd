#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tqcsp/catalog.hpp"
#include "tqcsp/config.hpp"
#include "tqcsp/formula.hpp"
#include "tqcsp/preserve.hpp"
#include "tqcsp/relation.hpp"
#include "tqcsp/weak_order.hpp"

namespace tqcsp {

// ── pp evaluation ───────────────────────────────────────────────────────────
//
// Exact evaluation of a pp-formula over a language: iterated joins over
// shared variables, projecting out an existential variable as soon as no
// remaining atom mentions it, then restriction to the output variables.
// Comparison atoms are resolved against the built-in order relations.

namespace detail {

struct PpAtom {
    TemporalRelation relation;     // already collapsed for repeated variables
    std::vector<std::string> vars;  // distinct, first-occurrence order
};

inline TemporalRelation builtin_relation(Cmp c) {
    switch (c) {
        case Cmp::Less: return catalog::less();
        case Cmp::Leq: return catalog::leq();
        case Cmp::Eq: return catalog::eq();
        case Cmp::Neq: return catalog::neq();
    }
    throw std::logic_error("bad comparator");
}

// R applied to a possibly repeating argument list, collapsed onto the
// distinct variables: filter orbits that equate repeated coordinates, then
// restrict to the first occurrence of each variable.
inline PpAtom collapse_atom(const TemporalRelation& base, const std::vector<std::string>& args) {
    if (static_cast<int>(args.size()) != base.arity)
        throw std::invalid_argument("arity mismatch in atom over relation '" + base.name + "'");
    std::vector<std::string> distinct;
    std::vector<int> first_pos;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (std::find(distinct.begin(), distinct.end(), args[i]) == distinct.end()) {
            distinct.push_back(args[i]);
            first_pos.push_back(static_cast<int>(i));
        }
    TemporalRelation collapsed{static_cast<int>(distinct.size()), {}, ""};
    for (const WeakOrder& w : base.orbits) {
        bool ok = true;
        for (std::size_t i = 0; i < args.size() && ok; ++i)
            for (std::size_t j = i + 1; j < args.size() && ok; ++j)
                if (args[i] == args[j] && w.rank(static_cast<int>(i)) != w.rank(static_cast<int>(j)))
                    ok = false;
        if (ok) collapsed.orbits.insert(w.restrict_to(first_pos));
    }
    return PpAtom{std::move(collapsed), std::move(distinct)};
}

inline std::vector<PpAtom> pp_atoms(const FormulaPtr& f, const Language& lang,
                                    std::vector<std::string>* exist_vars = nullptr) {
    FormulaPtr cur = f;
    while (cur->kind == Formula::Kind::Exists) {
        if (exist_vars) exist_vars->push_back(cur->var);
        cur = cur->kids[0];
    }
    std::vector<FormulaPtr> atom_nodes;
    if (cur->kind == Formula::Kind::And) atom_nodes = cur->kids;
    else atom_nodes = {cur};
    std::vector<PpAtom> atoms;
    for (const FormulaPtr& a : atom_nodes) {
        if (a->kind == Formula::Kind::CmpAtom) {
            atoms.push_back(collapse_atom(builtin_relation(a->cmp), {a->lhs, a->rhs}));
        } else if (a->kind == Formula::Kind::RelAtom) {
            const TemporalRelation* r = lang.find(a->rel);
            if (!r) throw std::invalid_argument("unknown relation symbol: " + a->rel);
            atoms.push_back(collapse_atom(*r, a->args));
        } else {
            throw std::invalid_argument("pp formula must be an existential conjunction of atoms");
        }
    }
    return atoms;
}

}  // namespace detail

inline TemporalRelation pp_evaluate(const FormulaPtr& f, const Language& lang,
                                    std::span<const std::string> out_vars,
                                    int ceiling = kDefaultArityCeiling) {
    if (classify_formula(f) != FormulaClass::Pp && classify_formula(f) != FormulaClass::QuantifierFree)
        throw std::invalid_argument("pp_evaluate: not a pp formula");
    std::vector<std::string> exist;
    std::vector<detail::PpAtom> atoms = detail::pp_atoms(f, lang, &exist);
    std::set<std::string> exist_set(exist.begin(), exist.end());
    std::set<std::string> out_set(out_vars.begin(), out_vars.end());
    for (const std::string& v : free_variables(f))
        if (!out_set.count(v))
            throw std::invalid_argument("free variable '" + v + "' not in output order");

    // variable ids for the join machinery
    std::map<std::string, int> ids;
    auto id_of = [&](const std::string& v) {
        auto [it, fresh] = ids.emplace(v, static_cast<int>(ids.size()));
        (void)fresh;
        return it->second;
    };
    for (const std::string& v : out_vars) id_of(v);

    std::vector<std::string> state_vars;
    std::set<WeakOrder> state;
    for (std::size_t ai = 0; ai < atoms.size(); ++ai) {
        const detail::PpAtom& atom = atoms[ai];
        std::vector<int> atom_ids;
        for (const std::string& v : atom.vars) atom_ids.push_back(id_of(v));
        if (state_vars.empty()) {
            state_vars = atom.vars;
            state = atom.relation.orbits;
        } else {
            std::vector<int> state_ids;
            for (const std::string& v : state_vars) state_ids.push_back(id_of(v));
            std::vector<std::string> new_vars = state_vars;
            for (const std::string& v : atom.vars)
                if (std::find(new_vars.begin(), new_vars.end(), v) == new_vars.end())
                    new_vars.push_back(v);
            std::set<WeakOrder> joined;
            for (const WeakOrder& w1 : state)
                for (const WeakOrder& w2 : atom.relation.orbits)
                    for (WeakOrder& j : join_orders(w1, state_ids, w2, atom_ids))
                        joined.insert(std::move(j));
            state_vars = std::move(new_vars);
            state = std::move(joined);
        }
        if (static_cast<int>(state_vars.size()) > ceiling)
            throw std::invalid_argument("arity bound exceeded during pp evaluation");

        // early projection: drop existential variables no later atom mentions
        std::set<std::string> needed(out_vars.begin(), out_vars.end());
        for (std::size_t bi = ai + 1; bi < atoms.size(); ++bi)
            needed.insert(atoms[bi].vars.begin(), atoms[bi].vars.end());
        std::vector<int> keep;
        std::vector<std::string> kept_vars;
        for (std::size_t i = 0; i < state_vars.size(); ++i)
            if (needed.count(state_vars[i]) || !exist_set.count(state_vars[i])) {
                keep.push_back(static_cast<int>(i));
                kept_vars.push_back(state_vars[i]);
            }
        if (kept_vars.size() != state_vars.size() && !kept_vars.empty()) {
            std::set<WeakOrder> projected;
            for (const WeakOrder& w : state) projected.insert(w.restrict_to(keep));
            state = std::move(projected);
            state_vars = std::move(kept_vars);
        }
    }

    // unconstrained output variables extend freely
    for (const std::string& v : out_vars)
        if (std::find(state_vars.begin(), state_vars.end(), v) == state_vars.end()) {
            if (state_vars.empty()) {
                state_vars = {v};
                state = {WeakOrder({0})};
                continue;
            }
            std::set<WeakOrder> extended;
            for (const WeakOrder& w : state)
                for (WeakOrder& e : w.extensions()) extended.insert(std::move(e));
            state_vars.push_back(v);
            state = std::move(extended);
        }

    // restrict to the output variable order
    std::vector<int> order;
    for (const std::string& v : out_vars) {
        auto it = std::find(state_vars.begin(), state_vars.end(), v);
        order.push_back(static_cast<int>(it - state_vars.begin()));
    }
    TemporalRelation result{static_cast<int>(out_vars.size()), {}, ""};
    for (const WeakOrder& w : state) result.orbits.insert(w.restrict_to(order));
    return result;
}

inline TemporalRelation pp_evaluate(const std::string& text, const Language& lang,
                                    std::vector<std::string> out_vars,
                                    int ceiling = kDefaultArityCeiling) {
    return pp_evaluate(parse_formula(text), lang, std::span<const std::string>(out_vars), ceiling);
}

// ── pp-definability search ──────────────────────────────────────────────────
//
// Exhaustive over atom multisets up to variable renaming: free variables are
// fixed by the target, existential variables are introduced in index order.
// NotFoundWithinBound is therefore a proof of absence within the bounds. The
// lexicographically least certificate is returned regardless of schedule.

inline std::vector<std::string> default_var_names(int n, const std::string& prefix = "x") {
    static const char* kShort[] = {"x", "y", "z", "w"};
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        if (prefix == "x" && n <= 4) out.push_back(kShort[i]);
        else out.push_back(prefix + std::to_string(i + 1));
    }
    return out;
}

struct PpSearchResult {
    std::optional<FormulaPtr> certificate;  // nullopt: not found within bounds
    std::uint64_t candidates_checked = 0;
    bool exhausted = true;  // false when a candidate budget cut the sweep short
    SearchBounds bounds;
};

namespace detail {

struct AtomCode {
    int rel;
    std::vector<int> args;
    auto operator<=>(const AtomCode&) const = default;
};

inline FormulaPtr build_pp_candidate(const std::vector<AtomCode>& atoms, const Language& lang,
                                     const std::vector<std::string>& names, int num_free) {
    std::vector<FormulaPtr> conj;
    int max_var = num_free - 1;
    for (const AtomCode& a : atoms) {
        std::vector<std::string> args;
        for (int v : a.args) {
            args.push_back(names[static_cast<std::size_t>(v)]);
            max_var = std::max(max_var, v);
        }
        conj.push_back(Formula::rel_atom(lang.relations[static_cast<std::size_t>(a.rel)].name,
                                         std::move(args)));
    }
    FormulaPtr f = Formula::conj(std::move(conj));
    for (int v = max_var; v >= num_free; --v)
        f = Formula::quant(Formula::Kind::Exists, names[static_cast<std::size_t>(v)], std::move(f));
    return f;
}

// Existential variables must appear for the first time in index order; this
// prunes pure renamings without losing any candidate.
inline bool existential_discipline_ok(const std::vector<AtomCode>& atoms, int num_free) {
    int next_expected = num_free;
    for (const AtomCode& a : atoms)
        for (int v : a.args)
            if (v >= num_free) {
                if (v > next_expected) return false;
                if (v == next_expected) ++next_expected;
            }
    return true;
}

}  // namespace detail

// max_candidates = 0 runs the full bounded space (absence is then a proof
// within the bounds); a positive budget cuts the sweep short and clears
// `exhausted`.
inline PpSearchResult pp_search(const TemporalRelation& target, const Language& lang,
                                SearchBounds bounds = {}, int parallelism = 1,
                                std::uint64_t max_candidates = 0) {
    const int n = target.arity;
    const int total_vars = n + bounds.max_existentials;
    std::vector<std::string> names = default_var_names(n);
    for (int e = 1; e <= bounds.max_existentials; ++e) names.push_back("u" + std::to_string(e));

    // all atom codes, lexicographically ordered
    std::vector<detail::AtomCode> all_atoms;
    for (int ri = 0; ri < static_cast<int>(lang.relations.size()); ++ri) {
        const TemporalRelation& r = lang.relations[static_cast<std::size_t>(ri)];
        std::vector<int> args(static_cast<std::size_t>(r.arity), 0);
        while (true) {
            all_atoms.push_back({ri, args});
            int i = r.arity - 1;
            while (i >= 0 && args[static_cast<std::size_t>(i)] == total_vars - 1) {
                args[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++args[static_cast<std::size_t>(i)];
        }
    }

    PpSearchResult result;
    result.bounds = bounds;

    std::vector<std::vector<detail::AtomCode>> batch;
    const std::size_t kBatch = 2048;
    auto evaluate_batch = [&]() -> std::optional<FormulaPtr> {
        auto eval_one = [&](const std::vector<detail::AtomCode>& cand) -> std::optional<FormulaPtr> {
            FormulaPtr f = detail::build_pp_candidate(cand, lang, names, n);
            TemporalRelation r = pp_evaluate(f, lang, std::span<const std::string>(names.data(),
                                                                                   static_cast<std::size_t>(n)));
            if (r.orbits == target.orbits) return f;
            return std::nullopt;
        };
        if (parallelism <= 1 || batch.size() < 64) {
            for (const auto& cand : batch) {
                ++result.candidates_checked;
                if (auto f = eval_one(cand)) return f;
            }
            return std::nullopt;
        }
        std::vector<std::future<std::optional<FormulaPtr>>> futs;
        std::size_t chunk = (batch.size() + static_cast<std::size_t>(parallelism) - 1) /
                            static_cast<std::size_t>(parallelism);
        for (std::size_t start = 0; start < batch.size(); start += chunk) {
            std::size_t end = std::min(batch.size(), start + chunk);
            futs.push_back(std::async(std::launch::async, [&, start, end] {
                for (std::size_t i = start; i < end; ++i)
                    if (auto f = eval_one(batch[i])) return std::optional<FormulaPtr>(f);
                return std::optional<FormulaPtr>();
            }));
        }
        // earliest chunk wins: deterministic regardless of worker schedule
        std::optional<FormulaPtr> found;
        for (auto& fu : futs) {
            auto r = fu.get();
            if (r && !found) found = r;
        }
        result.candidates_checked += batch.size();
        return found;
    };

    // candidates ordered by atom count, then lexicographically
    for (int count = 1; count <= bounds.max_atoms; ++count) {
        std::vector<int> pick(static_cast<std::size_t>(count), 0);
        bool done = false;
        while (!done) {
            std::vector<detail::AtomCode> cand;
            for (int i = 0; i < count; ++i)
                cand.push_back(all_atoms[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]);
            if (detail::existential_discipline_ok(cand, n)) {
                batch.push_back(std::move(cand));
                if (batch.size() >= kBatch) {
                    if (auto f = evaluate_batch()) {
                        result.certificate = f;
                        return result;
                    }
                    batch.clear();
                    if (max_candidates && result.candidates_checked >= max_candidates) {
                        result.exhausted = false;
                        return result;
                    }
                }
            }
            // next non-decreasing index vector
            int i = count - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] ==
                                 static_cast<int>(all_atoms.size()) - 1)
                --i;
            if (i < 0) {
                done = true;
            } else {
                int v = pick[static_cast<std::size_t>(i)] + 1;
                for (int k = i; k < count; ++k) pick[static_cast<std::size_t>(k)] = v;
            }
        }
        if (auto f = evaluate_batch()) {
            result.certificate = f;
            return result;
        }
        batch.clear();
    }
    return result;
}

// ── Dual closure ────────────────────────────────────────────────────────────

enum class DualStatus {
    SelfInLanguage,          // the dual's orbit set is already a member
    PpDefined,               // a pp certificate for the dual was found
    RefutedByPolymorphism,   // a catalog op preserves the language but not the
                             // dual: definitively not pp-definable
    Unverified,              // neither found nor refuted within bounds/budget
};

struct DualClosureEntry {
    std::string relation;
    DualStatus status;
    std::optional<FormulaPtr> certificate;
    std::string refuting_op;
};

struct DualClosureReport {
    std::vector<DualClosureEntry> entries;
    bool closed = true;  // false: some dual refuted or unverified
};

// For each relation: fast path (the dual's orbit set is already a language
// member), then a polymorphism refutation scan (an op preserving the language
// but violating the dual proves non-definability outright), then a
// budget-capped pp-definability search for the dual.
inline DualClosureReport dual_closure_report(const Language& lang, SearchBounds bounds = {},
                                             int parallelism = 1,
                                             std::uint64_t search_budget = 500000) {
    DualClosureReport report;
    std::map<std::string, OpRef> registry = op_registry();
    std::vector<std::string> preserving;
    for (const auto& [name, op] : registry)
        if (!preserves_language(op, lang)) preserving.push_back(name);
    for (const TemporalRelation& r : lang.relations) {
        TemporalRelation d = dual_relation(r);
        bool listed = false;
        for (const TemporalRelation& other : lang.relations)
            if (other.same_orbits(d)) {
                listed = true;
                break;
            }
        if (listed) {
            report.entries.push_back({r.name, DualStatus::SelfInLanguage, std::nullopt, ""});
            continue;
        }
        std::string refuter;
        for (const std::string& name : preserving)
            if (preserves_relation(registry.at(name), d)) {
                refuter = name;
                break;
            }
        if (!refuter.empty()) {
            report.entries.push_back({r.name, DualStatus::RefutedByPolymorphism, std::nullopt, refuter});
            report.closed = false;
            continue;
        }
        PpSearchResult found = pp_search(d, lang, bounds, parallelism, search_budget);
        if (found.certificate) {
            report.entries.push_back({r.name, DualStatus::PpDefined, found.certificate, ""});
        } else {
            report.entries.push_back({r.name, DualStatus::Unverified, std::nullopt, ""});
            report.closed = false;
        }
    }
    return report;
}

}  // namespace tqcsp

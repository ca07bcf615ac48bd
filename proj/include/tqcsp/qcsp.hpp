#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tqcsp/formula.hpp"
#include "tqcsp/pp.hpp"
#include "tqcsp/relation.hpp"
#include "tqcsp/weak_order.hpp"

namespace tqcsp {

// ── QCSP instances ──────────────────────────────────────────────────────────
//
// A quantifier prefix over a conjunction of relation atoms. Truth of the
// matrix depends only on the weak order of the assigned variables, so
// quantification over Q reduces to the 2m+1 extensions of the current weak
// order: depth-first over extension slots, exists stopping at the first true
// child, forall at the first false child, children explored in canonical
// extension order.

enum class Quantifier { Exists, Forall };

struct QcspInstance {
    std::vector<std::pair<Quantifier, std::string>> prefix;
    std::vector<FormulaPtr> atoms;  // RelAtom or CmpAtom nodes

    static QcspInstance parse(const std::string& text) {
        FormulaPtr f = parse_formula(text);
        QcspInstance inst;
        FormulaPtr cur = f;
        while (cur->kind == Formula::Kind::Exists || cur->kind == Formula::Kind::Forall) {
            inst.prefix.push_back({cur->kind == Formula::Kind::Exists ? Quantifier::Exists
                                                                      : Quantifier::Forall,
                                   cur->var});
            cur = cur->kids[0];
        }
        std::vector<FormulaPtr> parts;
        if (cur->kind == Formula::Kind::And) parts = cur->kids;
        else parts = {cur};
        for (const FormulaPtr& p : parts) {
            if (p->kind != Formula::Kind::RelAtom && p->kind != Formula::Kind::CmpAtom)
                throw std::invalid_argument("qcsp: matrix must be a conjunction of atoms");
            inst.atoms.push_back(p);
        }
        std::set<std::string> bound;
        for (const auto& [q, v] : inst.prefix) bound.insert(v);
        for (const FormulaPtr& a : inst.atoms) {
            const std::vector<std::string> vars =
                a->kind == Formula::Kind::RelAtom ? a->args : std::vector<std::string>{a->lhs, a->rhs};
            for (const std::string& v : vars)
                if (!bound.count(v))
                    throw std::invalid_argument("qcsp: unbound matrix variable '" + v + "'");
        }
        return inst;
    }
};

namespace detail {

struct QcspAtom {
    const TemporalRelation* external = nullptr;  // language relation
    TemporalRelation storage;                    // built-in comparison atoms
    std::vector<int> vars;                       // prefix positions, repetition allowed
    int last_var = 0;                            // latest prefix position mentioned

    const TemporalRelation& rel() const { return external ? *external : storage; }
};

inline std::vector<QcspAtom> resolve_atoms(const QcspInstance& inst, const Language& lang) {
    std::map<std::string, int> position;
    for (std::size_t i = 0; i < inst.prefix.size(); ++i) position[inst.prefix[i].second] = static_cast<int>(i);
    std::vector<QcspAtom> out;
    for (const FormulaPtr& a : inst.atoms) {
        QcspAtom qa;
        std::vector<std::string> names;
        if (a->kind == Formula::Kind::RelAtom) {
            const TemporalRelation* r = lang.find(a->rel);
            if (!r) throw std::invalid_argument("unknown relation symbol: " + a->rel);
            if (static_cast<int>(a->args.size()) != r->arity)
                throw std::invalid_argument("arity mismatch in atom over relation '" + a->rel + "'");
            qa.external = r;
            names = a->args;
        } else {
            qa.storage = builtin_relation(a->cmp);  // from the pp machinery
            names = {a->lhs, a->rhs};
        }
        qa.last_var = 0;
        for (const std::string& v : names) {
            qa.vars.push_back(position.at(v));
            qa.last_var = std::max(qa.last_var, qa.vars.back());
        }
        out.push_back(std::move(qa));
    }
    return out;
}

}  // namespace detail

// Memoized evaluator. State: the weak order of the assigned variables that
// are still relevant (mentioned by an atom together with a not-yet-assigned
// variable); fully assigned atoms are checked and dropped as soon as their
// last variable gets a value, which is what makes the projection sound.
class QcspEvaluator {
public:
    QcspEvaluator(const QcspInstance& inst, const Language& lang)
        : prefix_(inst.prefix), atoms_(detail::resolve_atoms(inst, lang)) {
        const int n = static_cast<int>(prefix_.size());
        atoms_closing_at_.resize(static_cast<std::size_t>(n));
        for (std::size_t ai = 0; ai < atoms_.size(); ++ai)
            atoms_closing_at_[static_cast<std::size_t>(atoms_[ai].last_var)].push_back(ai);
        // relevant after position p: variables <= p mentioned by an atom whose
        // last variable is > p
        relevant_.resize(static_cast<std::size_t>(n + 1));
        for (int p = 0; p < n; ++p) {
            std::set<int> rel;
            for (const detail::QcspAtom& a : atoms_)
                if (a.last_var > p)
                    for (int v : a.vars)
                        if (v <= p) rel.insert(v);
            relevant_[static_cast<std::size_t>(p + 1)] = {rel.begin(), rel.end()};
        }
    }

    bool evaluate() {
        if (prefix_.empty()) return check_closing(-1, WeakOrder({0}), {});  // degenerate
        return recurse(0, {}, {});
    }

    std::uint64_t memo_hits() const { return memo_hits_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    // assigned: prefix positions (sorted) whose pattern `state` tracks
    bool recurse(int pos, WeakOrder state, std::vector<int> assigned) {
        ++nodes_;
        if (pos == static_cast<int>(prefix_.size())) return true;

        auto key = std::make_pair(pos, state.ranks());
        if (pos > 0) {
            auto it = memo_.find(key);
            if (it != memo_.end()) {
                ++memo_hits_;
                return it->second;
            }
        }

        bool exists = prefix_[static_cast<std::size_t>(pos)].first == Quantifier::Exists;
        bool result = !exists;
        std::vector<WeakOrder> children =
            assigned.empty() ? std::vector<WeakOrder>{WeakOrder({0})} : state.extensions();
        for (const WeakOrder& child : children) {
            std::vector<int> child_assigned = assigned;
            child_assigned.push_back(pos);
            if (!check_closing(pos, child, child_assigned)) {
                if (!exists) {
                    result = false;
                    break;
                }
                continue;
            }
            // project to the variables still relevant for later positions
            const std::vector<int>& keep_vars = relevant_[static_cast<std::size_t>(pos + 1)];
            WeakOrder next_state = child;
            std::vector<int> next_assigned = child_assigned;
            if (keep_vars.size() < child_assigned.size()) {
                if (keep_vars.empty()) {
                    next_state = WeakOrder({0});
                    next_assigned = {};
                } else {
                    std::vector<int> keep_idx;
                    for (int v : keep_vars)
                        keep_idx.push_back(static_cast<int>(
                            std::find(child_assigned.begin(), child_assigned.end(), v) -
                            child_assigned.begin()));
                    next_state = child.restrict_to(keep_idx);
                    next_assigned = keep_vars;
                }
            }
            bool sub = next_assigned.empty() ? recurse_fresh(pos + 1)
                                             : recurse(pos + 1, next_state, next_assigned);
            if (exists && sub) {
                result = true;
                break;
            }
            if (!exists && !sub) {
                result = false;
                break;
            }
        }
        if (pos > 0) memo_[key] = result;
        return result;
    }

    bool recurse_fresh(int pos) {
        if (pos == static_cast<int>(prefix_.size())) return true;
        return recurse(pos, {}, {});
    }

    // atoms whose last variable is `pos` must hold on the child pattern
    bool check_closing(int pos, const WeakOrder& state, const std::vector<int>& assigned) {
        if (pos < 0) return atoms_.empty();
        for (std::size_t ai : atoms_closing_at_[static_cast<std::size_t>(pos)]) {
            const detail::QcspAtom& a = atoms_[ai];
            std::vector<int> idx;
            for (int v : a.vars)
                idx.push_back(static_cast<int>(std::find(assigned.begin(), assigned.end(), v) -
                                               assigned.begin()));
            if (!a.rel().contains(state.restrict_to(idx))) return false;
        }
        return true;
    }

    std::vector<std::pair<Quantifier, std::string>> prefix_;
    std::vector<detail::QcspAtom> atoms_;
    std::vector<std::vector<std::size_t>> atoms_closing_at_;
    std::vector<std::vector<int>> relevant_;
    std::map<std::pair<int, std::vector<int>>, bool> memo_;
    std::uint64_t memo_hits_ = 0;
    std::uint64_t nodes_ = 0;
};

inline bool qcsp_evaluate(const QcspInstance& inst, const Language& lang) {
    return QcspEvaluator(inst, lang).evaluate();
}

inline bool qcsp_evaluate(const std::string& text, const Language& lang) {
    return qcsp_evaluate(QcspInstance::parse(text), lang);
}

}  // namespace tqcsp

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqcsp/formula.hpp"
#include "tqcsp/weak_order.hpp"

namespace tqcsp {

// ── TemporalRelation ────────────────────────────────────────────────────────
//
// The finite representation of a first-order-definable relation over (Q,<):
// an arity plus the set of orbits (weak orders) it contains. A rational tuple
// t belongs to the relation iff canonical_order(t) is a member orbit.

struct TemporalRelation {
    int arity = 0;
    std::set<WeakOrder> orbits;
    std::string name;

    bool contains(const WeakOrder& w) const { return orbits.count(w) > 0; }
    bool same_orbits(const TemporalRelation& o) const {
        return arity == o.arity && orbits == o.orbits;
    }
};

inline TemporalRelation full_relation(int arity, int ceiling = kDefaultArityCeiling) {
    TemporalRelation r{arity, {}, ""};
    for (WeakOrder& w : enumerate_weak_orders(arity, ceiling)) r.orbits.insert(std::move(w));
    return r;
}

inline TemporalRelation complement(const TemporalRelation& r, int ceiling = kDefaultArityCeiling) {
    TemporalRelation out{r.arity, {}, ""};
    for (const WeakOrder& w : enumerate_weak_orders(r.arity, ceiling))
        if (!r.contains(w)) out.orbits.insert(w);
    return out;
}

inline TemporalRelation intersection(const TemporalRelation& a, const TemporalRelation& b) {
    if (a.arity != b.arity) throw std::invalid_argument("arity mismatch");
    TemporalRelation out{a.arity, {}, ""};
    for (const WeakOrder& w : a.orbits)
        if (b.contains(w)) out.orbits.insert(w);
    return out;
}

inline TemporalRelation union_of(const TemporalRelation& a, const TemporalRelation& b) {
    if (a.arity != b.arity) throw std::invalid_argument("arity mismatch");
    TemporalRelation out{a.arity, a.orbits, ""};
    out.orbits.insert(b.orbits.begin(), b.orbits.end());
    return out;
}

// The relation {(-t[1],...,-t[n]) : t in R}: reverse every orbit.
inline TemporalRelation dual_relation(const TemporalRelation& r) {
    TemporalRelation out{r.arity, {}, r.name.empty() ? "" : r.name + "_dual"};
    for (const WeakOrder& w : r.orbits) out.orbits.insert(w.dual());
    return out;
}

// The relation defined by a quantifier-free comparison formula over the given
// variable order (which must cover exactly the free variables).
inline TemporalRelation relation_of(const FormulaPtr& f, std::span<const std::string> vars,
                                    int ceiling = kDefaultArityCeiling) {
    if (classify_formula(f) != FormulaClass::QuantifierFree)
        throw std::invalid_argument("relation_of: formula must be quantifier-free");
    std::map<std::string, int> binding;
    for (std::size_t i = 0; i < vars.size(); ++i) binding[vars[i]] = static_cast<int>(i);
    for (const std::string& v : free_variables(f))
        if (!binding.count(v))
            throw std::invalid_argument("relation_of: free variable '" + v + "' not in variable order");
    TemporalRelation out{static_cast<int>(vars.size()), {}, ""};
    for (const WeakOrder& w : enumerate_weak_orders(out.arity, ceiling))
        if (eval_on_weak_order(f, w, binding)) out.orbits.insert(w);
    return out;
}

inline TemporalRelation relation_of(const std::string& text, std::vector<std::string> vars,
                                    int ceiling = kDefaultArityCeiling) {
    return relation_of(parse_formula(text), std::span<const std::string>(vars), ceiling);
}

// ── Language ────────────────────────────────────────────────────────────────
//
// A named, ordered list of temporal relations. Duplicate orbit sets are
// dropped on ingestion (with a warning) to keep search spaces small.

struct Language {
    std::vector<TemporalRelation> relations;
    std::vector<std::string> warnings;

    const TemporalRelation* find(const std::string& name) const {
        for (const TemporalRelation& r : relations)
            if (r.name == name) return &r;
        return nullptr;
    }

    void add(TemporalRelation r) {
        for (const TemporalRelation& have : relations) {
            if (have.name == r.name)
                throw std::invalid_argument("duplicate relation name: " + r.name);
            if (have.same_orbits(r)) {
                warnings.push_back("relation '" + r.name + "' duplicates '" + have.name +
                                   "' (same orbit set); dropped");
                return;
            }
        }
        relations.push_back(std::move(r));
    }

    Language dual() const {
        Language d;
        for (const TemporalRelation& r : relations) {
            TemporalRelation dr = dual_relation(r);
            dr.name = r.name;  // keep addressable names stable
            d.relations.push_back(std::move(dr));
        }
        return d;
    }
};

// ── Language file format (JSON) ─────────────────────────────────────────────
//
// {"relations": [{"name": "betwc", "arity": 3, "formula": "..."} |
//                {"name": ..., "arity": ..., "orbits": [[0,1,1], ...]}]}
// Orbit lists are canonicalized on load; when both a formula and orbits are
// given they must agree.

inline Language language_from_json(const nlohmann::json& j, int ceiling = kDefaultArityCeiling) {
    Language lang;
    if (!j.contains("relations") || !j.at("relations").is_array())
        throw std::invalid_argument("language file: missing \"relations\" array");
    for (const auto& rj : j.at("relations")) {
        TemporalRelation r;
        r.name = rj.at("name").get<std::string>();
        r.arity = rj.at("arity").get<int>();
        if (r.arity < 1) throw std::invalid_argument("relation '" + r.name + "': bad arity");
        if (r.arity > ceiling) throw std::invalid_argument("arity bound exceeded");
        std::optional<TemporalRelation> from_formula;
        if (rj.contains("formula")) {
            FormulaPtr f = parse_formula(rj.at("formula").get<std::string>());
            std::vector<std::string> vars = free_variables(f);
            if (static_cast<int>(vars.size()) > r.arity)
                throw std::invalid_argument("relation '" + r.name + "': formula has more free variables than arity");
            // Pad with fresh variable names when the formula mentions fewer.
            for (int i = static_cast<int>(vars.size()); i < r.arity; ++i)
                vars.push_back("_pad" + std::to_string(i));
            from_formula = relation_of(f, vars, ceiling);
            from_formula->name = r.name;
        }
        std::optional<TemporalRelation> from_orbits;
        if (rj.contains("orbits")) {
            TemporalRelation ro{r.arity, {}, r.name};
            for (const auto& oj : rj.at("orbits")) {
                std::vector<int> raw = oj.get<std::vector<int>>();
                if (static_cast<int>(raw.size()) != r.arity)
                    throw std::invalid_argument("relation '" + r.name + "': orbit arity mismatch");
                ro.orbits.insert(WeakOrder(std::move(raw)));
            }
            from_orbits = std::move(ro);
        }
        if (from_formula && from_orbits) {
            if (!from_formula->same_orbits(*from_orbits))
                throw std::invalid_argument("relation '" + r.name + "': formula and orbit list disagree");
            lang.add(std::move(*from_formula));
        } else if (from_formula) {
            lang.add(std::move(*from_formula));
        } else if (from_orbits) {
            lang.add(std::move(*from_orbits));
        } else {
            throw std::invalid_argument("relation '" + r.name + "': needs a formula or an orbit list");
        }
    }
    return lang;
}

inline nlohmann::json language_to_json(const Language& lang) {
    nlohmann::json rels = nlohmann::json::array();
    for (const TemporalRelation& r : lang.relations) {
        nlohmann::json orbits = nlohmann::json::array();
        for (const WeakOrder& w : r.orbits) orbits.push_back(w.ranks());
        rels.push_back({{"name", r.name}, {"arity", r.arity}, {"orbits", orbits}});
    }
    return {{"relations", rels}};
}

}  // namespace tqcsp

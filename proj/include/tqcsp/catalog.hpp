#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tqcsp/relation.hpp"

namespace tqcsp {
namespace catalog {

// Named gadget relations, each built from its defining quantifier-free
// formula. These are the hardness sources and test relations the classifier
// leans on; orbit counts are pinned by tests against the formula filter.

inline TemporalRelation make(const std::string& name, const std::string& formula,
                             std::vector<std::string> vars) {
    TemporalRelation r = relation_of(formula, std::move(vars));
    r.name = name;
    return r;
}

inline TemporalRelation betwc() {
    return make("betwc", "(x<y & y<z) | (x>y & y>z) | (x=y & y=z)", {"x", "y", "z"});
}
inline TemporalRelation cyclc() {
    return make("cyclc", "(x<y & y<z) | (y<z & z<x) | (z<x & x<y) | (x=y & y=z)",
                {"x", "y", "z"});
}
inline TemporalRelation eqxor() { return make("eqxor", "x=y | x=z", {"x", "y", "z"}); }

// EqOr_n: some two coordinates equal; n capped by the arity ceiling.
inline TemporalRelation eqor(int n, int ceiling = 5) {
    if (n < 3) throw std::invalid_argument("eqor: n must be at least 3");
    if (n > ceiling) throw std::invalid_argument("arity bound exceeded");
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    std::vector<FormulaPtr> parts;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            parts.push_back(Formula::atom(vars[static_cast<std::size_t>(i)], Cmp::Eq,
                                          vars[static_cast<std::size_t>(j)]));
    TemporalRelation r = relation_of(Formula::disj(std::move(parts)),
                                     std::span<const std::string>(vars));
    r.name = "eqor" + std::to_string(n);
    return r;
}

inline TemporalRelation s_rel() {
    return make("s", "(x=y & y=z) | (x!=y & x!=z & z!=y)", {"x", "y", "z"});
}
inline TemporalRelation i_rel() { return make("i", "x!=y | y=z", {"x", "y", "z"}); }

inline TemporalRelation betw() {
    return make("betw", "(x<y & y<z) | (x>y & y>z)", {"x", "y", "z"});
}
inline TemporalRelation cycl() {
    return make("cycl", "(x<y & y<z) | (y<z & z<x) | (z<x & x<y)", {"x", "y", "z"});
}
inline TemporalRelation sep() {
    return make("sep",
                "(x1<x2 & x2<y1 & y1<y2) | (x1<y2 & y2<y1 & y1<x2) |"
                "(y1<x2 & x2<x1 & x1<y2) | (y1<y2 & y2<x1 & x1<x2) |"
                "(x2<x1 & x1<y2 & y2<y1) | (x2<y1 & y1<y2 & y2<x1) |"
                "(y2<x1 & x1<x2 & x2<y1) | (y2<y1 & y1<x2 & x2<x1)",
                {"x1", "y1", "x2", "y2"});
}

inline TemporalRelation less() { return make("less", "x<y", {"x", "y"}); }
inline TemporalRelation leq() { return make("leq", "x<=y", {"x", "y"}); }
inline TemporalRelation eq() { return make("eq", "x=y", {"x", "y"}); }
inline TemporalRelation neq() { return make("neq", "x!=y", {"x", "y"}); }

// The full catalog as a language; relation lookup by lowercase name.
inline Language gadget_catalog() {
    Language lang;
    lang.add(betwc());
    lang.add(cyclc());
    lang.add(eqxor());
    lang.add(eqor(3));
    lang.add(eqor(4));
    lang.add(eqor(5));
    lang.add(s_rel());
    lang.add(i_rel());
    lang.add(betw());
    lang.add(cycl());
    lang.add(sep());
    lang.add(less());
    lang.add(leq());
    lang.add(eq());
    lang.add(neq());
    return lang;
}

}  // namespace catalog
}  // namespace tqcsp

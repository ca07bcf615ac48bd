#include <doctest.h>

#include "oracle.hpp"
#include "tqcsp/binary_ops.hpp"
#include "tqcsp/catalog.hpp"
#include "tqcsp/definability.hpp"
#include "tqcsp/preserve.hpp"

using namespace tqcsp;

namespace {

TemporalRelation reevaluate(const FormulaPtr& f, int arity) {
    return relation_of(f, default_var_names(arity));
}

}  // namespace

TEST_CASE("ordhorn_definition: I gets a single two-literal clause") {
    auto cert = ordhorn_definition(catalog::i_rel());
    REQUIRE(cert.has_value());
    REQUIRE(cert->clauses.size() == 1);
    const OHClause& c = cert->clauses[0];
    CHECK(c.diseqs == std::vector<std::pair<int, int>>{{0, 1}});
    REQUIRE(c.literal.has_value());
    CHECK(c.literal->rel == Cmp::Eq);
    // either x=z or y=z closes the clause; both define I exactly
    CHECK(reevaluate(cert->to_formula(default_var_names(3)), 3).orbits == catalog::i_rel().orbits);
}

TEST_CASE("ordhorn_definition: S and Leq are OH, BetwC is not") {
    auto s_cert = ordhorn_definition(catalog::s_rel());
    REQUIRE(s_cert.has_value());
    CHECK(reevaluate(s_cert->to_formula(default_var_names(3)), 3).orbits ==
          catalog::s_rel().orbits);

    auto leq_cert = ordhorn_definition(catalog::leq());
    REQUIRE(leq_cert.has_value());
    CHECK(reevaluate(leq_cert->to_formula(default_var_names(2)), 2).orbits ==
          catalog::leq().orbits);

    CHECK_FALSE(ordhorn_definition(catalog::betwc()).has_value());
    CHECK_FALSE(ordhorn_definition(catalog::cyclc()).has_value());
}

TEST_CASE("positive_definition: pinned examples") {
    PositiveResult eqxor = positive_definition(catalog::eqxor());
    REQUIRE(eqxor.positive());
    CHECK(reevaluate(*eqxor.certificate, 3).orbits == catalog::eqxor().orbits);

    PositiveResult leq = positive_definition(catalog::leq());
    REQUIRE(leq.positive());
    CHECK(reevaluate(*leq.certificate, 2).orbits == catalog::leq().orbits);

    PositiveResult neq = positive_definition(catalog::neq());
    CHECK_FALSE(neq.positive());
    REQUIRE(neq.violation.has_value());
    // the witness pair: an inside orbit dominated by an outside orbit
    CHECK(catalog::neq().contains(neq.violation->first));
    CHECK_FALSE(catalog::neq().contains(neq.violation->second));
    CHECK(atom_dominates(neq.violation->first, neq.violation->second));
}

TEST_CASE("equality_definition: pinned examples") {
    EqualityResult s = equality_definition(catalog::s_rel());
    REQUIRE(s.equality());
    CHECK(reevaluate(*s.certificate, 3).orbits == catalog::s_rel().orbits);

    EqualityResult eqor3 = equality_definition(catalog::eqor(3));
    REQUIRE(eqor3.equality());
    CHECK(reevaluate(*eqor3.certificate, 3).orbits == catalog::eqor(3).orbits);

    CHECK_FALSE(equality_definition(catalog::less()).equality());
}

TEST_CASE("goh_recognize: grammar membership") {
    CHECK(goh_recognize(parse_formula("x<=y")));
    CHECK(goh_recognize(parse_formula("x=y")));
    CHECK(goh_recognize(parse_formula("x<y")));  // degenerate guarded-< form
    CHECK(goh_recognize(parse_formula("x!=y | x!=z")));
    CHECK(goh_recognize(parse_formula("x!=u | x<y | y!=z")));  // shared pivots
    CHECK(goh_recognize(parse_formula("x<=y & y<=z")));
    // guard: (x<=y) & (x!=y | psi)
    CHECK(goh_recognize(parse_formula("x<=y & (x!=y | z=w)")));

    // an =-tail with disequalities over distinct pairs is not a basic shape
    CHECK_FALSE(goh_recognize(parse_formula("x!=y | y=z")));
    CHECK_FALSE(goh_recognize(parse_formula("x<y | y<z")));    // two < disjuncts
    CHECK_FALSE(goh_recognize(parse_formula("u!=v | x<y")));   // disequality off-pivot
    CHECK_FALSE(goh_recognize(parse_formula("(x!=y | z=w)"))); // clause without its guard
    CHECK_FALSE(goh_recognize(parse_formula("E x. x<=y")));
}

TEST_CASE("goh_search: basic certificates") {
    SearchBounds bounds;
    GohSearchResult leq = goh_search(catalog::leq(), bounds);
    REQUIRE(leq.certificate.has_value());
    CHECK(print_formula(leq.certificate->to_formula(default_var_names(2))) == "x<=y");

    GohSearchResult eq = goh_search(catalog::eq(), bounds);
    REQUIRE(eq.certificate.has_value());
    CHECK(print_formula(eq.certificate->to_formula(default_var_names(2))) == "x=y");

    GohSearchResult less = goh_search(catalog::less(), bounds);
    REQUIRE(less.certificate.has_value());
    CHECK(print_formula(less.certificate->to_formula(default_var_names(2))) == "x<y");
}

TEST_CASE("goh_search: I and S are not found within bounds") {
    SearchBounds bounds;
    GohSearchResult i = goh_search(catalog::i_rel(), bounds);
    CHECK_FALSE(i.certificate.has_value());
    CHECK_FALSE(i.hull_matches);

    GohSearchResult s = goh_search(catalog::s_rel(), bounds);
    CHECK_FALSE(s.certificate.has_value());
    CHECK_FALSE(s.hull_matches);

    CHECK_THROWS_WITH_AS(goh_search(catalog::betwc(), bounds), "GOH requires Ord-Horn input",
                         std::invalid_argument);
}

TEST_CASE("goh_search: guard components are found and recognized") {
    // x<=y & (x!=y | z=w): a depth-1 guard around an equality
    FormulaPtr f = parse_formula("x<=y & (x!=y | z=w)");
    std::vector<std::string> vars = {"x", "y", "z", "w"};
    TemporalRelation target = relation_of(f, vars);
    SearchBounds bounds;
    GohSearchResult res = goh_search(target, bounds);
    REQUIRE(res.certificate.has_value());
    FormulaPtr cert = res.certificate->to_formula(default_var_names(4));
    CHECK(relation_of(cert, default_var_names(4)).orbits == target.orbits);
    CHECK(goh_recognize(cert));
}

TEST_CASE("every GOH certificate re-evaluates exactly, is recognized, and is OH") {
    std::mt19937 rng(4242);
    SearchBounds bounds;
    int found = 0;
    for (int round = 0; round < 150; ++round) {
        // the OH closure of a random relation: conjunction of all entailed
        // clauses, an Ord-Horn relation by construction
        TemporalRelation seed = oracle::random_relation(rng, 3, 0.25);
        TemporalRelation r{3, {}, ""};
        auto seed_cert = ordhorn_definition(seed);
        if (seed_cert) {
            r = seed;
        } else {
            std::vector<OHClause> entailed;
            for (OHClause& c : detail::all_oh_clauses(3)) {
                bool ok = true;
                for (const WeakOrder& s : seed.orbits)
                    if (!c.satisfied(s)) {
                        ok = false;
                        break;
                    }
                if (ok) entailed.push_back(std::move(c));
            }
            for (const WeakOrder& w : enumerate_weak_orders(3)) {
                bool keep = true;
                for (const OHClause& c : entailed)
                    if (!c.satisfied(w)) {
                        keep = false;
                        break;
                    }
                if (keep) r.orbits.insert(w);
            }
        }
        if (!ordhorn_definition(r)) continue;
        GohSearchResult res = goh_search(r, bounds);
        if (!res.certificate) continue;
        ++found;
        FormulaPtr cert = res.certificate->to_formula(default_var_names(3));
        CAPTURE(print_formula(cert));
        CHECK(relation_of(cert, default_var_names(3)).orbits == r.orbits);
        CHECK(goh_recognize(cert));
        CHECK(ordhorn_definition(relation_of(cert, default_var_names(3))).has_value());
        CHECK(res.clause_count <= bounds.max_clauses);
    }
    CHECK(found > 5);  // the corpus must actually exercise the search
}

TEST_CASE("exhaustive arity-3: OH-definable iff preserved by lele and dlele") {
    BinaryComparisonOp lele = lele_op(), dlele = dlele_op();
    int oh_count = 0;
    for (const TemporalRelation& r : oracle::all_relations(3)) {
        bool oh = ordhorn_definition(r).has_value();
        bool pres = !preserves_binary(lele, r) && !preserves_binary(dlele, r);
        if (oh) ++oh_count;
        CAPTURE(r.orbits.size());
        REQUIRE(oh == pres);
    }
    CHECK(oh_count > 0);
}

#include <doctest.h>

#include "oracle.hpp"
#include "tqcsp/catalog.hpp"
#include "tqcsp/relation.hpp"

using namespace tqcsp;

TEST_CASE("set operations") {
    TemporalRelation eq = catalog::eq();
    TemporalRelation neq = catalog::neq();
    TemporalRelation leq = catalog::leq();
    TemporalRelation less = catalog::less();

    CHECK(complement(eq).orbits == neq.orbits);
    CHECK(intersection(leq, dual_relation(leq)).orbits == eq.orbits);
    CHECK(union_of(less, eq).orbits == leq.orbits);
    CHECK_THROWS_AS(intersection(eq, catalog::betwc()), std::invalid_argument);
}

TEST_CASE("duals of gadgets") {
    CHECK(dual_relation(catalog::less()).orbits == relation_of("x>y", {"x", "y"}).orbits);

    // apply dual_order orbit-by-orbit as an independent route
    TemporalRelation betwc = catalog::betwc();
    std::set<WeakOrder> reversed;
    for (const WeakOrder& w : betwc.orbits) reversed.insert(w.dual());
    CHECK(reversed == betwc.orbits);  // self-dual
    CHECK(dual_relation(betwc).same_orbits(betwc));

    TemporalRelation cyclc = catalog::cyclc();
    CHECK_FALSE(dual_relation(cyclc).same_orbits(cyclc));  // reversed cycles differ
}

TEST_CASE("gadget catalog orbit counts match their defining-formula filters") {
    CHECK(catalog::betwc().orbits.size() == 3);
    CHECK(catalog::cyclc().orbits.size() == 4);
    CHECK(catalog::s_rel().orbits.size() == 7);  // all-equal + 6 strict orders
    CHECK(catalog::i_rel().orbits.size() == 11);
    CHECK(catalog::eqxor().orbits.size() == 5);
    CHECK(catalog::eqor(3).orbits.size() == 7);
    CHECK(catalog::betw().orbits.size() == 2);
    CHECK(catalog::cycl().orbits.size() == 3);
    CHECK(catalog::sep().orbits.size() == 8);
    CHECK(catalog::less().orbits.size() == 1);
    CHECK(catalog::leq().orbits.size() == 2);

    // I is all ternary orbits except the two with rank(x)=rank(y) != rank(z)
    std::set<WeakOrder> expected;
    for (const WeakOrder& w : enumerate_weak_orders(3))
        if (!(w.rank(0) == w.rank(1) && w.rank(1) != w.rank(2))) expected.insert(w);
    CHECK(catalog::i_rel().orbits == expected);

    CHECK_THROWS_AS(catalog::eqor(6), std::invalid_argument);
}

TEST_CASE("language JSON round trip, canonicalization and deduplication") {
    nlohmann::json j = {
        {"relations",
         {{{"name", "leq"}, {"arity", 2}, {"formula", "x<=y"}},
          {{"name", "weird"}, {"arity", 2}, {"orbits", {{5, 9}}}}}}};
    Language lang = language_from_json(j);
    REQUIRE(lang.relations.size() == 2);
    CHECK(lang.find("leq") != nullptr);
    CHECK(lang.find("weird")->orbits == std::set<WeakOrder>{WeakOrder({0, 1})});  // canonicalized

    // a relation with the same orbit set as an existing one is dropped with a warning
    nlohmann::json j2 = language_to_json(lang);
    j2["relations"].push_back({{"name", "leq_again"}, {"arity", 2}, {"orbits", {{0, 0}, {0, 1}}}});
    Language again = language_from_json(j2);
    CHECK(again.relations.size() == 2);
    CHECK(again.warnings.size() == 1);
    // round trip keeps orbit sets
    CHECK(again.find("leq")->orbits == lang.find("leq")->orbits);

    nlohmann::json bad = {{"relations", {{{"name", "r"}, {"arity", 2}, {"formula", "x<y"}, {"orbits", {{0, 0}}}}}}};
    CHECK_THROWS_AS(language_from_json(bad), std::invalid_argument);

    nlohmann::json too_big = {{"relations", {{{"name", "r"}, {"arity", 9}, {"orbits", nlohmann::json::array()}}}}};
    CHECK_THROWS_WITH_AS(language_from_json(too_big), "arity bound exceeded", std::invalid_argument);
}

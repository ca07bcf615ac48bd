#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "tqcsp/weak_order.hpp"

using namespace tqcsp;

TEST_CASE("canonicalize rational tuples") {
    CHECK(WeakOrder::of_values({Rational(7, 2), Rational(7, 2), Rational(-1)}).ranks() ==
          std::vector<int>{1, 1, 0});
    CHECK(WeakOrder::of_values({Rational(0), Rational(0), Rational(0)}).ranks() ==
          std::vector<int>{0, 0, 0});
    CHECK(WeakOrder::of_values({Rational(-1), Rational(1), Rational(2), Rational(1)}).ranks() ==
          std::vector<int>{0, 1, 2, 1});
    CHECK_THROWS_AS(WeakOrder(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("rank vectors canonicalize on construction") {
    CHECK(WeakOrder({5, 9, 9}).ranks() == std::vector<int>{0, 1, 1});
    CHECK(WeakOrder({3, 0, 7}).ranks() == std::vector<int>{1, 0, 2});
}

TEST_CASE("enumeration matches the surjection oracle") {
    const std::vector<std::size_t> expected = {1, 3, 13, 75, 541, 4683};
    for (int n = 1; n <= 6; ++n) {
        auto ours = enumerate_weak_orders(n);
        auto ref = oracle::surjection_rank_vectors(n);
        REQUIRE(ours.size() == expected[static_cast<std::size_t>(n - 1)]);
        REQUIRE(ours.size() == ref.size());
        for (const WeakOrder& w : ours) CHECK(ref.count(w.ranks()) == 1);
    }
    CHECK_THROWS_AS(enumerate_weak_orders(8), std::invalid_argument);
}

TEST_CASE("dual is an involution and reverses ranks") {
    CHECK(WeakOrder({0, 1, 2}).dual().ranks() == std::vector<int>{2, 1, 0});
    CHECK(WeakOrder({0, 0, 0}).dual().ranks() == std::vector<int>{0, 0, 0});
    CHECK(WeakOrder({1, 1, 0}).dual().ranks() == std::vector<int>{0, 0, 1});
    for (int n = 1; n <= 5; ++n)
        for (const WeakOrder& w : enumerate_weak_orders(n)) CHECK(w.dual().dual() == w);
}

TEST_CASE("restriction") {
    const std::vector<int> keep01 = {0, 2};
    CHECK(WeakOrder({0, 1, 2}).restrict_to(keep01).ranks() == std::vector<int>{0, 1});
    const std::vector<int> keep2 = {0, 1};
    CHECK(WeakOrder({0, 0, 1}).restrict_to(keep2).ranks() == std::vector<int>{0, 0});
    const std::vector<int> keep3 = {1, 2};
    CHECK(WeakOrder({2, 0, 1}).restrict_to(keep3).ranks() == std::vector<int>{0, 1});
    CHECK_THROWS(WeakOrder({0, 1}).restrict_to(std::vector<int>{}));

    // every restriction of every order is a valid (surjective) weak order
    for (const WeakOrder& w : enumerate_weak_orders(4))
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const std::vector<int> keep = {i, j};
                WeakOrder r = w.restrict_to(keep);
                CHECK(r.blocks() <= 2);
                CHECK(*std::min_element(r.ranks().begin(), r.ranks().end()) == 0);
            }
}

TEST_CASE("extensions: count 2m+1 and restriction round-trip") {
    CHECK(WeakOrder({0}).extensions().size() == 3);
    CHECK(WeakOrder({0, 1}).extensions().size() == 5);
    CHECK(WeakOrder({0, 0}).extensions().size() == 3);
    for (int n = 1; n <= 4; ++n)
        for (const WeakOrder& w : enumerate_weak_orders(n)) {
            auto ext = w.extensions();
            CHECK(ext.size() == 2 * static_cast<std::size_t>(w.blocks()) + 1);
            std::set<WeakOrder> distinct(ext.begin(), ext.end());
            CHECK(distinct.size() == ext.size());
            std::vector<int> keep(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = i;
            for (const WeakOrder& e : ext) CHECK(e.restrict_to(keep) == w);
        }
}

TEST_CASE("joins: forced, contradictory and free cases") {
    const std::vector<int> xy = {0, 1};
    const std::vector<int> yz = {1, 2};
    auto forced = join_orders(WeakOrder({0, 1}), xy, WeakOrder({0, 1}), yz);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].ranks() == std::vector<int>{0, 1, 2});

    auto contradiction = join_orders(WeakOrder({0, 1}), xy, WeakOrder({1, 0}), xy);
    CHECK(contradiction.empty());

    const std::vector<int> x = {0};
    const std::vector<int> y = {1};
    CHECK(join_orders(WeakOrder({0}), x, WeakOrder({0}), y).size() == 3);
}

TEST_CASE("joins agree with the filter-everything oracle") {
    std::mt19937 rng(20240811);
    for (int round = 0; round < 200; ++round) {
        int n1 = 1 + static_cast<int>(rng() % 3);
        int n2 = 1 + static_cast<int>(rng() % 3);
        WeakOrder w1 = oracle::random_weak_order(rng, n1);
        WeakOrder w2 = oracle::random_weak_order(rng, n2);
        // variable ids with random overlap
        std::vector<int> vars1, vars2;
        for (int i = 0; i < n1; ++i) vars1.push_back(i);
        std::set<int> used2;
        for (int i = 0; i < n2; ++i) {
            int v = static_cast<int>(rng() % static_cast<unsigned>(n1 + n2));
            while (used2.count(v)) v = (v + 1) % (n1 + n2);
            used2.insert(v);
            vars2.push_back(v);
        }
        std::vector<int> union_vars;
        auto joined = join_orders(w1, vars1, w2, vars2, &union_vars);

        std::vector<int> keep1, keep2;
        for (int v : vars1)
            keep1.push_back(static_cast<int>(std::find(union_vars.begin(), union_vars.end(), v) -
                                             union_vars.begin()));
        for (int v : vars2)
            keep2.push_back(static_cast<int>(std::find(union_vars.begin(), union_vars.end(), v) -
                                             union_vars.begin()));
        std::set<WeakOrder> expected;
        for (const WeakOrder& w : enumerate_weak_orders(static_cast<int>(union_vars.size())))
            if (w.restrict_to(keep1) == w1 && w.restrict_to(keep2) == w2) expected.insert(w);
        std::set<WeakOrder> got(joined.begin(), joined.end());
        REQUIRE(got.size() == joined.size());  // no duplicates
        CHECK(got == expected);
    }
}

TEST_CASE("join is commutative up to variable naming") {
    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        WeakOrder w1 = oracle::random_weak_order(rng, 2);
        WeakOrder w2 = oracle::random_weak_order(rng, 2);
        const std::vector<int> v1 = {0, 1};
        const std::vector<int> v2 = {1, 2};
        std::vector<int> u12, u21;
        auto a = join_orders(w1, v1, w2, v2, &u12);
        auto b = join_orders(w2, v2, w1, v1, &u21);
        REQUIRE(a.size() == b.size());
        // compare as sets after aligning coordinates to u12's variable order
        std::vector<int> keep;
        for (int v : u12)
            keep.push_back(static_cast<int>(std::find(u21.begin(), u21.end(), v) - u21.begin()));
        std::set<WeakOrder> sa(a.begin(), a.end()), sb;
        for (const WeakOrder& w : b) sb.insert(w.restrict_to(keep));
        CHECK(sa == sb);
    }
}

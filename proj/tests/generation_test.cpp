#include <doctest.h>

#include "oracle.hpp"
#include "tqcsp/generation.hpp"
#include "tqcsp/sweep.hpp"

using namespace tqcsp;

TEST_CASE("classify_unary: every canonical op lands in its own class") {
    CHECK(classify_unary(ops::minus_op()).verdict == UnaryVerdict::GeneratesMinus);
    CHECK(classify_unary(ops::cyc_op()).verdict == UnaryVerdict::GeneratesCyc);
    CHECK(classify_unary(ops::peak_op()).verdict == UnaryVerdict::GeneratesPeak);
    CHECK(classify_unary(ops::ic_op()).verdict == UnaryVerdict::GeneratesIc);
    CHECK(classify_unary(ops::ci_op()).verdict == UnaryVerdict::GeneratesCi);
    CHECK(classify_unary(ops::su_op(1)).verdict == UnaryVerdict::GeneratesSu1);
    CHECK(classify_unary(ops::const_op()).verdict == UnaryVerdict::Constant);

    // su2, the three-step staircase, also generates su1
    UnaryClassification su2 = classify_unary(ops::su_op(2));
    CHECK(su2.verdict == UnaryVerdict::GeneratesSu1);

    // wave sits on both sides of its collapse: mixed {ic, ci}
    UnaryClassification wave = classify_unary(ops::wave_op());
    CHECK(wave.generates == std::set<std::string>{"ic", "ci"});
    CHECK(wave.mixed);

    // an order-preserving op: shift-like single increasing cell
    UnaryPiecewiseOp shift("shift", {},
                           {ops::open_cell(std::nullopt, std::nullopt, CellBehavior::Increasing,
                                           {-1, -1},
                                           {NumericMap::Form::Affine, Rational(1), Rational(5),
                                            Rational(0)})});
    CHECK(classify_unary(shift).verdict == UnaryVerdict::OrderPreserving);
}

TEST_CASE("classify_unary verdict is consistent with bounded generation checks") {
    // su2 generates su1: no counterexample up to arity 3
    GenerationCheck res = bounded_generation_check({ops::su_op(2)}, ops::su_op(1), 3);
    CHECK_FALSE(res.counterexample.has_value());
    CHECK(res.exhaustive);
    CHECK(res.relations_checked == 2 + 8 + 8192);
}

TEST_CASE("exhaustive generation facts at arity 3") {
    // {ic, ci} generate su1
    CHECK_FALSE(
        bounded_generation_check({ops::ic_op(), ops::ci_op()}, ops::su_op(1), 3).counterexample);
    // {su1, su2, su3} generate wave
    CHECK_FALSE(bounded_generation_check({ops::su_op(1), ops::su_op(2), ops::su_op(3)},
                                         ops::wave_op(), 3)
                    .counterexample);
    // wave generates su1 and su2
    CHECK_FALSE(bounded_generation_check({ops::wave_op()}, ops::su_op(1), 3).counterexample);
    CHECK_FALSE(bounded_generation_check({ops::wave_op()}, ops::su_op(2), 3).counterexample);
}

TEST_CASE("counterexamples re-verify: peak does not generate minus") {
    GenerationCheck res = bounded_generation_check({ops::peak_op()}, ops::minus_op(), 3);
    REQUIRE(res.counterexample.has_value());
    const TemporalRelation& r = *res.counterexample;
    // soundness: the returned relation is peak-preserved and minus-violated,
    // re-checked through the generic preservation engine
    CHECK_FALSE(preserves_unary(ops::peak_op(), r).has_value());
    CHECK(preserves_unary(ops::minus_op(), r).has_value());
}

TEST_CASE("sampled mode at arity 4 records its seed and verifies finds") {
    RunConfig config;
    config.sample_count = 300;
    config.seed = 777;
    GenerationCheck res = bounded_generation_check({ops::peak_op()}, ops::minus_op(), 4, config);
    CHECK(res.seed == 777);
    if (res.counterexample) {
        CHECK_FALSE(preserves_unary(ops::peak_op(), *res.counterexample).has_value());
        CHECK(preserves_unary(ops::minus_op(), *res.counterexample).has_value());
    }
    CHECK_THROWS_AS(bounded_generation_check({ops::peak_op()}, ops::minus_op(), 5),
                    std::invalid_argument);
}

TEST_CASE("staircase composition identity on pinned and random tuples") {
    using R = Rational;
    IdentityCheckReport pinned = su1_composition_check({
        {R(-2), R(-1), R(1, 2)},
        {R(3), R(7)},
        {R(-1), R(-1), R(-1)},
        {R(0)},
    });
    CHECK(pinned.all_passed);
    REQUIRE(pinned.entries.size() == 4);
    CHECK(pinned.entries[0].actual == std::vector<R>{R(0), R(0), R(1)});
    CHECK(pinned.entries[1].actual == std::vector<R>{R(1), R(1)});
    CHECK(pinned.entries[2].actual == std::vector<R>{R(0), R(0), R(0)});
    CHECK(pinned.entries[3].actual == std::vector<R>{R(1)});

    std::mt19937 rng(1001);
    std::vector<std::vector<R>> tuples;
    for (int i = 0; i < 100; ++i) {
        std::vector<R> t;
        int len = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < len; ++k)
            t.push_back(R(static_cast<int>(rng() % 19) - 9, 1 + static_cast<int>(rng() % 4)));
        tuples.push_back(std::move(t));
    }
    CHECK(su1_composition_check(tuples).all_passed);
}

TEST_CASE("arity-3 sweeps: all five law suites are violation-free") {
    for (const SweepResult& res : run_arity3_sweeps()) {
        CAPTURE(res.name);
        CHECK(res.checked == 8192);
        CHECK(res.violations == 0);
    }
}

#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "tqcsp/catalog.hpp"
#include "tqcsp/classify.hpp"

using namespace tqcsp;

namespace {

Language single(const TemporalRelation& r) {
    Language lang;
    lang.add(r);
    return lang;
}

bool trail_has(const ClassificationResult& res, const std::string& anchor) {
    for (const TrailStep& s : res.trail)
        if (s.anchor == anchor) return true;
    return false;
}

}  // namespace

TEST_CASE("classifier end-to-end: the seven pinned languages") {
    ClassificationResult leq = classify(single(catalog::leq()));
    CHECK(leq.label == ComplexityLabel::P);
    CHECK(leq.goh_certificates.at("leq") == "x<=y");
    CHECK_FALSE(leq.dual_closure_unverified);

    ClassificationResult i = classify(single(catalog::i_rel()));
    CHECK(i.label == ComplexityLabel::CoNpHard);
    CHECK(i.goh_bound_conditional);
    CHECK(trail_has(i, anchors::kGohDichotomy));

    ClassificationResult s = classify(single(catalog::s_rel()));
    CHECK(s.label == ComplexityLabel::CoNpHard);
    CHECK(s.goh_bound_conditional);
    CHECK(trail_has(s, anchors::kGohDichotomy));

    ClassificationResult betwc = classify(single(catalog::betwc()));
    CHECK(betwc.label == ComplexityLabel::CoNpHard);
    CHECK_FALSE(betwc.goh_bound_conditional);
    CHECK(trail_has(betwc, anchors::kBetwcHardness));

    ClassificationResult cyclc = classify(single(catalog::cyclc()));
    CHECK(cyclc.label == ComplexityLabel::CoNpHard);
    CHECK(trail_has(cyclc, anchors::kCyclcHardness));

    ClassificationResult eqxor = classify(single(catalog::eqxor()));
    CHECK(eqxor.label == ComplexityLabel::NpHard);
    CHECK(trail_has(eqxor, anchors::kStaircasePositiveFrontier));

    ClassificationResult eqor3 = classify(single(catalog::eqor(3)));
    CHECK(eqor3.label == ComplexityLabel::NpHard);
    CHECK(trail_has(eqor3, anchors::kStaircasePositiveFrontier));
}

TEST_CASE("explain renders certificates and flags verbatim") {
    std::string leq_report = explain(classify(single(catalog::leq())));
    CHECK(leq_report.find("GOH certificate: x<=y") != std::string::npos);
    CHECK(leq_report.find("label: P") != std::string::npos);

    std::string betwc_report = explain(classify(single(catalog::betwc())));
    CHECK(betwc_report.find("betwc-hardness") != std::string::npos);

    // non-dually-closed input: flagged, not refused
    Language asym = single(catalog::make("half", "x>=y | x>=z", {"x", "y", "z"}));
    ClassificationResult res = classify(asym);
    CHECK(res.dual_closure_unverified);
    CHECK(explain(res).find("dual closure unverified") != std::string::npos);
}

TEST_CASE("more catalog languages classify consistently") {
    // {<} is Ord-Horn (clause x<y) and guarded: P
    ClassificationResult less = classify(single(catalog::less()));
    CHECK(less.label == ComplexityLabel::P);
    CHECK(less.goh_certificates.at("less") == "x<y");

    // {=} and {!=} are equality languages with guarded definitions
    CHECK(classify(single(catalog::eq())).label == ComplexityLabel::P);
    CHECK(classify(single(catalog::neq())).label == ComplexityLabel::P);

    // Betw is not constant-preserved: imported hardness branch
    ClassificationResult betw = classify(single(catalog::betw()));
    CHECK(betw.label == ComplexityLabel::NpHard);
    CHECK(trail_has(betw, anchors::kCspHardnessImport));

    // a mixed language: BetwC together with the strict order
    Language mixed;
    mixed.add(catalog::betwc());
    mixed.add(catalog::less());
    ClassificationResult res = classify(mixed);
    CHECK(res.label == ComplexityLabel::NpHard);  // less is not constant-preserved
}

TEST_CASE("classification is label-stable under relation reordering and duality") {
    std::mt19937 rng(20240420);
    int done = 0;
    for (int round = 0; round < 200; ++round) {
        TemporalRelation r = oracle::random_relation(rng, 3);
        if (r.orbits.empty()) continue;
        r.name = "r";
        TemporalRelation d = dual_relation(r);
        d.name = "d";
        if (d.same_orbits(r)) d.orbits.swap(r.orbits);  // keep two entries anyway

        Language ab, ba;
        ab.add(r);
        ab.add(d);
        ba.add(d);
        ba.add(r);
        if (ab.relations.size() != ba.relations.size()) continue;  // dedup collapsed one side
        ClassificationResult res_ab = classify(ab);
        ClassificationResult res_ba = classify(ba);
        CAPTURE(round);
        REQUIRE(res_ab.label == res_ba.label);
        CHECK(res_ab.dual_closure_unverified == res_ba.dual_closure_unverified);
        CHECK(res_ab.goh_bound_conditional == res_ba.goh_bound_conditional);
        // a language containing both R and its dual is closed by construction
        CHECK_FALSE(res_ab.dual_closure_unverified);
        ++done;
    }
    CHECK(done > 150);
}

TEST_CASE("preservation facts in the trail re-verify") {
    for (const TemporalRelation& r : {catalog::betwc(), catalog::cyclc(), catalog::s_rel()}) {
        ClassificationResult res = classify(single(r));
        for (const TrailStep& s : res.trail) {
            if (s.check != "unary catalog") continue;
            // parse "su1=y ic=n ..." and re-run each check
            std::map<std::string, bool> facts;
            std::string text = s.outcome;
            for (const std::string& key :
                 {"su1", "ic", "ci", "peak", "minus", "cyc", "all-permutations"}) {
                auto at = text.find(key + "=");
                REQUIRE(at != std::string::npos);
                facts[key] = text[at + key.size() + 1] == 'y';
            }
            Language lang = single(r);
            for (const auto& [op, expected] : facts) {
                if (op == "all-permutations") {
                    CHECK(closed_under_all_permutations(r) == expected);
                } else {
                    CHECK(!preserves_language(op_by_name(op), lang) == expected);
                }
            }
        }
    }
}

TEST_CASE("json report shape") {
    nlohmann::json j = classification_to_json(classify(single(catalog::eqxor())));
    CHECK(j.at("label") == "NP-hard");
    CHECK(j.at("trail").is_array());
    CHECK(j.at("bounds").at("E").is_number_integer());
    CHECK(classification_exit_code(ComplexityLabel::NpHard) == 10);
    CHECK(classification_exit_code(ComplexityLabel::P) == 0);
    CHECK(classification_exit_code(ComplexityLabel::CoNpHard) == 11);
    CHECK(classification_exit_code(ComplexityLabel::Inconclusive) == 20);
}

TEST_CASE("text and json modes carry the same label and trail") {
    for (const TemporalRelation& r : {catalog::leq(), catalog::betwc(), catalog::eqxor()}) {
        ClassificationResult res = classify(single(r));
        std::string text = explain(res);
        nlohmann::json j = classification_to_json(res);
        CHECK(text.find(std::string("label: ") + j.at("label").get<std::string>()) !=
              std::string::npos);
        for (const auto& s : j.at("trail"))
            CHECK(text.find("[" + s.at("anchor").get<std::string>() + "]") != std::string::npos);
    }
}

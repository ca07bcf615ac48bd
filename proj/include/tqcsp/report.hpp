#pragma once

#include <string>

#include <json.hpp>

#include "tqcsp/classify.hpp"
#include "tqcsp/generation.hpp"
#include "tqcsp/pp.hpp"
#include "tqcsp/qcsp.hpp"
#include "tqcsp/sweep.hpp"

namespace tqcsp {
namespace report {

// JSON builders for every CLI output; the shipped schema files in schemas/
// describe exactly these shapes.

inline nlohmann::json poly_check(const std::string& op,
                                 const std::optional<LanguageViolation>& violation) {
    nlohmann::json j{{"op", op}, {"result", violation ? "violated" : "preserved"}};
    if (violation) {
        j["relation"] = violation->relation;
        j["witness"] = violation->detail;
    }
    return j;
}

inline nlohmann::json pp_eval(const TemporalRelation& r) {
    nlohmann::json orbits = nlohmann::json::array();
    for (const WeakOrder& w : r.orbits) orbits.push_back(w.ranks());
    return {{"arity", r.arity}, {"orbit_count", r.orbits.size()}, {"orbits", orbits}};
}

inline nlohmann::json pp_search_report(const PpSearchResult& res) {
    nlohmann::json j{{"found", res.certificate.has_value()},
                     {"candidates_checked", res.candidates_checked},
                     {"exhausted", res.exhausted},
                     {"bounds",
                      {{"E", res.bounds.max_existentials}, {"A", res.bounds.max_atoms}}}};
    if (res.certificate) j["formula"] = print_formula(*res.certificate);
    return j;
}

inline nlohmann::json qcsp_eval(bool value) { return {{"value", value}}; }

inline nlohmann::json define_report(const std::string& kind, const std::string& relation,
                                    const std::optional<std::string>& certificate,
                                    const std::string& note = "",
                                    const SearchBounds& bounds = {}) {
    nlohmann::json j{{"kind", kind}, {"relation", relation}, {"definable", certificate.has_value()}};
    if (certificate) j["certificate"] = *certificate;
    if (!note.empty()) j["note"] = note;
    j["bounds"] = {{"D", bounds.max_guard_depth}, {"C", bounds.max_clauses}};
    return j;
}

inline nlohmann::json unary_classify(const std::string& name, const UnaryClassification& c) {
    nlohmann::json gens = nlohmann::json::array();
    for (const std::string& g : c.generates) gens.push_back(g);
    nlohmann::json evidence = nlohmann::json::array();
    for (const std::string& e : c.evidence) evidence.push_back(e);
    return {{"name", name},
            {"verdict", unary_verdict_str(c.verdict)},
            {"generates", gens},
            {"mixed", c.mixed},
            {"evidence", evidence}};
}

inline nlohmann::json generate_check(const std::vector<std::string>& from, const std::string& to,
                                     const GenerationCheck& res) {
    nlohmann::json j{{"from", from},
                     {"to", to},
                     {"arity", res.arity_bound},
                     {"exhaustive", res.exhaustive},
                     {"relations_checked", res.relations_checked}};
    if (!res.exhaustive) j["seed"] = res.seed;
    if (res.counterexample) {
        nlohmann::json orbits = nlohmann::json::array();
        for (const WeakOrder& w : res.counterexample->orbits) orbits.push_back(w.ranks());
        j["counterexample"] = {{"arity", res.counterexample->arity}, {"orbits", orbits}};
    }
    return j;
}

inline nlohmann::json catalog_report(const Language& lang) {
    nlohmann::json rels = nlohmann::json::array();
    for (const TemporalRelation& r : lang.relations)
        rels.push_back({{"name", r.name}, {"arity", r.arity}, {"orbit_count", r.orbits.size()}});
    return {{"relations", rels}};
}

inline nlohmann::json sweep_report(const std::vector<SweepResult>& results) {
    bool all_passed = true;
    nlohmann::json suites = nlohmann::json::array();
    for (const SweepResult& s : results) {
        suites.push_back({{"name", s.name}, {"checked", s.checked}, {"violations", s.violations}});
        if (s.violations) all_passed = false;
    }
    return {{"suites", suites}, {"all_passed", all_passed}};
}

}  // namespace report
}  // namespace tqcsp

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqcsp/catalog.hpp"
#include "tqcsp/config.hpp"
#include "tqcsp/definability.hpp"
#include "tqcsp/generation.hpp"
#include "tqcsp/pp.hpp"
#include "tqcsp/preserve.hpp"

namespace tqcsp {

// ── Complexity classification of dually-closed temporal languages ───────────
//
// Decision tree, every step decidable:
//   1. dual-closure check (failures flag the result, they never abort)
//   2. preserved by lele and dlele, or by pp and dpp: the language is
//      Ord-Horn; GOH certificates for every relation give P, a missing one
//      gives coNP-hard, conditional on the GOH search bounds
//   3. some relation lacks the all-equal orbit: NP-hard (imported CSP branch)
//   4. constant-preserved remainder: the unary catalog decides
//      (a) su1 or both of ic/ci: positive frontier, NP-hard either way here
//      (b) equality language: OH route, else bounded witness searches
//      (c) peak: NP-hard via equality witnesses
//      (d) reversal only: BetwC is pp-definable, coNP-hard
//      (e) rotation only: CyclC is pp-definable, coNP-hard
//      (f) both: S is pp-definable, coNP-hard
//      (g) none: BetwC is pp-definable, coNP-hard
//
// All pp-definability conclusions are reached via polymorphism
// contrapositives; pp_search only decorates results with explicit witnesses
// and drives branch 4b.

enum class ComplexityLabel { P, NpHard, CoNpHard, Inconclusive };

inline const char* label_str(ComplexityLabel l) {
    switch (l) {
        case ComplexityLabel::P: return "P";
        case ComplexityLabel::NpHard: return "NP-hard";
        case ComplexityLabel::CoNpHard: return "coNP-hard";
        case ComplexityLabel::Inconclusive: return "inconclusive";
    }
    return "?";
}

// Stable rule identifiers for machine-checkable trails.
namespace anchors {
inline constexpr const char* kDualClosure = "dual-closure";
inline constexpr const char* kOhCharacterization = "oh-characterization";
inline constexpr const char* kPpClauseForm = "pp-clause-form";
inline constexpr const char* kGohDichotomy = "goh-dichotomy";
inline constexpr const char* kCspHardnessImport = "csp-hardness-import";
inline constexpr const char* kStaircasePositiveFrontier = "staircase-positive-frontier";
inline constexpr const char* kEqualityLanguage = "equality-language";
inline constexpr const char* kEqualityWitnesses = "equality-hardness-witnesses";
inline constexpr const char* kPeakEqualityWitnesses = "peak-equality-witnesses";
inline constexpr const char* kBetwcHardness = "betwc-hardness";
inline constexpr const char* kCyclcHardness = "cyclc-hardness";
inline constexpr const char* kSeparationHardness = "separation-hardness";
inline constexpr const char* kBetwcConstantHardness = "betwc-constant-hardness";
inline constexpr const char* kUnaryCatalogProbe = "unary-catalog-probe";
}  // namespace anchors

struct TrailStep {
    std::string check;
    std::string outcome;
    std::string anchor;
};

struct ClassificationResult {
    ComplexityLabel label = ComplexityLabel::Inconclusive;
    std::vector<TrailStep> trail;
    bool dual_closure_unverified = false;
    bool goh_bound_conditional = false;
    std::map<std::string, std::string> goh_certificates;  // relation -> formula text
    std::string hardness_basis;
    SearchBounds bounds;
};

namespace detail {

// Branch 4b runs its witness searches at reduced bounds: full default bounds
// make absence proofs for the arity-5 witnesses take hours, and the trail
// records the bounds actually used.
inline SearchBounds witness_bounds(const SearchBounds& b) {
    SearchBounds w = b;
    w.max_existentials = std::min(w.max_existentials, 1);
    w.max_atoms = std::min(w.max_atoms, 2);
    return w;
}

}  // namespace detail

inline ClassificationResult classify(const Language& lang, const RunConfig& config = {}) {
    ClassificationResult res;
    res.bounds = config.bounds;
    if (lang.relations.empty()) throw std::invalid_argument("classify: empty language");
    auto step = [&](std::string check, std::string outcome, std::string anchor) {
        res.trail.push_back({std::move(check), std::move(outcome), std::move(anchor)});
    };

    // 1. dual closure
    DualClosureReport closure = dual_closure_report(lang, config.bounds, config.parallelism);
    if (closure.closed) {
        step("dual-closure", "closed", anchors::kDualClosure);
    } else {
        res.dual_closure_unverified = true;
        std::string missing;
        for (const DualClosureEntry& e : closure.entries) {
            if (e.status == DualStatus::Unverified)
                missing += (missing.empty() ? "" : "; ") + e.relation + " unverified within bounds";
            else if (e.status == DualStatus::RefutedByPolymorphism)
                missing += (missing.empty() ? "" : "; ") + e.relation + " refuted by " + e.refuting_op;
        }
        step("dual-closure", "not closed: " + missing, anchors::kDualClosure);
    }

    auto preserved = [&](const char* op) { return !preserves_language(op_by_name(op), lang); };

    // 2. Ord-Horn route
    bool lele_route = preserved("lele") && preserved("dlele");
    bool pp_route = !lele_route && preserved("pp") && preserved("dpp");
    step("lele/dlele preserved", lele_route ? "yes" : "no", anchors::kOhCharacterization);
    if (!lele_route) step("pp/dpp preserved", pp_route ? "yes" : "no", anchors::kPpClauseForm);
    if (lele_route || pp_route) {
        bool all_goh = true;
        for (const TemporalRelation& r : lang.relations) {
            auto oh = ordhorn_definition(r);
            if (!oh)
                throw std::logic_error(
                    "internal inconsistency: relation '" + r.name +
                    "' is preserved by the Ord-Horn operations but has no clause definition");
            GohSearchResult goh = goh_search(r, config.bounds);
            if (goh.certificate) {
                std::string text = print_formula(goh.certificate->to_formula(default_var_names(r.arity)));
                res.goh_certificates[r.name] = text;
                step("goh-search " + r.name, "found: " + text, anchors::kGohDichotomy);
            } else {
                all_goh = false;
                step("goh-search " + r.name,
                     "not found within D=" + std::to_string(config.bounds.max_guard_depth) +
                         ",C=" + std::to_string(config.bounds.max_clauses),
                     anchors::kGohDichotomy);
            }
        }
        if (all_goh) {
            res.label = ComplexityLabel::P;
        } else {
            res.label = ComplexityLabel::CoNpHard;
            res.goh_bound_conditional = true;
            res.hardness_basis = "Ord-Horn language without a guarded definition within bounds";
        }
        return res;
    }

    // 3. not constant-preserved: imported CSP hardness
    for (const TemporalRelation& r : lang.relations)
        if (!preserved_by_constant(r)) {
            step("constant preserved", "no: " + r.name + " lacks the all-equal orbit",
                 anchors::kCspHardnessImport);
            res.label = ComplexityLabel::NpHard;
            res.hardness_basis = "imported: no constant polymorphism and none of the binary operations";
            return res;
        }
    step("constant preserved", "yes", anchors::kCspHardnessImport);

    // 4. unary catalog
    bool su1_p = preserved("su1");
    bool ic_p = preserved("ic");
    bool ci_p = preserved("ci");
    bool peak_p = preserved("peak");
    bool minus_p = preserved("minus");
    bool cyc_p = preserved("cyc");
    bool allperm_p = true;
    for (const TemporalRelation& r : lang.relations)
        if (!closed_under_all_permutations(r)) allperm_p = false;
    step("unary catalog",
         std::string("su1=") + (su1_p ? "y" : "n") + " ic=" + (ic_p ? "y" : "n") +
             " ci=" + (ci_p ? "y" : "n") + " peak=" + (peak_p ? "y" : "n") +
             " minus=" + (minus_p ? "y" : "n") + " cyc=" + (cyc_p ? "y" : "n") +
             " all-permutations=" + (allperm_p ? "y" : "n"),
         anchors::kUnaryCatalogProbe);

    // 4a. staircase side: positive frontier
    if (su1_p || (ic_p && ci_p)) {
        bool wave_p = preserved("wave");
        if (wave_p) {
            step("wave preserved", "yes: positive language; pp and dpp already violated",
                 anchors::kStaircasePositiveFrontier);
            res.hardness_basis = "positive language not preserved by pp or dpp";
        } else {
            step("wave preserved", "no: staircase saturation fails",
                 anchors::kStaircasePositiveFrontier);
            res.hardness_basis = "staircase-preserved language that is not positive";
        }
        res.label = ComplexityLabel::NpHard;
        return res;
    }

    // 4b. equality languages
    if (allperm_p) {
        step("equality language", "yes", anchors::kEqualityLanguage);
        bool all_oh = true;
        for (const TemporalRelation& r : lang.relations)
            if (!ordhorn_definition(r)) {
                all_oh = false;
                break;
            }
        if (all_oh) {
            bool all_goh = true;
            for (const TemporalRelation& r : lang.relations) {
                GohSearchResult goh = goh_search(r, config.bounds);
                if (goh.certificate) {
                    res.goh_certificates[r.name] =
                        print_formula(goh.certificate->to_formula(default_var_names(r.arity)));
                } else {
                    all_goh = false;
                }
            }
            step("ord-horn route", all_goh ? "all guarded" : "guarded definition missing",
                 anchors::kGohDichotomy);
            if (all_goh) {
                res.label = ComplexityLabel::P;
            } else {
                res.label = ComplexityLabel::CoNpHard;
                res.goh_bound_conditional = true;
                res.hardness_basis = "Ord-Horn equality language without a guarded definition within bounds";
            }
            return res;
        }
        // bounded witness searches
        SearchBounds wb = detail::witness_bounds(config.bounds);
        std::string bound_text = "E=" + std::to_string(wb.max_existentials) +
                                 ",A=" + std::to_string(wb.max_atoms);
        struct Witness {
            TemporalRelation target;
            ComplexityLabel label;
        };
        std::vector<Witness> witnesses;
        witnesses.push_back({catalog::eqxor(), ComplexityLabel::NpHard});
        for (int n = 3; n <= 5; ++n) witnesses.push_back({catalog::eqor(n), ComplexityLabel::NpHard});
        witnesses.push_back({catalog::i_rel(), ComplexityLabel::CoNpHard});
        witnesses.push_back({catalog::s_rel(), ComplexityLabel::CoNpHard});
        for (const Witness& w : witnesses) {
            PpSearchResult found = pp_search(w.target, lang, wb, config.parallelism);
            if (found.certificate) {
                step("witness search " + w.target.name, "found: " + print_formula(*found.certificate),
                     anchors::kEqualityWitnesses);
                res.label = w.label;
                res.hardness_basis = w.target.name + " is pp-definable: " +
                                     print_formula(*found.certificate);
                return res;
            }
        }
        step("witness search", "no witness found within " + bound_text,
             anchors::kEqualityWitnesses);
        res.label = ComplexityLabel::Inconclusive;
        res.hardness_basis = "equality language outside the guaranteed branches (bounds hit)";
        return res;
    }

    // 4c. peak without pattern closure
    if (peak_p) {
        step("peak preserved", "yes, without permutation closure", anchors::kPeakEqualityWitnesses);
        res.label = ComplexityLabel::NpHard;
        res.hardness_basis = "peak-preserved language that is not an equality language";
        // optional witness decoration
        SearchBounds wb = detail::witness_bounds(config.bounds);
        for (const TemporalRelation& target : {catalog::eqxor(), catalog::eqor(3)}) {
            PpSearchResult found = pp_search(target, lang, wb, config.parallelism);
            if (found.certificate) {
                step("witness search " + target.name, "found: " + print_formula(*found.certificate),
                     anchors::kPeakEqualityWitnesses);
                res.hardness_basis = target.name + " is pp-definable: " + print_formula(*found.certificate);
                break;
            }
        }
        return res;
    }

    // 4d-4g. reversal/rotation split
    if (minus_p && !cyc_p && !ic_p && !ci_p) {
        step("reversal only", "BetwC is pp-definable by the contrapositive", anchors::kBetwcHardness);
        res.label = ComplexityLabel::CoNpHard;
        res.hardness_basis = "betwc";
        return res;
    }
    if (cyc_p && !minus_p && !ic_p && !ci_p) {
        step("rotation only", "CyclC is pp-definable by the contrapositive", anchors::kCyclcHardness);
        res.label = ComplexityLabel::CoNpHard;
        res.hardness_basis = "cyclc";
        return res;
    }
    if (minus_p && cyc_p && !ic_p && !ci_p) {
        step("reversal and rotation", "S is pp-definable by the contrapositive",
             anchors::kSeparationHardness);
        res.label = ComplexityLabel::CoNpHard;
        res.hardness_basis = "s";
        return res;
    }
    step("catalog exhausted", "BetwC is pp-definable by the contrapositive",
         anchors::kBetwcConstantHardness);
    res.label = ComplexityLabel::CoNpHard;
    res.hardness_basis = "betwc";
    return res;
}

// ── Reporting ───────────────────────────────────────────────────────────────

inline std::string explain(const ClassificationResult& res) {
    std::string out;
    out += "label: ";
    out += label_str(res.label);
    out += "\n";
    if (res.dual_closure_unverified)
        out += "warning: dual closure unverified within bounds; the classification "
               "assumes a dually-closed language\n";
    if (res.goh_bound_conditional)
        out += "flag: goh-bound-conditional (label depends on the guarded-search bounds)\n";
    out += "bounds: E=" + std::to_string(res.bounds.max_existentials) +
           ",A=" + std::to_string(res.bounds.max_atoms) +
           ",D=" + std::to_string(res.bounds.max_guard_depth) +
           ",C=" + std::to_string(res.bounds.max_clauses) + "\n";
    out += "trail:\n";
    for (const TrailStep& s : res.trail)
        out += "  - " + s.check + ": " + s.outcome + " [" + s.anchor + "]\n";
    for (const auto& [rel, cert] : res.goh_certificates)
        out += rel + " GOH certificate: " + cert + "\n";
    if (!res.hardness_basis.empty()) out += "hardness basis: " + res.hardness_basis + "\n";
    return out;
}

inline nlohmann::json classification_to_json(const ClassificationResult& res) {
    nlohmann::json flags = nlohmann::json::array();
    if (res.dual_closure_unverified) flags.push_back("dual-closure-unverified");
    if (res.goh_bound_conditional) flags.push_back("goh-bound-conditional");
    nlohmann::json trail = nlohmann::json::array();
    for (const TrailStep& s : res.trail)
        trail.push_back({{"check", s.check}, {"outcome", s.outcome}, {"anchor", s.anchor}});
    nlohmann::json certificates = nlohmann::json::object();
    for (const auto& [rel, cert] : res.goh_certificates) certificates[rel] = cert;
    return {{"label", label_str(res.label)},
            {"flags", flags},
            {"trail", trail},
            {"certificates", certificates},
            {"hardness_basis", res.hardness_basis},
            {"bounds",
             {{"E", res.bounds.max_existentials},
              {"A", res.bounds.max_atoms},
              {"D", res.bounds.max_guard_depth},
              {"C", res.bounds.max_clauses}}}};
}

inline int classification_exit_code(ComplexityLabel label) {
    switch (label) {
        case ComplexityLabel::P: return 0;
        case ComplexityLabel::NpHard: return 10;
        case ComplexityLabel::CoNpHard: return 11;
        case ComplexityLabel::Inconclusive: return 20;
    }
    return 2;
}

}  // namespace tqcsp

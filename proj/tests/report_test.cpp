#include <doctest.h>

#include <fstream>

#include "oracle.hpp"
#include "tqcsp/catalog.hpp"
#include "tqcsp/classify.hpp"
#include "tqcsp/report.hpp"

using namespace tqcsp;
using nlohmann::json;

namespace {

json load_schema(const std::string& name) {
    std::ifstream in(std::string(TQCSP_SOURCE_DIR) + "/schemas/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

// Minimal structural validator: type, required, properties, items, enum.
bool validates(const json& value, const json& schema, std::string* why) {
    if (schema.contains("type")) {
        const std::string t = schema.at("type").get<std::string>();
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) ||
                  (t == "integer" && value.is_number_integer()) ||
                  (t == "number" && value.is_number()) || (t == "boolean" && value.is_boolean());
        if (!ok) {
            *why = "expected type " + t + " got " + value.dump();
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const json& e : schema.at("enum"))
            if (e == value) hit = true;
        if (!hit) {
            *why = value.dump() + " not in enum";
            return false;
        }
    }
    if (value.is_object() && schema.contains("required"))
        for (const json& key : schema.at("required"))
            if (!value.contains(key.get<std::string>())) {
                *why = "missing required key " + key.get<std::string>();
                return false;
            }
    if (value.is_object() && schema.contains("properties"))
        for (const auto& [key, sub] : schema.at("properties").items())
            if (value.contains(key) && !validates(value.at(key), sub, why)) return false;
    if (value.is_array() && schema.contains("items"))
        for (const json& element : value)
            if (!validates(element, schema.at("items"), why)) return false;
    return true;
}

void check_schema(const json& value, const std::string& schema_name) {
    std::string why;
    bool ok = validates(value, load_schema(schema_name), &why);
    CAPTURE(schema_name);
    CAPTURE(why);
    CAPTURE(value.dump());
    CHECK(ok);
}

Language single(const TemporalRelation& r) {
    Language lang;
    lang.add(r);
    return lang;
}

}  // namespace

TEST_CASE("every JSON report validates against its shipped schema") {
    // classify, both a P result and a hardness result with flags
    check_schema(classification_to_json(classify(single(catalog::leq()))), "classify_result.schema.json");
    check_schema(classification_to_json(classify(single(catalog::i_rel()))), "classify_result.schema.json");
    check_schema(classification_to_json(classify(single(catalog::eqxor()))), "classify_result.schema.json");

    // poly-check, preserved and violated
    Language betwc = single(catalog::betwc());
    check_schema(report::poly_check("minus", preserves_language(op_by_name("minus"), betwc)),
                 "poly_check.schema.json");
    check_schema(report::poly_check("cyc", preserves_language(op_by_name("cyc"), betwc)),
                 "poly_check.schema.json");

    // pp-eval
    check_schema(report::pp_eval(catalog::i_rel()), "pp_eval.schema.json");

    // pp-search, found and not found
    SearchBounds small{0, 2, 2, 6};
    check_schema(report::pp_search_report(pp_search(catalog::eq(), single(catalog::leq()), small)),
                 "pp_search.schema.json");
    check_schema(report::pp_search_report(pp_search(catalog::leq(), single(catalog::less()), small)),
                 "pp_search.schema.json");

    // qcsp-eval
    check_schema(report::qcsp_eval(true), "qcsp_eval.schema.json");

    // define
    auto oh = ordhorn_definition(catalog::i_rel());
    REQUIRE(oh.has_value());
    check_schema(report::define_report("oh", "i",
                                       print_formula(oh->to_formula(default_var_names(3)))),
                 "define.schema.json");
    check_schema(report::define_report("goh", "i", std::nullopt, "not found within bounds"),
                 "define.schema.json");

    // unary-classify
    check_schema(report::unary_classify("wave", classify_unary(ops::wave_op())),
                 "unary_classify.schema.json");

    // generate-check, exhaustive and sampled with counterexample
    check_schema(report::generate_check({"ic", "ci"}, "su1",
                                        bounded_generation_check({op_by_name("ic"), op_by_name("ci")},
                                                                 op_by_name("su1"), 3)),
                 "generate_check.schema.json");
    check_schema(report::generate_check({"peak"}, "minus",
                                        bounded_generation_check({op_by_name("peak")},
                                                                 op_by_name("minus"), 3)),
                 "generate_check.schema.json");

    // catalog and sweep
    check_schema(report::catalog_report(catalog::gadget_catalog()), "catalog.schema.json");
    check_schema(report::sweep_report(run_arity3_sweeps()), "sweep.schema.json");

    // the shipped fixture files validate against the language schema
    for (const char* fixture : {"betwc.json", "eqxor.json", "leq.json", "cyclc.json"}) {
        std::ifstream in(std::string(TQCSP_SOURCE_DIR) + "/tests/data/" + fixture);
        REQUIRE(in.good());
        json j;
        in >> j;
        check_schema(j, "language.schema.json");
    }
}

TEST_CASE("op spec files load through the schema and the parser") {
    std::ifstream in(std::string(TQCSP_SOURCE_DIR) + "/tests/data/staircase2.json");
    REQUIRE(in.good());
    json j;
    in >> j;
    check_schema(j, "op_spec.schema.json");
    UnaryPiecewiseOp op = op_from_json(j);
    CHECK(op.name() == "staircase2");
    // behaves exactly like the built-in su2
    for (int n = 1; n <= 3; ++n)
        for (const WeakOrder& w : enumerate_weak_orders(n))
            CHECK(unary_images(op, w) == unary_images(ops::su_op(2), w));
    CHECK(classify_unary(op).verdict == UnaryVerdict::GeneratesSu1);
}

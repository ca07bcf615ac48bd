// tqcsp — symbolic analysis for temporal constraint languages over (Q,<).
//
// One binary, subcommand style. Relations are finite sets of weak orders
// (orbits); languages load from JSON files or come from the built-in catalog.
// Every sampled mode sits behind an explicit seed, and every report embeds
// the bounds used. Exit codes: classify maps its label to 0 (P), 10
// (NP-hard), 11 (coNP-hard) or 20 (inconclusive); other subcommands exit 0
// on a positive answer, 1/4 on negative answers as documented below, and all
// input errors exit 2.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqcsp/catalog.hpp"
#include "tqcsp/classify.hpp"
#include "tqcsp/definability.hpp"
#include "tqcsp/generation.hpp"
#include "tqcsp/pp.hpp"
#include "tqcsp/qcsp.hpp"
#include "tqcsp/report.hpp"
#include "tqcsp/sweep.hpp"
#include "tqcsp/version.hpp"

namespace {

using namespace tqcsp;

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

Language load_language(const std::string& path) {
    Language lang = language_from_json(load_json_file(path));
    for (const std::string& w : lang.warnings) std::cerr << "warning: " << w << "\n";
    return lang;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool file_exists(const std::string& path) { return static_cast<bool>(std::ifstream(path)); }

// NAME from the built-in catalog or from --language FILE; or a language FILE
// (first relation).
TemporalRelation resolve_relation(const std::string& spec, const Language* lang) {
    if (lang)
        if (const TemporalRelation* r = lang->find(spec)) return *r;
    Language gadgets = catalog::gadget_catalog();
    if (const TemporalRelation* r = gadgets.find(spec)) return *r;
    if (file_exists(spec)) {
        Language from_file = load_language(spec);
        if (from_file.relations.empty())
            throw std::invalid_argument(spec + ": no relations in file");
        return from_file.relations.front();
    }
    throw std::invalid_argument("unknown relation: " + spec);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(text.substr(pos));
            break;
        }
        out.push_back(text.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic analysis for temporal constraint languages over the rational order"};
    app.set_version_flag("--version", std::string("tqcsp ") + kVersion);
    app.require_subcommand(1);

    std::string language_path, expr, instance_path, op_name_arg, relation_spec, target_spec;
    std::string bounds_text, vars_text, kind, from_text, to_name;
    bool json_out = false;
    int arity = 3;
    RunConfig config;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", json_out, "emit JSON instead of text");
        cmd->add_option("--bounds", bounds_text, "search bounds, e.g. E=2,A=4,D=2,C=6");
        cmd->add_option("--parallel", config.parallelism, "worker pool size");
        cmd->add_option("--seed", config.seed, "seed for sampled modes");
        cmd->add_option("--arity-ceiling", config.arity_ceiling, "orbit store ceiling");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify the QCSP complexity of a language");
    classify_cmd->add_option("--language", language_path, "language JSON file")->required();
    add_common(classify_cmd);

    CLI::App* poly_cmd = app.add_subcommand("poly-check", "check whether an operation preserves a language");
    poly_cmd->add_option("--op", op_name_arg, "operation name or op spec JSON file")->required();
    poly_cmd->add_option("--language", language_path, "language JSON file")->required();
    add_common(poly_cmd);

    CLI::App* ppeval_cmd = app.add_subcommand("pp-eval", "evaluate a pp-formula over a language");
    ppeval_cmd->add_option("--language", language_path, "language JSON file")->required();
    ppeval_cmd->add_option("--expr", expr, "pp formula text")->required();
    ppeval_cmd->add_option("--vars", vars_text, "output variable order, comma separated");
    add_common(ppeval_cmd);

    CLI::App* ppsearch_cmd = app.add_subcommand("pp-search", "search for a pp-definition of a target relation");
    ppsearch_cmd->add_option("--language", language_path, "language JSON file")->required();
    ppsearch_cmd->add_option("--target", target_spec, "catalog name, language member or relation file")->required();
    add_common(ppsearch_cmd);

    CLI::App* qcsp_cmd = app.add_subcommand("qcsp-eval", "evaluate a quantified sentence over a language");
    qcsp_cmd->add_option("--language", language_path, "language JSON file")->required();
    qcsp_cmd->add_option("--expr", expr, "sentence text");
    qcsp_cmd->add_option("--instance", instance_path, "file holding the sentence");
    add_common(qcsp_cmd);

    CLI::App* define_cmd = app.add_subcommand("define", "decide definability and print a certificate");
    define_cmd->add_option("--kind", kind, "oh | positive | equality | goh")->required();
    define_cmd->add_option("--relation", relation_spec, "catalog name, language member or relation file")->required();
    define_cmd->add_option("--language", language_path, "language JSON file for name lookup");
    add_common(define_cmd);

    CLI::App* uclass_cmd = app.add_subcommand("unary-classify", "classify a piecewise unary operation");
    uclass_cmd->add_option("--op", op_name_arg, "operation name or op spec JSON file")->required();
    add_common(uclass_cmd);

    CLI::App* gen_cmd = app.add_subcommand("generate-check", "bounded generation falsification");
    gen_cmd->add_option("--from", from_text, "comma-separated op names")->required();
    gen_cmd->add_option("--to", to_name, "target op name")->required();
    gen_cmd->add_option("--arity", arity, "arity bound (exhaustive to 3, sampled at 4)");
    gen_cmd->add_option("--samples", config.sample_count, "sample count for arity 4");
    add_common(gen_cmd);

    CLI::App* catalog_cmd = app.add_subcommand("catalog", "list the gadget relations");
    add_common(catalog_cmd);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the exhaustive arity-3 law suites");
    add_common(sweep_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!bounds_text.empty()) config.bounds = parse_bounds(bounds_text);

        if (*classify_cmd) {
            Language lang = load_language(language_path);
            ClassificationResult res = classify(lang, config);
            if (json_out) emit(classification_to_json(res));
            else std::cout << explain(res);
            return classification_exit_code(res.label);
        }

        if (*poly_cmd) {
            Language lang = load_language(language_path);
            OpRef op = file_exists(op_name_arg) ? OpRef(op_from_json(load_json_file(op_name_arg)))
                                                : op_by_name(op_name_arg);
            std::optional<LanguageViolation> v = preserves_language(op, lang);
            if (json_out) {
                emit(report::poly_check(op_name(op), v));
            } else if (v) {
                std::cout << op_name(op) << " violates " << v->relation << ": " << v->detail << "\n";
            } else {
                std::cout << op_name(op) << " preserves the language\n";
            }
            return v ? 1 : 0;
        }

        if (*ppeval_cmd) {
            Language lang = load_language(language_path);
            FormulaPtr f = parse_formula(expr);
            std::vector<std::string> out_vars =
                vars_text.empty() ? free_variables(f) : split_commas(vars_text);
            TemporalRelation r = pp_evaluate(f, lang, out_vars, config.arity_ceiling);
            if (json_out) {
                emit(report::pp_eval(r));
            } else {
                std::cout << r.orbits.size() << " orbits over (";
                for (std::size_t i = 0; i < out_vars.size(); ++i)
                    std::cout << (i ? "," : "") << out_vars[i];
                std::cout << ")\n";
                for (const WeakOrder& w : r.orbits) std::cout << "  " << w.str() << "\n";
            }
            return 0;
        }

        if (*ppsearch_cmd) {
            Language lang = load_language(language_path);
            TemporalRelation target = resolve_relation(target_spec, &lang);
            PpSearchResult res = pp_search(target, lang, config.bounds, config.parallelism);
            if (json_out) emit(report::pp_search_report(res));
            else if (res.certificate) std::cout << print_formula(*res.certificate) << "\n";
            else
                std::cout << "not found within bounds (E=" << config.bounds.max_existentials
                          << ",A=" << config.bounds.max_atoms << "), "
                          << res.candidates_checked << " candidates checked\n";
            return res.certificate ? 0 : 4;
        }

        if (*qcsp_cmd) {
            Language lang = load_language(language_path);
            std::string text = expr;
            if (text.empty() && !instance_path.empty()) text = read_file(instance_path);
            if (text.empty()) throw std::invalid_argument("qcsp-eval needs --expr or --instance");
            bool value = qcsp_evaluate(text, lang);
            if (json_out) emit(report::qcsp_eval(value));
            else std::cout << (value ? "true" : "false") << "\n";
            return value ? 0 : 1;
        }

        if (*define_cmd) {
            std::optional<Language> lang;
            if (!language_path.empty()) lang = load_language(language_path);
            TemporalRelation r = resolve_relation(relation_spec, lang ? &*lang : nullptr);
            std::vector<std::string> names = default_var_names(r.arity);
            std::optional<std::string> cert;
            std::string note;
            if (kind == "oh") {
                if (auto oh = ordhorn_definition(r)) cert = print_formula(oh->to_formula(names));
            } else if (kind == "positive") {
                PositiveResult res = positive_definition(r);
                if (res.certificate) cert = print_formula(*res.certificate);
                else if (res.violation)
                    note = "violation: " + res.violation->first.str() + " is inside but the dominating " +
                           res.violation->second.str() + " is not";
            } else if (kind == "equality") {
                EqualityResult res = equality_definition(r);
                if (res.certificate) cert = print_formula(*res.certificate);
            } else if (kind == "goh") {
                GohSearchResult res = goh_search(r, config.bounds);
                if (res.certificate) cert = print_formula(res.certificate->to_formula(names));
                else note = "not found within bounds; this is not a proof of absence";
            } else {
                throw std::invalid_argument("unknown kind: " + kind);
            }
            if (json_out) {
                emit(report::define_report(kind, r.name.empty() ? relation_spec : r.name, cert, note, config.bounds));
            } else if (cert) {
                std::cout << *cert << "\n";
            } else {
                std::cout << "not " << kind << "-definable";
                if (!note.empty()) std::cout << " (" << note << ")";
                std::cout << "\n";
            }
            return cert ? 0 : 4;
        }

        if (*uclass_cmd) {
            UnaryPiecewiseOp op;
            if (file_exists(op_name_arg)) {
                op = op_from_json(load_json_file(op_name_arg));
            } else {
                OpRef ref = op_by_name(op_name_arg);
                const auto* u = std::get_if<UnaryPiecewiseOp>(&ref);
                if (!u) throw std::invalid_argument("operation '" + op_name_arg + "' is not unary");
                op = *u;
            }
            UnaryClassification c = classify_unary(op);
            if (json_out) {
                emit(report::unary_classify(op.name(), c));
            } else {
                std::cout << op.name() << ": " << unary_verdict_str(c.verdict);
                if (c.mixed) {
                    std::cout << " (mixed:";
                    for (const std::string& g : c.generates) std::cout << " " << g;
                    std::cout << ")";
                }
                std::cout << "\n";
                for (const std::string& e : c.evidence) std::cout << "  " << e << "\n";
            }
            return 0;
        }

        if (*gen_cmd) {
            std::vector<std::string> from_names = split_commas(from_text);
            std::vector<OpRef> from;
            for (const std::string& n : from_names) from.push_back(op_by_name(n));
            GenerationCheck res = bounded_generation_check(from, op_by_name(to_name), arity, config);
            if (json_out) {
                emit(report::generate_check(from_names, to_name, res));
            } else if (res.counterexample) {
                std::cout << "counterexample at arity " << res.counterexample->arity << ":";
                for (const WeakOrder& w : res.counterexample->orbits) std::cout << " " << w.str();
                std::cout << "\n";
            } else {
                std::cout << "no counterexample up to arity " << res.arity_bound
                          << (res.exhaustive ? " (exhaustive)" : " (sampled, seed " +
                                                                     std::to_string(res.seed) + ")")
                          << ", " << res.relations_checked << " relations checked\n";
            }
            return res.counterexample ? 1 : 0;
        }

        if (*catalog_cmd) {
            Language gadgets = catalog::gadget_catalog();
            if (json_out) {
                emit(report::catalog_report(gadgets));
            } else {
                for (const TemporalRelation& r : gadgets.relations)
                    std::cout << r.name << "  arity " << r.arity << "  " << r.orbits.size()
                              << " orbits\n";
            }
            return 0;
        }

        if (*sweep_cmd) {
            std::vector<SweepResult> results = run_arity3_sweeps();
            if (json_out) {
                emit(report::sweep_report(results));
                for (const SweepResult& s : results)
                    if (s.violations) return 1;
                return 0;
            }
            bool ok = true;
            for (const SweepResult& s : results) {
                std::cout << (s.violations ? "[FAIL] " : "[ ok ] ") << s.name << "  checked "
                          << s.checked << "  violations " << s.violations << "\n";
                if (s.violations) ok = false;
            }
            std::cout << (ok ? "all suites passed\n" : "suite violations found\n");
            return ok ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

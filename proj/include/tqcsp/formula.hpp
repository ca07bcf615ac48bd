#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqcsp/weak_order.hpp"

namespace tqcsp {

// ── AST ─────────────────────────────────────────────────────────────────────
//
// Temporal formulas over comparison atoms {<, <=, =, !=} (> and >= are parser
// sugar, normalized by swapping operands) and relation-symbol atoms
// name(v1,...,vk). Connectives ! & |, quantifiers E x. / A x. scoping
// maximally to the right. Constants are not permitted.

enum class Cmp { Less, Leq, Eq, Neq };

inline const char* cmp_str(Cmp c) {
    switch (c) {
        case Cmp::Less: return "<";
        case Cmp::Leq: return "<=";
        case Cmp::Eq: return "=";
        case Cmp::Neq: return "!=";
    }
    return "?";
}

inline bool cmp_eval(Cmp c, int lhs_rank, int rhs_rank) {
    switch (c) {
        case Cmp::Less: return lhs_rank < rhs_rank;
        case Cmp::Leq: return lhs_rank <= rhs_rank;
        case Cmp::Eq: return lhs_rank == rhs_rank;
        case Cmp::Neq: return lhs_rank != rhs_rank;
    }
    return false;
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { CmpAtom, RelAtom, Not, And, Or, Exists, Forall };

    Kind kind;
    // CmpAtom
    std::string lhs, rhs;
    Cmp cmp = Cmp::Less;
    // RelAtom
    std::string rel;
    std::vector<std::string> args;
    // Not (1), And/Or (n)
    std::vector<FormulaPtr> kids;
    // Exists/Forall (body in kids[0])
    std::string var;

    static FormulaPtr atom(std::string a, Cmp c, std::string b) {
        auto f = std::make_shared<Formula>();
        f->kind = Kind::CmpAtom;
        f->lhs = std::move(a);
        f->cmp = c;
        f->rhs = std::move(b);
        return f;
    }
    static FormulaPtr rel_atom(std::string name, std::vector<std::string> vars) {
        auto f = std::make_shared<Formula>();
        f->kind = Kind::RelAtom;
        f->rel = std::move(name);
        f->args = std::move(vars);
        return f;
    }
    static FormulaPtr negate(FormulaPtr k) {
        auto f = std::make_shared<Formula>();
        f->kind = Kind::Not;
        f->kids = {std::move(k)};
        return f;
    }
    static FormulaPtr conj(std::vector<FormulaPtr> ks) {
        if (ks.size() == 1) return ks[0];
        auto f = std::make_shared<Formula>();
        f->kind = Kind::And;
        f->kids = std::move(ks);
        return f;
    }
    static FormulaPtr disj(std::vector<FormulaPtr> ks) {
        if (ks.size() == 1) return ks[0];
        auto f = std::make_shared<Formula>();
        f->kind = Kind::Or;
        f->kids = std::move(ks);
        return f;
    }
    static FormulaPtr quant(Kind q, std::string v, FormulaPtr body) {
        auto f = std::make_shared<Formula>();
        f->kind = q;
        f->var = std::move(v);
        f->kids = {std::move(body)};
        return f;
    }
};

inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::CmpAtom:
            return a->lhs == b->lhs && a->cmp == b->cmp && a->rhs == b->rhs;
        case Formula::Kind::RelAtom:
            return a->rel == b->rel && a->args == b->args;
        case Formula::Kind::Not:
            return formula_equal(a->kids[0], b->kids[0]);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            if (a->kids.size() != b->kids.size()) return false;
            for (std::size_t i = 0; i < a->kids.size(); ++i)
                if (!formula_equal(a->kids[i], b->kids[i])) return false;
            return true;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            return a->var == b->var && formula_equal(a->kids[0], b->kids[0]);
    }
    return false;
}

// ── Variable accounting ─────────────────────────────────────────────────────

namespace detail {
inline void collect_vars(const FormulaPtr& f, std::set<std::string>& bound,
                         std::vector<std::string>& free_order, std::set<std::string>& free_seen) {
    switch (f->kind) {
        case Formula::Kind::CmpAtom:
            for (const std::string* v : {&f->lhs, &f->rhs})
                if (!bound.count(*v) && free_seen.insert(*v).second) free_order.push_back(*v);
            break;
        case Formula::Kind::RelAtom:
            for (const std::string& v : f->args)
                if (!bound.count(v) && free_seen.insert(v).second) free_order.push_back(v);
            break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const FormulaPtr& k : f->kids) collect_vars(k, bound, free_order, free_seen);
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            bool fresh = bound.insert(f->var).second;
            collect_vars(f->kids[0], bound, free_order, free_seen);
            if (fresh) bound.erase(f->var);
            break;
        }
    }
}
}  // namespace detail

// Free variables in order of first appearance.
inline std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> bound, seen;
    std::vector<std::string> order;
    detail::collect_vars(f, bound, order, seen);
    return order;
}

inline void collect_bound_variables(const FormulaPtr& f, std::set<std::string>& out) {
    if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) out.insert(f->var);
    for (const FormulaPtr& k : f->kids) collect_bound_variables(k, out);
}

// ── Classification ──────────────────────────────────────────────────────────

enum class FormulaClass { QuantifierFree, Pp, ForallExistsAnd, General };

inline const char* formula_class_str(FormulaClass c) {
    switch (c) {
        case FormulaClass::QuantifierFree: return "quantifier-free";
        case FormulaClass::Pp: return "pp";
        case FormulaClass::ForallExistsAnd: return "forall-exists-and";
        case FormulaClass::General: return "general";
    }
    return "?";
}

namespace detail {
inline bool is_atom(const FormulaPtr& f) {
    return f->kind == Formula::Kind::CmpAtom || f->kind == Formula::Kind::RelAtom;
}
inline bool is_atom_conjunction(const FormulaPtr& f) {
    if (is_atom(f)) return true;
    if (f->kind != Formula::Kind::And) return false;
    for (const FormulaPtr& k : f->kids)
        if (!is_atom(k)) return false;
    return true;
}
inline bool has_quantifier(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) return true;
    for (const FormulaPtr& k : f->kids)
        if (has_quantifier(k)) return true;
    return false;
}
}  // namespace detail

inline FormulaClass classify_formula(const FormulaPtr& f) {
    if (!detail::has_quantifier(f)) return FormulaClass::QuantifierFree;
    FormulaPtr cur = f;
    bool all_exists = true;
    while (cur->kind == Formula::Kind::Exists || cur->kind == Formula::Kind::Forall) {
        if (cur->kind == Formula::Kind::Forall) all_exists = false;
        cur = cur->kids[0];
    }
    if (detail::is_atom_conjunction(cur))
        return all_exists ? FormulaClass::Pp : FormulaClass::ForallExistsAnd;
    return FormulaClass::General;
}

// ── Printing ────────────────────────────────────────────────────────────────

namespace detail {
// precedence: quantifier 0, | 1, & 2, ! 3, atom 4
inline void print_rec(const FormulaPtr& f, int parent_prec, std::string& out) {
    auto wrap = [&](int prec, auto&& body) {
        bool need = prec < parent_prec;
        if (need) out += "(";
        body();
        if (need) out += ")";
    };
    switch (f->kind) {
        case Formula::Kind::CmpAtom:
            out += f->lhs;
            out += cmp_str(f->cmp);
            out += f->rhs;
            break;
        case Formula::Kind::RelAtom:
            out += f->rel;
            out += "(";
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) out += ",";
                out += f->args[i];
            }
            out += ")";
            break;
        case Formula::Kind::Not:
            wrap(3, [&] {
                out += "!";
                print_rec(f->kids[0], 3, out);
            });
            break;
        case Formula::Kind::And:
            // children print at one level tighter so nested conjunctions keep
            // their own parentheses (round-trip preserves structure)
            wrap(2, [&] {
                for (std::size_t i = 0; i < f->kids.size(); ++i) {
                    if (i) out += " & ";
                    print_rec(f->kids[i], 3, out);
                }
            });
            break;
        case Formula::Kind::Or:
            wrap(1, [&] {
                for (std::size_t i = 0; i < f->kids.size(); ++i) {
                    if (i) out += " | ";
                    print_rec(f->kids[i], 2, out);
                }
            });
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            wrap(0, [&] {
                out += (f->kind == Formula::Kind::Exists) ? "E " : "A ";
                out += f->var;
                out += ". ";
                print_rec(f->kids[0], 0, out);
            });
            break;
    }
}
}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) {
    std::string out;
    detail::print_rec(f, 0, out);
    return out;
}

// ── Parsing ─────────────────────────────────────────────────────────────────

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    FormulaPtr parse() {
        FormulaPtr f = formula();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return f;
    }

private:
    FormulaPtr formula() {
        skip_ws();
        std::size_t save = pos_;
        if (std::optional<char> q = try_quantifier()) {
            std::string v = ident();
            skip_ws();
            expect('.');
            FormulaPtr body = formula();  // maximal scope to the right
            return Formula::quant(*q == 'E' ? Formula::Kind::Exists : Formula::Kind::Forall,
                                  std::move(v), std::move(body));
        }
        pos_ = save;
        return disjunction();
    }

    FormulaPtr disjunction() {
        std::vector<FormulaPtr> parts = {conjunction()};
        while (true) {
            skip_ws();
            if (!try_char('|')) break;
            parts.push_back(conjunction());
        }
        return Formula::disj(std::move(parts));
    }

    FormulaPtr conjunction() {
        std::vector<FormulaPtr> parts = {negation()};
        while (true) {
            skip_ws();
            if (!try_char('&')) break;
            parts.push_back(negation());
        }
        return Formula::conj(std::move(parts));
    }

    FormulaPtr negation() {
        skip_ws();
        if (try_char('!')) return Formula::negate(negation());
        return primary();
    }

    FormulaPtr primary() {
        skip_ws();
        if (try_char('(')) {
            FormulaPtr f = formula();
            skip_ws();
            expect(')');
            return f;
        }
        std::string name = ident();
        skip_ws();
        if (try_char('(')) {  // relation atom
            std::vector<std::string> args;
            args.push_back(ident());
            skip_ws();
            while (try_char(',')) {
                args.push_back(ident());
                skip_ws();
            }
            expect(')');
            return Formula::rel_atom(std::move(name), std::move(args));
        }
        Cmp c = comparator();
        std::string rhs = ident();
        // > and >= normalize to < and <= with swapped operands.
        if (swapped_) return Formula::atom(std::move(rhs), c, std::move(name));
        return Formula::atom(std::move(name), c, std::move(rhs));
    }

    Cmp comparator() {
        skip_ws();
        swapped_ = false;
        if (pos_ >= text_.size()) throw ParseError("expected comparator", pos_);
        char ch = text_[pos_];
        if (ch == '<') {
            ++pos_;
            if (try_char('=')) return Cmp::Leq;
            return Cmp::Less;
        }
        if (ch == '>') {
            ++pos_;
            swapped_ = true;
            if (try_char('=')) return Cmp::Leq;
            return Cmp::Less;
        }
        if (ch == '=') {
            ++pos_;
            return Cmp::Eq;
        }
        if (ch == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
            pos_ += 2;
            return Cmp::Neq;
        }
        throw ParseError("expected comparator", pos_);
    }

    std::optional<char> try_quantifier() {
        skip_ws();
        if (pos_ >= text_.size()) return std::nullopt;
        char ch = text_[pos_];
        if (ch != 'E' && ch != 'A') return std::nullopt;
        // must be a standalone keyword followed by an identifier
        std::size_t next = pos_ + 1;
        if (next < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_'))
            return std::nullopt;
        ++pos_;
        return ch;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) throw ParseError("expected identifier", pos_);
        std::string name(text_.substr(start, pos_ - start));
        if (name == "E" || name == "A") throw ParseError("reserved quantifier keyword", start);
        return name;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool try_char(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!try_char(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    bool swapped_ = false;
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
    FormulaPtr f = detail::Parser(text).parse();
    // No variable may be both free and bound.
    std::set<std::string> bound;
    collect_bound_variables(f, bound);
    for (const std::string& v : free_variables(f))
        if (bound.count(v))
            throw ParseError("variable '" + v + "' is both free and bound", 0);
    return f;
}

// ── Evaluation on a weak order ──────────────────────────────────────────────
//
// Quantifier-free comparison formulas only; truth depends only on rank
// comparisons, so the value on any representative tuple is well defined.
inline bool eval_on_weak_order(const FormulaPtr& f, const WeakOrder& w,
                               const std::map<std::string, int>& binding) {
    switch (f->kind) {
        case Formula::Kind::CmpAtom: {
            auto li = binding.find(f->lhs);
            auto ri = binding.find(f->rhs);
            if (li == binding.end()) throw std::invalid_argument("unbound variable: " + f->lhs);
            if (ri == binding.end()) throw std::invalid_argument("unbound variable: " + f->rhs);
            return cmp_eval(f->cmp, w.rank(li->second), w.rank(ri->second));
        }
        case Formula::Kind::Not:
            return !eval_on_weak_order(f->kids[0], w, binding);
        case Formula::Kind::And:
            for (const FormulaPtr& k : f->kids)
                if (!eval_on_weak_order(k, w, binding)) return false;
            return true;
        case Formula::Kind::Or:
            for (const FormulaPtr& k : f->kids)
                if (eval_on_weak_order(k, w, binding)) return true;
            return false;
        default:
            throw std::invalid_argument("eval_on_weak_order: formula is not quantifier-free");
    }
}

// ── JSON AST interchange ────────────────────────────────────────────────────

inline nlohmann::json formula_to_json(const FormulaPtr& f) {
    using nlohmann::json;
    switch (f->kind) {
        case Formula::Kind::CmpAtom:
            return json{{"node", "atom"}, {"lhs", f->lhs}, {"op", cmp_str(f->cmp)}, {"rhs", f->rhs}};
        case Formula::Kind::RelAtom:
            return json{{"node", "rel"}, {"name", f->rel}, {"args", f->args}};
        case Formula::Kind::Not:
            return json{{"node", "not"}, {"arg", formula_to_json(f->kids[0])}};
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            json kids = json::array();
            for (const FormulaPtr& k : f->kids) kids.push_back(formula_to_json(k));
            return json{{"node", f->kind == Formula::Kind::And ? "and" : "or"}, {"args", kids}};
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            return json{{"node", f->kind == Formula::Kind::Exists ? "exists" : "forall"},
                        {"var", f->var},
                        {"body", formula_to_json(f->kids[0])}};
    }
    return {};
}

inline FormulaPtr formula_from_json(const nlohmann::json& j) {
    const std::string node = j.at("node").get<std::string>();
    if (node == "atom") {
        const std::string op = j.at("op").get<std::string>();
        Cmp c;
        if (op == "<") c = Cmp::Less;
        else if (op == "<=") c = Cmp::Leq;
        else if (op == "=") c = Cmp::Eq;
        else if (op == "!=") c = Cmp::Neq;
        else throw std::invalid_argument("unknown comparator in JSON AST: " + op);
        return Formula::atom(j.at("lhs").get<std::string>(), c, j.at("rhs").get<std::string>());
    }
    if (node == "rel")
        return Formula::rel_atom(j.at("name").get<std::string>(),
                                 j.at("args").get<std::vector<std::string>>());
    if (node == "not") return Formula::negate(formula_from_json(j.at("arg")));
    if (node == "and" || node == "or") {
        std::vector<FormulaPtr> kids;
        for (const auto& k : j.at("args")) kids.push_back(formula_from_json(k));
        return node == "and" ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    if (node == "exists" || node == "forall")
        return Formula::quant(node == "exists" ? Formula::Kind::Exists : Formula::Kind::Forall,
                              j.at("var").get<std::string>(), formula_from_json(j.at("body")));
    throw std::invalid_argument("unknown JSON AST node: " + node);
}

}  // namespace tqcsp

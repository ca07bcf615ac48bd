#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tqcsp/catalog.hpp"
#include "tqcsp/config.hpp"
#include "tqcsp/preserve.hpp"
#include "tqcsp/rational.hpp"

namespace tqcsp {

// ── Unary operation classification ──────────────────────────────────────────
//
// Decision procedure over the piecewise cell structure, with preservation
// tests against Betw/Cycl/Sep for the injective case. Every "generates"
// verdict is labelled with the branch it rests on; generation itself is only
// falsifiable in the bounded engine below, never provable in full.

enum class UnaryVerdict {
    Constant,
    OrderPreserving,
    GeneratesMinus,
    GeneratesCyc,
    GeneratesMinusAndCyc,
    GeneratesAllPermutations,
    GeneratesIc,
    GeneratesCi,
    GeneratesSu1,
    GeneratesPeak,
};

inline const char* unary_verdict_str(UnaryVerdict v) {
    switch (v) {
        case UnaryVerdict::Constant: return "constant";
        case UnaryVerdict::OrderPreserving: return "order-preserving";
        case UnaryVerdict::GeneratesMinus: return "generates-minus";
        case UnaryVerdict::GeneratesCyc: return "generates-cyc";
        case UnaryVerdict::GeneratesMinusAndCyc: return "generates-minus-and-cyc";
        case UnaryVerdict::GeneratesAllPermutations: return "generates-all-permutations";
        case UnaryVerdict::GeneratesIc: return "generates-ic";
        case UnaryVerdict::GeneratesCi: return "generates-ci";
        case UnaryVerdict::GeneratesSu1: return "generates-su1";
        case UnaryVerdict::GeneratesPeak: return "generates-peak";
    }
    return "?";
}

struct UnaryClassification {
    UnaryVerdict verdict;
    std::set<std::string> generates;   // full set derivable by the syntactic rules
    bool mixed = false;                // more than one generated op derived
    std::vector<std::string> evidence;
};

inline UnaryClassification classify_unary(const UnaryPiecewiseOp& op) {
    UnaryClassification out;
    if (op.is_constant_op()) {
        out.verdict = UnaryVerdict::Constant;
        out.evidence.push_back("single image landmark across all cells");
        return out;
    }
    const WeakOrder pair({0, 1});
    std::set<WeakOrder> pair_images = unary_images(op, pair);
    bool preserves_less = pair_images == std::set<WeakOrder>{pair};
    if (preserves_less) {
        out.verdict = UnaryVerdict::OrderPreserving;
        out.evidence.push_back("every image of a strict pair is the strict pair");
        return out;
    }
    bool injective = !pair_images.count(WeakOrder({0, 0}));
    if (injective) {
        bool betw = !preserves_unary(op, catalog::betw());
        bool cycl = !preserves_unary(op, catalog::cycl());
        bool sep = !preserves_unary(op, catalog::sep());
        out.evidence.push_back(std::string("injective, violates <; preserves betw=") +
                               (betw ? "yes" : "no") + " cycl=" + (cycl ? "yes" : "no") +
                               " sep=" + (sep ? "yes" : "no"));
        if (betw) {
            out.verdict = UnaryVerdict::GeneratesMinus;
            out.generates = {"minus"};
        } else if (cycl) {
            out.verdict = UnaryVerdict::GeneratesCyc;
            out.generates = {"cyc"};
        } else if (sep) {
            out.verdict = UnaryVerdict::GeneratesMinusAndCyc;
            out.generates = {"minus", "cyc"};
        } else {
            out.verdict = UnaryVerdict::GeneratesAllPermutations;
        }
        out.mixed = out.generates.size() > 1;
        return out;
    }
    if (op.has_monotone_cell()) {
        // non-injective with infinite image: a collapse pair (two arguments
        // with equal image) above a monotone cell yields the ic side, below
        // yields the ci side; decreasing cells additionally yield the
        // reversal. Collapse pairs live inside constant full cells, across
        // monotone cells with overlapping images, and at point landmarks
        // colliding with other cells' images.
        const auto& cells = op.cells();
        auto images_overlap = [](const ImageInterval& a, const ImageInterval& b) {
            bool a_below_b = a.hi >= 0 && b.lo >= 0 && a.hi <= b.lo;
            bool b_below_a = b.hi >= 0 && a.lo >= 0 && b.hi <= a.lo;
            return !a_below_b && !b_below_a;
        };
        auto point_collides = [&](std::size_t j, std::size_t k) {
            int lm = cells[j].landmark;
            if (cells[k].monotone())
                return (cells[k].image.lo < 0 || cells[k].image.lo < lm) &&
                       (cells[k].image.hi < 0 || lm < cells[k].image.hi);
            return cells[k].landmark == lm;
        };
        std::vector<std::pair<std::size_t, std::size_t>> collapse_pairs;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!cells[j].is_point && cells[j].behavior == CellBehavior::Constant)
                collapse_pairs.push_back({j, j});
            for (std::size_t k = j + 1; k < cells.size(); ++k) {
                if (cells[j].monotone() && cells[k].monotone() &&
                    images_overlap(cells[j].image, cells[k].image))
                    collapse_pairs.push_back({j, k});
                if (cells[j].is_point && point_collides(j, k)) collapse_pairs.push_back({j, k});
                if (cells[k].is_point && !cells[j].is_point && point_collides(k, j))
                    collapse_pairs.push_back({j, k});
            }
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!cells[i].monotone()) continue;
            bool collapse_before = false, collapse_after = false;
            for (auto [lo, hi] : collapse_pairs) {
                if (lo >= i) collapse_after = true;
                if (hi <= i) collapse_before = true;
            }
            if (cells[i].behavior == CellBehavior::Decreasing) out.generates.insert("minus");
            if (collapse_after) out.generates.insert("ic");
            if (collapse_before) out.generates.insert("ci");
        }
        if (out.generates.count("minus") &&
            (out.generates.count("ic") || out.generates.count("ci"))) {
            out.generates.insert("ic");  // conjugation by the reversal swaps the pair
            out.generates.insert("ci");
        }
        out.evidence.push_back("non-injective with an infinite monotone cell");
        out.mixed = out.generates.size() > 1;
        if (out.generates.count("ic")) out.verdict = UnaryVerdict::GeneratesIc;
        else if (out.generates.count("ci")) out.verdict = UnaryVerdict::GeneratesCi;
        else throw std::logic_error(op.name() + ": no collapse found for a non-injective op");
        return out;
    }
    // finite image
    std::set<int> full_cell_landmarks;
    for (const Cell& c : op.cells())
        if (!c.is_point) full_cell_landmarks.insert(c.landmark);
    if (full_cell_landmarks.size() >= 2) {
        out.verdict = UnaryVerdict::GeneratesSu1;
        out.generates = {"su1"};
        out.evidence.push_back("finite image with two distinct full-cell landmarks");
    } else {
        out.verdict = UnaryVerdict::GeneratesPeak;
        out.generates = {"peak"};
        out.evidence.push_back(
            "finite image: an attainable breakpoint maps off the single full-cell landmark");
    }
    return out;
}

// ── Bounded generation falsification ────────────────────────────────────────
//
// F generates g would require every temporal relation preserved by all of F
// to be preserved by g; the engine searches for a counterexample among all
// relations of arity <= 3 (exhaustive) and samples subsets at arity 4.

struct GenerationCheck {
    std::optional<TemporalRelation> counterexample;
    int arity_bound = 0;
    bool exhaustive = true;
    std::uint64_t relations_checked = 0;
    std::uint64_t seed = 0;  // sampled mode only
};

namespace detail {

// orbit-index image tables for one arity
struct OpTable {
    bool unary = true;
    std::vector<std::vector<int>> unary_images;          // orbit -> image orbit indices
    std::vector<std::array<int, 3>> binary_triples;      // (lhs, rhs, out) per zero slot
};

inline OpTable build_op_table(const OpRef& op, const std::vector<WeakOrder>& orbits) {
    std::map<WeakOrder, int> index;
    for (std::size_t i = 0; i < orbits.size(); ++i) index[orbits[i]] = static_cast<int>(i);
    OpTable t;
    if (const auto* u = std::get_if<UnaryPiecewiseOp>(&op)) {
        t.unary = true;
        t.unary_images.resize(orbits.size());
        for (std::size_t i = 0; i < orbits.size(); ++i)
            for (const WeakOrder& img : unary_images(*u, orbits[i]))
                t.unary_images[i].push_back(index.at(img));
        return t;
    }
    t.unary = false;
    if (const auto* b = std::get_if<BinaryComparisonOp>(&op)) {
        for (std::size_t i = 0; i < orbits.size(); ++i)
            for (std::size_t j = 0; j < orbits.size(); ++j)
                for (int slot = 0; slot <= 2 * orbits[i].blocks(); ++slot)
                    t.binary_triples.push_back({static_cast<int>(i), static_cast<int>(j),
                                                index.at(binary_image(*b, orbits[i], orbits[j], slot))});
        return t;
    }
    const auto& j_op = std::get<JoinRuleOp>(op);
    const int n = orbits.empty() ? 0 : orbits[0].arity();
    std::vector<int> vars1, vars2;
    for (int i = 0; i < n; ++i) {
        vars1.push_back(i);
        vars2.push_back(n + i);
    }
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for (std::size_t jj = 0; jj < orbits.size(); ++jj)
            for (const WeakOrder& join : join_orders(orbits[i], vars1, orbits[jj], vars2)) {
                std::vector<int> outv(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c) {
                    int a = join.rank(c), b = join.rank(n + c);
                    outv[static_cast<std::size_t>(c)] = j_op.is_min ? std::min(a, b) : std::max(a, b);
                }
                t.binary_triples.push_back({static_cast<int>(i), static_cast<int>(jj),
                                            index.at(WeakOrder(std::move(outv)))});
            }
    return t;
}

template <typename Mask>
bool table_preserves(const OpTable& t, Mask mask) {
    if (t.unary) {
        for (std::size_t i = 0; i < t.unary_images.size(); ++i) {
            if (!mask[i]) continue;
            for (int img : t.unary_images[i])
                if (!mask[static_cast<std::size_t>(img)]) return false;
        }
        return true;
    }
    for (const auto& tr : t.binary_triples)
        if (mask[static_cast<std::size_t>(tr[0])] && mask[static_cast<std::size_t>(tr[1])] &&
            !mask[static_cast<std::size_t>(tr[2])])
            return false;
    return true;
}

}  // namespace detail

inline GenerationCheck bounded_generation_check(const std::vector<OpRef>& from, const OpRef& to,
                                                int arity_bound, const RunConfig& config = {}) {
    if (arity_bound < 1 || arity_bound > 4)
        throw std::invalid_argument("generation check: arity bound must be between 1 and 4");
    GenerationCheck result;
    result.arity_bound = arity_bound;
    result.seed = config.seed;

    for (int arity = 1; arity <= std::min(arity_bound, 3); ++arity) {
        std::vector<WeakOrder> orbits = enumerate_weak_orders(arity);
        std::vector<detail::OpTable> f_tables;
        for (const OpRef& f : from) f_tables.push_back(detail::build_op_table(f, orbits));
        detail::OpTable g_table = detail::build_op_table(to, orbits);
        const std::uint32_t total = 1u << orbits.size();
        std::vector<bool> mask(orbits.size());
        for (std::uint32_t bits = 0; bits < total; ++bits) {
            for (std::size_t i = 0; i < orbits.size(); ++i) mask[i] = (bits >> i) & 1u;
            ++result.relations_checked;
            bool all_f = true;
            for (const detail::OpTable& t : f_tables)
                if (!detail::table_preserves(t, mask)) {
                    all_f = false;
                    break;
                }
            if (!all_f || detail::table_preserves(g_table, mask)) continue;
            TemporalRelation r{arity, {}, "counterexample"};
            for (std::size_t i = 0; i < orbits.size(); ++i)
                if (mask[i]) r.orbits.insert(orbits[i]);
            result.counterexample = std::move(r);
            return result;
        }
    }
    if (arity_bound == 4) {
        result.exhaustive = false;
        std::vector<WeakOrder> orbits = enumerate_weak_orders(4);
        std::vector<detail::OpTable> f_tables;
        for (const OpRef& f : from) f_tables.push_back(detail::build_op_table(f, orbits));
        detail::OpTable g_table = detail::build_op_table(to, orbits);
        std::mt19937_64 rng(config.seed);
        std::vector<bool> mask(orbits.size());
        for (std::uint64_t s = 0; s < config.sample_count; ++s) {
            for (std::size_t i = 0; i < orbits.size(); ++i) mask[i] = rng() & 1u;
            ++result.relations_checked;
            bool all_f = true;
            for (const detail::OpTable& t : f_tables)
                if (!detail::table_preserves(t, mask)) {
                    all_f = false;
                    break;
                }
            if (!all_f || detail::table_preserves(g_table, mask)) continue;
            TemporalRelation r{4, {}, "counterexample"};
            for (std::size_t i = 0; i < orbits.size(); ++i)
                if (mask[i]) r.orbits.insert(orbits[i]);
            result.counterexample = std::move(r);
            return result;
        }
    }
    return result;
}

// ── The staircase composition identity ──────────────────────────────────────
//
// For any tuple t: applying ic, then an order automorphism that keeps the
// negative values below 0 and lifts 0 to 1, then ci, reproduces su1(t).
// Checked numerically with an explicit piecewise-linear automorphism.

struct PiecewiseLinearMap {
    // strictly increasing control points; identity slope beyond the ends
    std::vector<std::pair<Rational, Rational>> points;

    Rational eval(const Rational& x) const {
        if (points.empty()) return x;
        if (x <= points.front().first) return points.front().second + (x - points.front().first);
        if (x >= points.back().first) return points.back().second + (x - points.back().first);
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            const auto& [x0, y0] = points[i];
            const auto& [x1, y1] = points[i + 1];
            if (x >= x0 && x <= x1) return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
        }
        return x;
    }
};

struct IdentityCheckEntry {
    std::vector<Rational> tuple;
    std::vector<Rational> expected;  // su1(t)
    std::vector<Rational> actual;    // ci(alpha(ic(t)))
    bool passed = false;
};

struct IdentityCheckReport {
    std::vector<IdentityCheckEntry> entries;
    bool all_passed = true;
};

inline IdentityCheckReport su1_composition_check(
    const std::vector<std::vector<Rational>>& tuples) {
    UnaryPiecewiseOp ic = ops::ic_op(), ci = ops::ci_op(), su1 = ops::su_op(1);
    IdentityCheckReport report;
    for (const std::vector<Rational>& t : tuples) {
        IdentityCheckEntry entry;
        entry.tuple = t;
        std::vector<Rational> after_ic;
        for (const Rational& x : t) after_ic.push_back(ic.eval(x));
        // alpha: identity on the (strictly negative) surviving values, 0 -> 1
        std::set<Rational> values(after_ic.begin(), after_ic.end());
        PiecewiseLinearMap alpha;
        for (const Rational& v : values)
            if (v.sign() < 0) alpha.points.push_back({v, v});
        alpha.points.push_back({Rational(0), Rational(1)});
        std::vector<Rational> after_alpha;
        for (const Rational& x : after_ic) after_alpha.push_back(alpha.eval(x));
        for (const Rational& x : after_alpha) entry.actual.push_back(ci.eval(x));
        for (const Rational& x : t) entry.expected.push_back(su1.eval(x));
        entry.passed = entry.actual == entry.expected;
        if (!entry.passed) report.all_passed = false;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace tqcsp

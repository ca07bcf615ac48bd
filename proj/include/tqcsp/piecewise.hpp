#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqcsp/rational.hpp"

namespace tqcsp {

// ── Piecewise unary operations ──────────────────────────────────────────────
//
// A unary operation on Q described by cells: open intervals and attainable
// breakpoints (point cells) that partition Q. Each open cell is increasing,
// decreasing, or constant; images are open intervals whose endpoints are
// symbolic landmarks (with a declared total order), constants map to a single
// landmark. Breakpoints without a point cell are unattainable cuts (no
// rational attains them, e.g. an irrational cut position).
//
// The preservation engine only ever reads the symbolic structure; the numeric
// forms exist for the grid-instantiation oracle.

enum class CellBehavior { Increasing, Decreasing, Constant };

// Landmarks are ordered by index; `value` is the numeric stand-in used by the
// oracle (for an irrational landmark any rational stand-in with the right
// relative order works, since only order is observable).
struct Landmark {
    std::string label;
    Rational value;
};

// Open image interval in landmark indices; -1 means unbounded on that side.
struct ImageInterval {
    int lo = -1;
    int hi = -1;
};

// Numeric form of a monotone cell: affine s*x + t, or t + s/(p - x).
struct NumericMap {
    enum class Form { Affine, Recip } form = Form::Affine;
    Rational s{1}, t{0}, p{0};

    Rational eval(const Rational& x) const {
        if (form == Form::Affine) return s * x + t;
        return t + s / (p - x);
    }
    Rational invert(const Rational& y) const {
        if (form == Form::Affine) return (y - t) / s;
        return p - s / (y - t);
    }
    NumericMap mirrored_domain() const {  // g(x) = f(-x)
        if (form == Form::Affine) return {Form::Affine, -s, t, p};
        return {Form::Recip, -s, t, -p};
    }
    NumericMap negated_image() const {  // g(x) = -f(x)
        if (form == Form::Affine) return {Form::Affine, -s, -t, p};
        return {Form::Recip, -s, -t, p};
    }
};

struct Cell {
    bool is_point = false;
    // Domain bounds; ignored when unbounded. Point cells: lo == hi == position.
    bool lo_unbounded = false, hi_unbounded = false;
    Rational lo{0}, hi{0};
    CellBehavior behavior = CellBehavior::Constant;
    int landmark = -1;    // constant cells and points
    ImageInterval image;  // monotone cells
    NumericMap map;       // monotone cells

    Rational position() const { return lo; }  // point cells
    bool monotone() const { return !is_point && behavior != CellBehavior::Constant; }
};

// Monotone numeric map for a domain/image open-interval pair. Unsupported
// shapes (full line to a bounded side, bounded cell onto the full line) must
// be split at a breakpoint by the caller.
inline NumericMap make_numeric_map(std::optional<Rational> dlo, std::optional<Rational> dhi,
                                   std::optional<Rational> ilo, std::optional<Rational> ihi,
                                   bool increasing) {
    using F = NumericMap::Form;
    if (!increasing) {
        // Build the increasing map on the mirrored domain, then substitute -x.
        std::optional<Rational> mlo = dhi ? std::optional<Rational>(-*dhi) : std::nullopt;
        std::optional<Rational> mhi = dlo ? std::optional<Rational>(-*dlo) : std::nullopt;
        return make_numeric_map(mlo, mhi, ilo, ihi, true).mirrored_domain();
    }
    if (dlo && dhi) {
        Rational a = *dlo, b = *dhi;
        if (ilo && ihi) {  // affine onto (c,d)
            Rational slope = (*ihi - *ilo) / (b - a);
            return {F::Affine, slope, *ilo - slope * a, Rational(0)};
        }
        if (ilo && !ihi)  // (a,b) -> (c,inf): c - 1 + (b-a)/(b-x)
            return {F::Recip, b - a, *ilo - Rational(1), b};
        if (!ilo && ihi)  // (a,b) -> (-inf,d): d + 1 + (b-a)/(a-x)
            return {F::Recip, b - a, *ihi + Rational(1), a};
        throw std::invalid_argument("numeric map: bounded cell onto the full line; split the cell");
    }
    if (!dlo && dhi) {
        Rational b = *dhi;
        if (!ilo && ihi) return {F::Affine, Rational(1), *ihi - b, Rational(0)};  // shift
        if (ilo && !ihi) return {F::Recip, Rational(1), *ilo, b};  // c + 1/(b-x)
        if (ilo && ihi)  // (-inf,b) -> (c,d): c + (d-c)/(b+1-x)
            return {F::Recip, *ihi - *ilo, *ilo, b + Rational(1)};
        throw std::invalid_argument("numeric map: half line onto the full line; split the cell");
    }
    if (dlo && !dhi) {
        Rational a = *dlo;
        if (ilo && !ihi) return {F::Affine, Rational(1), *ilo - a, Rational(0)};
        if (!ilo && ihi) return {F::Recip, Rational(1), *ihi, a};  // d + 1/(a-x)
        if (ilo && ihi)  // (a,inf) -> (c,d): d - (d-c)/(x-a+1)
            return {F::Recip, *ihi - *ilo, *ihi, a - Rational(1)};
        throw std::invalid_argument("numeric map: half line onto the full line; split the cell");
    }
    if (ilo || ihi)
        throw std::invalid_argument("numeric map: full line onto a bounded image; split the cell");
    return {F::Affine, Rational(1), Rational(0), Rational(0)};
}

class UnaryPiecewiseOp {
public:
    UnaryPiecewiseOp() = default;
    UnaryPiecewiseOp(std::string name, std::vector<Landmark> landmarks, std::vector<Cell> cells)
        : name_(std::move(name)), landmarks_(std::move(landmarks)), cells_(std::move(cells)) {
        validate();
    }

    const std::string& name() const { return name_; }
    const std::vector<Landmark>& landmarks() const { return landmarks_; }
    const std::vector<Cell>& cells() const { return cells_; }

    bool is_constant_op() const {
        int lm = -1;
        for (const Cell& c : cells_) {
            if (c.monotone()) return false;
            if (lm == -1) lm = c.landmark;
            else if (lm != c.landmark) return false;
        }
        return true;
    }
    bool has_monotone_cell() const {
        for (const Cell& c : cells_)
            if (c.monotone()) return true;
        return false;
    }

    // f_bar(x) = -f(-x): mirror domain and image.
    UnaryPiecewiseOp dual(std::string dual_name = "") const {
        int m = static_cast<int>(landmarks_.size());
        std::vector<Landmark> lms;
        for (int i = m - 1; i >= 0; --i)
            lms.push_back({"-" + landmarks_[static_cast<std::size_t>(i)].label,
                           -landmarks_[static_cast<std::size_t>(i)].value});
        auto remap = [m](int idx) { return idx < 0 ? -1 : m - 1 - idx; };
        std::vector<Cell> cs;
        for (auto it = cells_.rbegin(); it != cells_.rend(); ++it) {
            Cell c;
            c.is_point = it->is_point;
            c.lo_unbounded = it->hi_unbounded;
            c.hi_unbounded = it->lo_unbounded;
            c.lo = -(it->hi);
            c.hi = -(it->lo);
            c.behavior = it->behavior;  // double reflection keeps direction
            c.landmark = remap(it->landmark);
            c.image = {remap(it->image.hi), remap(it->image.lo)};
            c.map = it->map.mirrored_domain().negated_image();
            cs.push_back(std::move(c));
        }
        return UnaryPiecewiseOp(dual_name.empty() ? "dual-" + name_ : std::move(dual_name),
                                std::move(lms), std::move(cs));
    }

    // Executable form (oracle use). Throws when x sits on an unattainable cut.
    Rational eval(const Rational& x) const {
        for (const Cell& c : cells_) {
            if (c.is_point) {
                if (x == c.lo) return landmarks_[static_cast<std::size_t>(c.landmark)].value;
                continue;
            }
            bool above = c.lo_unbounded || x > c.lo;
            bool below = c.hi_unbounded || x < c.hi;
            if (above && below) {
                if (c.behavior == CellBehavior::Constant)
                    return landmarks_[static_cast<std::size_t>(c.landmark)].value;
                return c.map.eval(x);
            }
        }
        throw std::logic_error(name_ + ": argument on an unattainable cut");
    }

    // Input grid refining all breakpoints and image landmarks: at least
    // `per_region` points inside every cell, point-cell positions themselves,
    // and for monotone cells the preimages of an image grid that provides
    // `per_region` points in every landmark gap. Over this grid, every
    // realizable output pattern of tuples with at most `per_region` blocks
    // per region is attained.
    std::vector<Rational> numeric_grid(int per_region) const {
        std::set<Rational> grid;
        std::vector<Rational> image_grid = landmark_refinement(per_region);
        for (const Cell& c : cells_) {
            if (c.is_point) {
                grid.insert(c.lo);
                continue;
            }
            if (c.behavior == CellBehavior::Constant) {
                for (const Rational& v : interior_points(c, per_region)) grid.insert(v);
                continue;
            }
            for (const Rational& h : image_grid) {
                if (!image_contains(c.image, h)) continue;
                Rational x = c.map.invert(h);
                bool above = c.lo_unbounded || x > c.lo;
                bool below = c.hi_unbounded || x < c.hi;
                if (above && below) grid.insert(x);
            }
        }
        return {grid.begin(), grid.end()};
    }

private:
    bool image_contains(const ImageInterval& iv, const Rational& h) const {
        if (iv.lo >= 0 && !(h > landmarks_[static_cast<std::size_t>(iv.lo)].value)) return false;
        if (iv.hi >= 0 && !(h < landmarks_[static_cast<std::size_t>(iv.hi)].value)) return false;
        return true;
    }

    std::vector<Rational> interior_points(const Cell& c, int k) const {
        std::vector<Rational> out;
        if (!c.lo_unbounded && !c.hi_unbounded) {
            for (int i = 1; i <= k; ++i)
                out.push_back(c.lo + (c.hi - c.lo) * Rational(i, k + 1));
        } else if (c.lo_unbounded && !c.hi_unbounded) {
            for (int i = 1; i <= k; ++i) out.push_back(c.hi - Rational(i));
        } else if (!c.lo_unbounded && c.hi_unbounded) {
            for (int i = 1; i <= k; ++i) out.push_back(c.lo + Rational(i));
        } else {
            for (int i = 0; i < k; ++i) out.push_back(Rational(i) - Rational(k - 1, 2));
        }
        return out;
    }

    std::vector<Rational> landmark_refinement(int k) const {
        std::vector<Rational> out;
        if (landmarks_.empty()) {
            for (int i = 0; i < std::max(k, 1); ++i) out.push_back(Rational(2 * i + 1, 2));
            return out;
        }
        for (int i = 1; i <= k; ++i) out.push_back(landmarks_.front().value - Rational(i));
        for (std::size_t l = 0; l < landmarks_.size(); ++l) {
            out.push_back(landmarks_[l].value);
            if (l + 1 < landmarks_.size()) {
                Rational a = landmarks_[l].value, b = landmarks_[l + 1].value;
                for (int i = 1; i <= k; ++i) out.push_back(a + (b - a) * Rational(i, k + 1));
            }
        }
        for (int i = 1; i <= k; ++i) out.push_back(landmarks_.back().value + Rational(i));
        return out;
    }

    void validate() const {
        if (cells_.empty()) throw std::invalid_argument(name_ + ": no cells");
        for (std::size_t i = 0; i + 1 < landmarks_.size(); ++i)
            if (!(landmarks_[i].value < landmarks_[i + 1].value))
                throw std::invalid_argument(name_ + ": landmark stand-in values out of order");
        if (!cells_.front().lo_unbounded || !cells_.back().hi_unbounded)
            throw std::invalid_argument(name_ + ": cells must cover the whole line");
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Cell& c = cells_[i];
            if (c.is_point && c.behavior != CellBehavior::Constant)
                throw std::invalid_argument(name_ + ": point cells are constant");
            if (!c.monotone()) {
                if (c.landmark < 0 || c.landmark >= static_cast<int>(landmarks_.size()))
                    throw std::invalid_argument(name_ + ": bad landmark reference");
            } else {
                const ImageInterval& iv = c.image;
                if (iv.lo >= 0 && iv.hi >= 0 && iv.lo >= iv.hi)
                    throw std::invalid_argument(name_ + ": empty image interval");
            }
            if (i + 1 < cells_.size()) {
                const Cell& n = cells_[i + 1];
                if (c.hi_unbounded || n.lo_unbounded)
                    throw std::invalid_argument(name_ + ": interior cell with unbounded end");
                if (!(c.hi == n.lo))
                    throw std::invalid_argument(name_ + ": cells must be contiguous");
            }
        }
    }

    std::string name_;
    std::vector<Landmark> landmarks_;
    std::vector<Cell> cells_;
};

// ── Builtin catalog ─────────────────────────────────────────────────────────

namespace ops {

inline Cell open_cell(std::optional<Rational> lo, std::optional<Rational> hi,
                      CellBehavior beh, ImageInterval img, NumericMap map) {
    Cell c;
    c.is_point = false;
    c.lo_unbounded = !lo.has_value();
    c.hi_unbounded = !hi.has_value();
    if (lo) c.lo = *lo;
    if (hi) c.hi = *hi;
    c.behavior = beh;
    c.image = img;
    c.map = map;
    return c;
}
inline Cell const_cell(std::optional<Rational> lo, std::optional<Rational> hi, int landmark) {
    Cell c;
    c.is_point = false;
    c.lo_unbounded = !lo.has_value();
    c.hi_unbounded = !hi.has_value();
    if (lo) c.lo = *lo;
    if (hi) c.hi = *hi;
    c.behavior = CellBehavior::Constant;
    c.landmark = landmark;
    return c;
}
inline Cell point_cell(Rational at, int landmark) {
    Cell c;
    c.is_point = true;
    c.lo = c.hi = at;
    c.behavior = CellBehavior::Constant;
    c.landmark = landmark;
    return c;
}

// x -> -x
inline UnaryPiecewiseOp minus_op() {
    return UnaryPiecewiseOp(
        "minus", {},
        {open_cell(std::nullopt, std::nullopt, CellBehavior::Decreasing, {-1, -1},
                   {NumericMap::Form::Affine, Rational(-1), Rational(0), Rational(0)})});
}

// Rotation around an unattainable (irrational) cut: values below the cut map
// order-preservingly above it and vice versa. The rational stand-in for the
// cut only anchors the oracle; no rational tuple entry may sit on it.
inline UnaryPiecewiseOp cyc_op() {
    Rational c(355, 113);
    NumericMap rot{NumericMap::Form::Recip, Rational(1), c, c};  // c + 1/(c-x)
    return UnaryPiecewiseOp(
        "cyc", {{"cut", c}},
        {open_cell(std::nullopt, c, CellBehavior::Increasing, {0, -1}, rot),
         open_cell(c, std::nullopt, CellBehavior::Increasing, {-1, 0}, rot)});
}

// Identity below 0, collapses [0,1] to 0, shifts (1,inf) down by 1.
inline UnaryPiecewiseOp wave_op() {
    return UnaryPiecewiseOp(
        "wave", {{"0", Rational(0)}},
        {open_cell(std::nullopt, Rational(0), CellBehavior::Increasing, {-1, 0},
                   {NumericMap::Form::Affine, Rational(1), Rational(0), Rational(0)}),
         point_cell(Rational(0), 0), const_cell(Rational(0), Rational(1), 0),
         point_cell(Rational(1), 0),
         open_cell(Rational(1), std::nullopt, CellBehavior::Increasing, {0, -1},
                   {NumericMap::Form::Affine, Rational(1), Rational(-1), Rational(0)})});
}

// -1 everywhere except peak(0) = 1.
inline UnaryPiecewiseOp peak_op() {
    return UnaryPiecewiseOp("peak", {{"-1", Rational(-1)}, {"1", Rational(1)}},
                            {const_cell(std::nullopt, Rational(0), 0), point_cell(Rational(0), 1),
                             const_cell(Rational(0), std::nullopt, 0)});
}

// Staircase: 0 below 0, then j on [j-1, j) up to the final step i on [i-1, inf).
inline UnaryPiecewiseOp su_op(int i) {
    if (i < 1) throw std::invalid_argument("su: index must be positive");
    std::vector<Landmark> lms;
    for (int j = 0; j <= i; ++j) lms.push_back({std::to_string(j), Rational(j)});
    std::vector<Cell> cells;
    cells.push_back(const_cell(std::nullopt, Rational(0), 0));
    for (int j = 1; j <= i; ++j) {
        cells.push_back(point_cell(Rational(j - 1), j));
        if (j < i)
            cells.push_back(const_cell(Rational(j - 1), Rational(j), j));
        else
            cells.push_back(const_cell(Rational(j - 1), std::nullopt, j));
    }
    return UnaryPiecewiseOp("su" + std::to_string(i), std::move(lms), std::move(cells));
}

// Identity below 0, 0 from there on.
inline UnaryPiecewiseOp ic_op() {
    return UnaryPiecewiseOp(
        "ic", {{"0", Rational(0)}},
        {open_cell(std::nullopt, Rational(0), CellBehavior::Increasing, {-1, 0},
                   {NumericMap::Form::Affine, Rational(1), Rational(0), Rational(0)}),
         point_cell(Rational(0), 0), const_cell(Rational(0), std::nullopt, 0)});
}

// 0 below 0, identity from there on. (Dual of ic.)
inline UnaryPiecewiseOp ci_op() {
    return UnaryPiecewiseOp(
        "ci", {{"0", Rational(0)}},
        {const_cell(std::nullopt, Rational(0), 0), point_cell(Rational(0), 0),
         open_cell(Rational(0), std::nullopt, CellBehavior::Increasing, {0, -1},
                   {NumericMap::Form::Affine, Rational(1), Rational(0), Rational(0)})});
}

inline UnaryPiecewiseOp const_op() {
    return UnaryPiecewiseOp("const", {{"0", Rational(0)}},
                            {const_cell(std::nullopt, std::nullopt, 0)});
}

}  // namespace ops

// ── Op spec files (JSON) ────────────────────────────────────────────────────
//
// {"name": "...",
//  "cells": [{"from": "-inf"|number|"p/q", "to": ..., "behavior":
//             "increasing"|"decreasing"|"constant", "image": [lo,hi]|value} |
//            {"at": number, "value": number}],
//  "unattainable": [cut positions without a point cell]}

namespace detail {

inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    throw std::invalid_argument("expected integer or \"p/q\" rational");
}

inline std::optional<Rational> bound_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf" || s == "inf" || s == "+inf") return std::nullopt;
    }
    return rational_from_json(j);
}

}  // namespace detail

inline UnaryPiecewiseOp op_from_json(const nlohmann::json& j) {
    std::string name = j.value("name", "user-op");
    std::set<Rational> unattainable;
    if (j.contains("unattainable"))
        for (const auto& u : j.at("unattainable")) unattainable.insert(detail::rational_from_json(u));

    // Collect image landmark values first.
    std::set<Rational> lm_values;
    for (const auto& cj : j.at("cells")) {
        if (cj.contains("at")) {
            lm_values.insert(detail::rational_from_json(cj.at("value")));
            continue;
        }
        std::string beh = cj.at("behavior").get<std::string>();
        if (beh == "constant") {
            lm_values.insert(detail::rational_from_json(cj.at("value")));
        } else {
            const auto& img = cj.at("image");
            if (auto b = detail::bound_from_json(img.at(0))) lm_values.insert(*b);
            if (auto b = detail::bound_from_json(img.at(1))) lm_values.insert(*b);
        }
    }
    std::vector<Landmark> lms;
    for (const Rational& v : lm_values) lms.push_back({v.str(), v});
    auto lm_index = [&](const Rational& v) {
        for (std::size_t i = 0; i < lms.size(); ++i)
            if (lms[i].value == v) return static_cast<int>(i);
        return -1;
    };

    std::vector<Cell> cells;
    for (const auto& cj : j.at("cells")) {
        if (cj.contains("at")) {
            cells.push_back(ops::point_cell(detail::rational_from_json(cj.at("at")),
                                            lm_index(detail::rational_from_json(cj.at("value")))));
            continue;
        }
        std::optional<Rational> lo = detail::bound_from_json(cj.at("from"));
        std::optional<Rational> hi = detail::bound_from_json(cj.at("to"));
        std::string beh = cj.at("behavior").get<std::string>();
        if (beh == "constant") {
            cells.push_back(ops::const_cell(lo, hi, lm_index(detail::rational_from_json(cj.at("value")))));
        } else if (beh == "increasing" || beh == "decreasing") {
            const auto& img = cj.at("image");
            std::optional<Rational> ilo = detail::bound_from_json(img.at(0));
            std::optional<Rational> ihi = detail::bound_from_json(img.at(1));
            bool inc = beh == "increasing";
            ImageInterval iv{ilo ? lm_index(*ilo) : -1, ihi ? lm_index(*ihi) : -1};
            cells.push_back(ops::open_cell(lo, hi, inc ? CellBehavior::Increasing : CellBehavior::Decreasing,
                                           iv, make_numeric_map(lo, hi, ilo, ihi, inc)));
        } else {
            throw std::invalid_argument("op spec: unknown behavior '" + beh + "'");
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.lo_unbounded != b.lo_unbounded) return a.lo_unbounded;
        if (!(a.lo == b.lo)) return a.lo < b.lo;
        return a.is_point && !b.is_point;  // point before the open cell it anchors
    });

    // Shared endpoints between adjacent open cells need a point cell or an
    // explicit unattainable declaration.
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const Cell& a = cells[i];
        const Cell& b = cells[i + 1];
        if (!a.is_point && !b.is_point && !a.hi_unbounded && !b.lo_unbounded && a.hi == b.lo &&
            !unattainable.count(a.hi))
            throw std::invalid_argument(
                name + ": breakpoint " + a.hi.str() +
                " needs a point cell ({\"at\": ...}) or an \"unattainable\" entry");
    }
    return UnaryPiecewiseOp(std::move(name), std::move(lms), std::move(cells));
}

}  // namespace tqcsp

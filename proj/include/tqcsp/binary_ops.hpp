#pragma once

#include <stdexcept>
#include <string>

namespace tqcsp {

// ── Binary comparison-rule operations ───────────────────────────────────────
//
// pp, dpp, lele and dlele are fixed only up to their clone, by a rule that
// decides how f(a1,b1) compares with f(a2,b2) from the placement of the first
// arguments against 0 and the orders of the a's and the b's. The engine works
// with the rule directly; concrete representatives exist only in test oracles.
//
// pp:   f(a1,b1) <= f(a2,b2)  iff  (a1 <= 0 and a1 <= a2)
//                               or (a1 > 0 and a2 > 0 and b1 <= b2)
// lele: f(a1,b1) <  f(a2,b2)  iff  (a1 <= 0 and a1 < a2)
//                               or (a1 <= 0 and a1 = a2 and b1 < b2)
//                               or (a1 > 0 and a2 > 0 and b1 < b2)
//                               or (a1 > 0 and b1 = b2 and a1 < a2)
// dpp(a,b) = -pp(-a,-b), dlele(a,b) = -lele(-a,-b).

enum class BinaryOpKind { Pp, Dpp, Lele, Dlele };

struct BinaryComparisonOp {
    std::string name;
    BinaryOpKind kind;

    BinaryComparisonOp dual() const {
        switch (kind) {
            case BinaryOpKind::Pp: return {"dpp", BinaryOpKind::Dpp};
            case BinaryOpKind::Dpp: return {"pp", BinaryOpKind::Pp};
            case BinaryOpKind::Lele: return {"dlele", BinaryOpKind::Dlele};
            case BinaryOpKind::Dlele: return {"lele", BinaryOpKind::Lele};
        }
        throw std::logic_error("bad binary op kind");
    }

    // All arguments in {-1,0,1}: s1, s2 are the signs of a1, a2 against the
    // first-argument breakpoint 0; a_cmp compares a1 with a2; b_cmp compares
    // b1 with b2. Returns the comparison of f(a1,b1) with f(a2,b2).
    int compare(int s1, int s2, int a_cmp, int b_cmp) const {
        switch (kind) {
            case BinaryOpKind::Pp: {
                bool le12 = pp_le(s1, s2, a_cmp, b_cmp);
                bool le21 = pp_le(s2, s1, -a_cmp, -b_cmp);
                if (le12 && le21) return 0;
                if (le12) return -1;
                if (le21) return 1;
                throw std::logic_error("pp rule not total");
            }
            case BinaryOpKind::Dpp:
                return -BinaryComparisonOp{"pp", BinaryOpKind::Pp}.compare(-s1, -s2, -a_cmp, -b_cmp);
            case BinaryOpKind::Lele: {
                bool lt12 = lele_lt(s1, s2, a_cmp, b_cmp);
                bool lt21 = lele_lt(s2, s1, -a_cmp, -b_cmp);
                if (lt12 && lt21) throw std::logic_error("lele rule not antisymmetric");
                if (lt12) return -1;
                if (lt21) return 1;
                return 0;
            }
            case BinaryOpKind::Dlele:
                return -BinaryComparisonOp{"lele", BinaryOpKind::Lele}.compare(-s1, -s2, -a_cmp, -b_cmp);
        }
        throw std::logic_error("bad binary op kind");
    }

private:
    static bool pp_le(int s1, int s2, int a_cmp, int b_cmp) {
        if (s1 <= 0 && a_cmp <= 0) return true;
        if (s1 > 0 && s2 > 0 && b_cmp <= 0) return true;
        return false;
    }
    static bool lele_lt(int s1, int s2, int a_cmp, int b_cmp) {
        if (s1 <= 0 && a_cmp < 0) return true;
        if (s1 <= 0 && a_cmp == 0 && b_cmp < 0) return true;
        if (s1 > 0 && s2 > 0 && b_cmp < 0) return true;
        if (s1 > 0 && b_cmp == 0 && a_cmp < 0) return true;
        return false;
    }
};

inline BinaryComparisonOp pp_op() { return {"pp", BinaryOpKind::Pp}; }
inline BinaryComparisonOp dpp_op() { return {"dpp", BinaryOpKind::Dpp}; }
inline BinaryComparisonOp lele_op() { return {"lele", BinaryOpKind::Lele}; }
inline BinaryComparisonOp dlele_op() { return {"dlele", BinaryOpKind::Dlele}; }

// min and max compare across both arguments, so checking them needs the join
// of the two argument orbits. Optional catalog extensions; not used by the
// classifier.
struct JoinRuleOp {
    std::string name;
    bool is_min;
};

inline JoinRuleOp min_op() { return {"min", true}; }
inline JoinRuleOp max_op() { return {"max", false}; }

}  // namespace tqcsp

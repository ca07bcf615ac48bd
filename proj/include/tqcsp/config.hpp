#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tqcsp {

// Bounds for the bounded searches. Exhaustion within these bounds is a proof
// of absence for pp_search; for goh_search it is not (the grammar has no
// known decision procedure), and consumers must carry that flag forward.
struct SearchBounds {
    int max_existentials = 2;  // E
    int max_atoms = 4;         // A
    int max_guard_depth = 2;   // D
    int max_clauses = 6;       // C
};

// Parses "E=2,A=4,D=2,C=6" (any subset, any order).
inline SearchBounds parse_bounds(const std::string& text, SearchBounds base = {}) {
    SearchBounds b = base;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eq = text.find('=', pos);
        if (eq == std::string::npos) throw std::invalid_argument("bad bounds string: " + text);
        std::string key = text.substr(pos, eq - pos);
        std::size_t comma = text.find(',', eq);
        std::string val = text.substr(eq + 1, comma == std::string::npos ? std::string::npos
                                                                         : comma - eq - 1);
        int v = std::stoi(val);
        if (key == "E") b.max_existentials = v;
        else if (key == "A") b.max_atoms = v;
        else if (key == "D") b.max_guard_depth = v;
        else if (key == "C") b.max_clauses = v;
        else throw std::invalid_argument("unknown bound key: " + key);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return b;
}

struct RunConfig {
    SearchBounds bounds;
    int arity_ceiling = 7;
    int parallelism = 1;
    std::uint64_t seed = 20240601;
    std::uint64_t sample_count = 4000;  // sampled generation checks at arity 4
};

}  // namespace tqcsp

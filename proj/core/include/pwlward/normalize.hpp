#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pwlward/program.hpp"

namespace pwlward {

struct NormalizationTrace {
    struct Introduced {
        SymbolId fresh;
        std::string origin;
    };
    std::vector<Introduced> introduced_predicates;
    // new rule index -> index of the originating rule (same program for no-ops)
    std::vector<std::size_t> rule_map;
};

// Splits multi-atom heads through a fresh collector predicate over
// frontier ∪ existentials; certain answers over the original schema are
// preserved.
std::pair<Program, NormalizationTrace> to_single_head(const Program& p);

// Pads shallow body atoms with chains of fresh copy predicates until, for every
// rule with head level k, each body predicate that is not mutually recursive
// with the head has level k or k-1. Requires a single-head PWL program.
std::pair<Program, NormalizationTrace> to_levelwise_nf(const Program& p);

// Post-condition of to_levelwise_nf, checked against freshly recomputed levels.
bool satisfies_levelwise_nf(const Program& p);

}  // namespace pwlward

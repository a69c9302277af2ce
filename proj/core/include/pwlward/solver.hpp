#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "pwlward/analysis.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/resolution.hpp"

namespace pwlward {

struct SearchStats {
    std::size_t expanded = 0;
    std::size_t memo_hits = 0;
    std::size_t max_frontier = 0;  // deepest simultaneous search path
    std::size_t max_width = 0;     // widest goal ever expanded
    std::size_t bound = 0;
};

// Thrown when a program falls outside the fragment a solver requires.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Memoized reachability over canonical goal states (linear proof trees only);
// requires a warded and piece-wise linear program. `tuple` instantiates the
// query outputs. A successful run's step chain can be captured via `trace`.
// Set auto_normalize = false to skip the level-wise normalization pass.
bool decide_pwl_warded(const Database& D, const Program& sigma, const CQ& q,
                       const std::vector<Term>& tuple, SearchStats* stats = nullptr,
                       std::vector<std::string>* trace = nullptr,
                       bool auto_normalize = true);

// Memoized AND-OR search with path-based cycle cut; requires a warded program.
bool decide_warded(const Database& D, const Program& sigma, const CQ& q,
                   const std::vector<Term>& tuple, SearchStats* stats = nullptr);

enum class Engine { ProofTree, AndOr, Chase };

// Enumerates adom(D)-tuples for the query outputs and decides each one.
std::set<std::vector<Term>> all_answers(const Database& D, const Program& sigma, const CQ& q,
                                        Engine engine);

}  // namespace pwlward

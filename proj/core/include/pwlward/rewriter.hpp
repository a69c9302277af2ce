#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/resolution.hpp"

namespace pwlward {

// Interns canonical goal states (with symbolic outputs) as fresh predicates.
// Predicate arity equals the number of symbolic outputs of the state.
class CanonicalPredicateTable {
public:
    // Returns the predicate for the state, creating it on first sight.
    // `fresh` reports whether the state was new.
    SymbolId intern(const GoalQuery& canonical_state, bool& fresh);

    std::size_t size() const { return by_key_.size(); }

private:
    std::map<std::string, SymbolId> by_key_;
    std::map<std::string, int> name_clashes_;
};

struct RewriteResult {
    Program datalog;   // full single-head rules over state predicates
    CQ query;          // atomic query over the goal predicate
    std::size_t states = 0;
    std::size_t bound = 0;
};

// Compiles a warded piece-wise linear program plus CQ into an equivalent
// piece-wise linear Datalog program: closure over canonical bounded-width goal
// states, one rule per parent/children relationship, base rules for states
// mentioning only extensional predicates.
RewriteResult rewrite_to_pwl_datalog(const Program& sigma, const CQ& q);

struct VerifyReport {
    std::size_t databases = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Checks, per database, that evaluating the rewriting agrees with the direct
// proof-tree solver.
VerifyReport verify_rewriting(const Program& sigma, const CQ& q,
                              const std::vector<Database>& corpus);

}  // namespace pwlward

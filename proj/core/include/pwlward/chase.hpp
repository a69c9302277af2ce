#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "pwlward/homomorphism.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/substitution.hpp"

#include "json.hpp"

namespace pwlward {

struct ChaseBudget {
    std::size_t max_steps = std::numeric_limits<std::size_t>::max();
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
};

enum class ChasePolicy { Restricted, Oblivious };

struct ChaseStep {
    std::size_t rule_index;
    Substitution trigger;  // body homomorphism plus fresh nulls for existentials
    std::vector<Atom> new_atoms;
};

struct ChaseResult {
    Instance instance;
    std::vector<ChaseStep> steps;
    bool terminated = false;
    std::size_t budget_spent = 0;
};

// One chase step: I ∪ h'(head) where h' extends h|frontier by fresh nulls
// drawn from null_counter. Throws if h(body) ⊄ I.
Instance chase_step(const Instance& I, const TGD& rule, const Substitution& h,
                    std::uint32_t& null_counter);

// Fair (round-based FIFO) chase. Under the restricted policy a trigger fires
// only if its head is not already satisfied by an extension homomorphism.
ChaseResult bounded_chase(const Database& D, const Program& sigma, ChaseBudget budget = {},
                          ChasePolicy policy = ChasePolicy::Restricted);

// Answers are all-constant tuples of q over the bounded chase; `complete`
// mirrors ChaseResult::terminated. Reported tuples are sound even when the
// chase was truncated.
struct CertainAnswers {
    std::set<std::vector<Term>> answers;
    bool complete = false;
};

CertainAnswers certain_answers_via_chase(const Database& D, const Program& sigma, const CQ& q,
                                         ChaseBudget budget = {});

// Least fixpoint of the immediate-consequence operator; rejects programs with
// existential variables.
Instance seminaive_eval(const Program& sigma, const Database& D);

struct ChaseGraph {
    struct Edge {
        Atom from, to;
        std::size_t rule_index;
        Substitution trigger;
    };
    std::vector<Atom> nodes;
    std::vector<Edge> edges;

    std::string to_dot() const;
    nlohmann::ordered_json to_json() const;
};

ChaseGraph export_chase_graph(const ChaseResult& result, const Database& D,
                              const Program& sigma);

}  // namespace pwlward

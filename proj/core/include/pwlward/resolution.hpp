#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pwlward/atom.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/substitution.hpp"

namespace pwlward {

// A Boolean CQ search state. `outputs` lists frozen variables (the rewriter's
// symbolic answer slots); they behave like constants: never renamed, never
// bound by unification. The solvers instantiate outputs up front and run with
// an empty outputs list.
struct GoalQuery {
    std::vector<Atom> atoms;
    std::vector<Term> outputs;

    bool operator==(const GoalQuery&) const = default;
    bool empty() const { return atoms.empty(); }
    std::string key() const;
    std::string to_string() const;
};

struct GoalQueryHash {
    std::size_t operator()(const GoalQuery& q) const {
        return std::hash<std::string>{}(q.key());
    }
};

struct ChunkUnifier {
    std::vector<std::size_t> s1;  // indices of the unified chunk in q.atoms
    Substitution gamma;           // MGU of the chunk with the (single) head atom
};

// MGU of two atom sets under γ(A)=γ(B) as sets; frozen variables are rigid.
// Returns the first unifier found under a deterministic matching order.
std::optional<Substitution> mgu(const std::vector<Atom>& A, const std::vector<Atom>& B,
                                const std::vector<Term>& frozen = {});

// Renames every variable of sigma to u1,u2,... (first-occurrence order), which
// is disjoint from the canonical v*/o* pools of a canonicalized goal.
TGD rename_apart(const TGD& sigma);

// All most-general chunk unifiers of q with single-head sigma (pre-renamed
// apart from q). Both chunk-unifier side conditions are enforced.
std::vector<ChunkUnifier> enumerate_mgcus(const GoalQuery& q, const TGD& sigma);

GoalQuery resolvent(const GoalQuery& q, const TGD& sigma, const ChunkUnifier& u);

// Substitutes one variable by a constant (or a frozen output) and recanonicalizes.
GoalQuery specialize(const GoalQuery& q, const Term& var, const Term& value);

// Finest decomposition: connected components of atoms linked by a shared
// non-frozen variable. Constants and outputs may be shared across parts.
std::vector<GoalQuery> decompose(const GoalQuery& q);

// Removes ground atoms present in D; an empty result signals acceptance.
GoalQuery strip_db_atoms(const GoalQuery& q, const Database& D);

// Deterministic representative of the equivalence class of q under variable
// renaming and atom reordering: the lexicographically least serialization over
// all orderings, with non-frozen variables named v1,v2,... by first occurrence.
GoalQuery canonicalize(const GoalQuery& q);

}  // namespace pwlward

template <>
struct std::hash<pwlward::GoalQuery> : pwlward::GoalQueryHash {};

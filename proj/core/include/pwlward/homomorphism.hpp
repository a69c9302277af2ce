#pragma once

#include <functional>
#include <set>
#include <vector>

#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/substitution.hpp"

namespace pwlward {

// Enumerates every substitution h extending `fixed` with h(pattern) ⊆ target.
// h is the identity on constants; enumeration is exhaustive, duplicate-free and
// deterministic. The callback may return false to stop early.
void for_each_homomorphism(const std::vector<Atom>& pattern, const Instance& target,
                           const Substitution& fixed,
                           const std::function<bool(const Substitution&)>& yield);

// Same, but atom `i` of the pattern must match a fact of `restricted` whenever
// restricted[i] is non-null (semi-naive delta joins).
void for_each_homomorphism_restricted(
    const std::vector<Atom>& pattern, const Instance& target,
    const std::vector<const std::unordered_set<Atom>*>& restricted, const Substitution& fixed,
    const std::function<bool(const Substitution&)>& yield);

std::vector<Substitution> find_homomorphisms(const std::vector<Atom>& pattern,
                                             const Instance& target,
                                             const Substitution& fixed = {});

bool homomorphism_exists(const std::vector<Atom>& pattern, const Instance& target,
                         const Substitution& fixed = {});

// { h(outputs) : h homomorphism from q.body into I }. Tuples containing nulls
// are dropped unless keep_null_tuples is set.
std::set<std::vector<Term>> evaluate_cq(const CQ& q, const Instance& I,
                                        bool keep_null_tuples = false);

}  // namespace pwlward

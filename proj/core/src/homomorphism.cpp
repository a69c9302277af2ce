#include "pwlward/homomorphism.hpp"

#include <algorithm>
#include <numeric>

namespace pwlward {

namespace {

// Extends s so that s(pattern) = fact; s may be left half-extended on failure,
// callers work on a private copy.
bool match_atom(const Atom& pattern, const Atom& fact, Substitution& s) {
    if (pattern.predicate != fact.predicate || pattern.arity() != fact.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        Term t = s.apply(pattern.args[i]);
        if (t.is_variable())
            s.bind(t, fact.args[i]);
        else if (t != fact.args[i])
            return false;
    }
    return true;
}

struct Matcher {
    const std::vector<Atom>& pattern;
    const Instance& target;
    const std::vector<const std::unordered_set<Atom>*>* restricted;
    const std::function<bool(const Substitution&)>& yield;
    std::vector<std::size_t> order;

    bool run(Substitution& s, std::size_t depth) {
        if (depth == order.size()) return yield(s);
        std::size_t idx = order[depth];
        const std::vector<Atom>& cands = target.with_predicate(pattern[idx].predicate);
        for (const Atom& fact : cands) {
            if (restricted && (*restricted)[idx] && !(*restricted)[idx]->count(fact)) continue;
            Substitution next = s;
            if (!match_atom(pattern[idx], fact, next)) continue;
            if (!run(next, depth + 1)) return false;
        }
        return true;
    }
};

void enumerate(const std::vector<Atom>& pattern, const Instance& target,
               const std::vector<const std::unordered_set<Atom>*>* restricted,
               const Substitution& fixed,
               const std::function<bool(const Substitution&)>& yield) {
    // Fewest-candidates-first atom order; ties by source position.
    std::vector<std::size_t> order(pattern.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return target.with_predicate(pattern[a].predicate).size() <
               target.with_predicate(pattern[b].predicate).size();
    });
    Substitution s = fixed;
    Matcher m{pattern, target, restricted, yield, std::move(order)};
    m.run(s, 0);
}

}  // namespace

void for_each_homomorphism(const std::vector<Atom>& pattern, const Instance& target,
                           const Substitution& fixed,
                           const std::function<bool(const Substitution&)>& yield) {
    enumerate(pattern, target, nullptr, fixed, yield);
}

void for_each_homomorphism_restricted(
    const std::vector<Atom>& pattern, const Instance& target,
    const std::vector<const std::unordered_set<Atom>*>& restricted, const Substitution& fixed,
    const std::function<bool(const Substitution&)>& yield) {
    enumerate(pattern, target, &restricted, fixed, yield);
}

std::vector<Substitution> find_homomorphisms(const std::vector<Atom>& pattern,
                                             const Instance& target,
                                             const Substitution& fixed) {
    std::vector<Substitution> out;
    for_each_homomorphism(pattern, target, fixed, [&](const Substitution& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

bool homomorphism_exists(const std::vector<Atom>& pattern, const Instance& target,
                         const Substitution& fixed) {
    bool found = false;
    for_each_homomorphism(pattern, target, fixed, [&](const Substitution&) {
        found = true;
        return false;
    });
    return found;
}

std::set<std::vector<Term>> evaluate_cq(const CQ& q, const Instance& I, bool keep_null_tuples) {
    std::set<std::vector<Term>> out;
    for_each_homomorphism(q.body, I, {}, [&](const Substitution& h) {
        std::vector<Term> tuple = h.apply(q.outputs);
        bool has_null = std::any_of(tuple.begin(), tuple.end(),
                                    [](const Term& t) { return t.is_null(); });
        if (!has_null || keep_null_tuples) out.insert(std::move(tuple));
        return true;
    });
    return out;
}

}  // namespace pwlward

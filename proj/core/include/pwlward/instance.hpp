#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pwlward/atom.hpp"

namespace pwlward {

// A finite set of facts over constants and nulls, indexed by predicate.
class Instance {
public:
    Instance() = default;
    explicit Instance(std::vector<Atom> facts) {
        for (Atom& a : facts) insert(std::move(a));
    }

    bool insert(Atom a);
    bool contains(const Atom& a) const { return facts_.count(a) != 0; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    const std::unordered_set<Atom>& facts() const { return facts_; }
    const std::vector<Atom>& with_predicate(SymbolId p) const;

    // Active domain: constants sorted lexicographically, then nulls by id.
    std::vector<Term> adom() const;

    // Deterministic listing of the facts (sorted by predicate name, then args).
    std::vector<Atom> sorted_facts() const;

private:
    std::unordered_set<Atom> facts_;
    std::unordered_map<SymbolId, std::vector<Atom>> by_pred_;
};

// An instance whose facts are ground and null-free.
class Database : public Instance {
public:
    Database() = default;
    explicit Database(std::vector<Atom> facts) {
        for (Atom& a : facts) insert(std::move(a));
    }

    bool insert(Atom a);
};

}  // namespace pwlward

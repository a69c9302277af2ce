#pragma once

#include <unordered_map>
#include <vector>

#include "pwlward/atom.hpp"
#include "pwlward/term.hpp"

namespace pwlward {

// A finite map on variables and nulls; identity on constants by construction.
class Substitution {
public:
    Substitution() = default;

    // Binding a constant key is a programming error and is rejected.
    void bind(Term from, Term to);

    bool maps(Term t) const { return map_.count(t) != 0; }
    Term apply(Term t) const;
    Atom apply(const Atom& a) const;
    std::vector<Atom> apply(const std::vector<Atom>& atoms) const;
    std::vector<Term> apply(const std::vector<Term>& terms) const;

    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }
    const std::unordered_map<Term, Term>& mapping() const { return map_; }

    // (g.compose_after(h))(t) = g(h(t)); keys of h are kept, g's extra keys added.
    Substitution compose_after(const Substitution& inner) const;

    bool operator==(const Substitution&) const = default;

private:
    std::unordered_map<Term, Term> map_;
};

}  // namespace pwlward

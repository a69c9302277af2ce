#include "pwlward/substitution.hpp"

#include <stdexcept>

namespace pwlward {

void Substitution::bind(Term from, Term to) {
    if (from.is_constant())
        throw std::logic_error("substitution must be the identity on constants");
    map_[from] = to;
}

Term Substitution::apply(Term t) const {
    if (t.is_constant()) return t;
    auto it = map_.find(t);
    return it == map_.end() ? t : it->second;
}

Atom Substitution::apply(const Atom& a) const {
    Atom out = a;
    for (Term& t : out.args) t = apply(t);
    return out;
}

std::vector<Atom> Substitution::apply(const std::vector<Atom>& atoms) const {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) out.push_back(apply(a));
    return out;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& terms) const {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (Term t : terms) out.push_back(apply(t));
    return out;
}

Substitution Substitution::compose_after(const Substitution& inner) const {
    Substitution out;
    for (const auto& [k, v] : inner.map_) out.map_[k] = apply(v);
    for (const auto& [k, v] : map_)
        if (!out.map_.count(k)) out.map_[k] = v;
    return out;
}

}  // namespace pwlward

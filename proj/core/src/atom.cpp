#include "pwlward/atom.hpp"

#include <unordered_set>

namespace pwlward {

std::string Atom::to_string() const {
    std::string s = predicate_name();
    if (args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ',';
        s += args[i].to_string();
    }
    s += ')';
    return s;
}

std::vector<Term> variables_of(const std::vector<Atom>& atoms) {
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    for (const Atom& a : atoms)
        for (const Term& t : a.args)
            if (t.is_variable() && seen.insert(t).second) out.push_back(t);
    return out;
}

}  // namespace pwlward

#include "pwlward/instance.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pwlward {

bool Instance::insert(Atom a) {
    auto [it, fresh] = facts_.insert(std::move(a));
    if (fresh) by_pred_[it->predicate].push_back(*it);
    return fresh;
}

const std::vector<Atom>& Instance::with_predicate(SymbolId p) const {
    static const std::vector<Atom> kEmpty;
    auto it = by_pred_.find(p);
    return it == by_pred_.end() ? kEmpty : it->second;
}

std::vector<Term> Instance::adom() const {
    std::set<Term> consts_by_name_aux;
    std::vector<Term> constants;
    std::vector<Term> nulls;
    std::unordered_set<Term> seen;
    for (const Atom& a : facts_) {
        for (const Term& t : a.args) {
            if (!seen.insert(t).second) continue;
            if (t.is_null())
                nulls.push_back(t);
            else if (t.is_constant())
                constants.push_back(t);
        }
    }
    std::sort(constants.begin(), constants.end(),
              [](const Term& a, const Term& b) { return a.name() < b.name(); });
    std::sort(nulls.begin(), nulls.end(),
              [](const Term& a, const Term& b) { return a.id < b.id; });
    constants.insert(constants.end(), nulls.begin(), nulls.end());
    return constants;
}

std::vector<Atom> Instance::sorted_facts() const {
    std::vector<Atom> out(facts_.begin(), facts_.end());
    std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate) return a.predicate_name() < b.predicate_name();
        return a.to_string() < b.to_string();
    });
    return out;
}

bool Database::insert(Atom a) {
    for (const Term& t : a.args)
        if (!t.is_constant())
            throw std::invalid_argument("database facts must be ground and null-free: " +
                                        a.to_string());
    return Instance::insert(std::move(a));
}

}  // namespace pwlward

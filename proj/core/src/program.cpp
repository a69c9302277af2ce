#include "pwlward/program.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pwlward {

std::vector<Term> TGD::frontier() const {
    std::unordered_set<Term> body_vars;
    for (const Atom& a : body)
        for (const Term& t : a.args)
            if (t.is_variable()) body_vars.insert(t);
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    for (const Atom& a : head)
        for (const Term& t : a.args)
            if (t.is_variable() && body_vars.count(t) && seen.insert(t).second)
                out.push_back(t);
    return out;
}

std::string TGD::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += body[i].to_string();
    }
    s += " -> ";
    if (!existentials.empty()) {
        s += "exists ";
        for (std::size_t i = 0; i < existentials.size(); ++i) {
            if (i) s += ",";
            s += existentials[i].to_string();
        }
        s += ": ";
    }
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) s += ", ";
        s += head[i].to_string();
    }
    return s;
}

std::string CQ::to_string() const {
    std::string s = Symbols::name(head_predicate);
    if (!outputs.empty()) {
        s += '(';
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            if (i) s += ',';
            s += outputs[i].to_string();
        }
        s += ')';
    }
    s += " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += body[i].to_string();
    }
    return s;
}

void Program::add_rule(TGD rule) {
    auto check = [this](const Atom& a) {
        auto [it, fresh] = schema_.emplace(a.predicate, a.arity());
        if (!fresh && it->second != a.arity())
            throw std::invalid_argument("arity mismatch for predicate " + a.predicate_name() +
                                        ": " + std::to_string(it->second) + " vs " +
                                        std::to_string(a.arity()));
    };
    for (const Atom& a : rule.body) check(a);
    for (const Atom& a : rule.head) check(a);
    rules_.push_back(std::move(rule));
}

std::optional<std::size_t> Program::arity(SymbolId p) const {
    auto it = schema_.find(p);
    if (it == schema_.end()) return std::nullopt;
    return it->second;
}

std::unordered_set<SymbolId> Program::intensional_predicates() const {
    std::unordered_set<SymbolId> out;
    for (const TGD& r : rules_)
        for (const Atom& a : r.head) out.insert(a.predicate);
    return out;
}

std::size_t Program::max_body_size() const {
    std::size_t m = 0;
    for (const TGD& r : rules_) m = std::max(m, r.body.size());
    return m;
}

std::vector<Term> Program::constants() const {
    std::set<Term> seen;
    for (const TGD& r : rules_) {
        for (const Atom& a : r.body)
            for (const Term& t : a.args)
                if (t.is_constant()) seen.insert(t);
        for (const Atom& a : r.head)
            for (const Term& t : a.args)
                if (t.is_constant()) seen.insert(t);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace pwlward

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pwlward/term.hpp"

namespace pwlward {

struct Atom {
    SymbolId predicate = 0;
    std::vector<Term> args;

    Atom() = default;
    Atom(SymbolId pred, std::vector<Term> a) : predicate(pred), args(std::move(a)) {}
    Atom(std::string_view pred, std::vector<Term> a)
        : predicate(Symbols::intern(pred)), args(std::move(a)) {}

    std::size_t arity() const { return args.size(); }
    const std::string& predicate_name() const { return Symbols::name(predicate); }

    bool is_ground() const {
        return std::none_of(args.begin(), args.end(),
                            [](const Term& t) { return t.is_variable(); });
    }

    std::string to_string() const;

    auto operator<=>(const Atom&) const = default;
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const {
        std::size_t h = std::hash<SymbolId>{}(a.predicate);
        for (const Term& t : a.args) h = h * 1000003u ^ TermHash{}(t);
        return h;
    }
};

// Collects the distinct variables of a range of atoms in first-occurrence order.
std::vector<Term> variables_of(const std::vector<Atom>& atoms);

}  // namespace pwlward

template <>
struct std::hash<pwlward::Atom> : pwlward::AtomHash {};

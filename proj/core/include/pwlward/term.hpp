#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace pwlward {

using SymbolId = std::uint32_t;

// Global interning table for constant/variable/predicate names.
// Ids are stable for the lifetime of the process.
class Symbols {
public:
    static SymbolId intern(std::string_view name);
    static const std::string& name(SymbolId id);
};

enum class TermKind : std::uint8_t { Constant = 0, Variable = 1, Null = 2 };

// A term is a constant, a variable, or a labeled null. Names are interned,
// so equality and hashing are O(1).
struct Term {
    TermKind kind = TermKind::Constant;
    std::uint32_t id = 0;  // symbol id for constants/variables, null id otherwise

    static Term constant(std::string_view name) {
        return Term{TermKind::Constant, Symbols::intern(name)};
    }
    static Term variable(std::string_view name) {
        return Term{TermKind::Variable, Symbols::intern(name)};
    }
    static Term null(std::uint32_t null_id) { return Term{TermKind::Null, null_id}; }

    bool is_constant() const { return kind == TermKind::Constant; }
    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_null() const { return kind == TermKind::Null; }

    // Valid for constants and variables only.
    const std::string& name() const { return Symbols::name(id); }

    std::string to_string() const;

    auto operator<=>(const Term&) const = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const {
        return (static_cast<std::size_t>(t.kind) << 30) ^ std::hash<std::uint32_t>{}(t.id);
    }
};

}  // namespace pwlward

template <>
struct std::hash<pwlward::Term> : pwlward::TermHash {};

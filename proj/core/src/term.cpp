#include "pwlward/term.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace pwlward {

namespace {

struct Table {
    std::shared_mutex mtx;
    std::unordered_map<std::string_view, SymbolId> ids;
    std::deque<std::string> names;  // deque: stable addresses for the string_view keys
};

Table& table() {
    static Table t;
    return t;
}

}  // namespace

SymbolId Symbols::intern(std::string_view name) {
    Table& t = table();
    {
        std::shared_lock lock(t.mtx);
        auto it = t.ids.find(name);
        if (it != t.ids.end()) return it->second;
    }
    std::unique_lock lock(t.mtx);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    t.names.emplace_back(name);
    SymbolId id = static_cast<SymbolId>(t.names.size() - 1);
    t.ids.emplace(t.names.back(), id);
    return id;
}

const std::string& Symbols::name(SymbolId id) {
    Table& t = table();
    std::shared_lock lock(t.mtx);
    return t.names[id];
}

std::string Term::to_string() const {
    switch (kind) {
        case TermKind::Constant:
        case TermKind::Variable:
            return name();
        case TermKind::Null:
            return "⊥" + std::to_string(id);
    }
    return {};
}

}  // namespace pwlward

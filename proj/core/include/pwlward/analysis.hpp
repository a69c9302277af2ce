#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pwlward/program.hpp"

#include "json.hpp"

namespace pwlward {

// 1-based argument position R[i].
struct Position {
    SymbolId predicate = 0;
    std::size_t index = 1;

    std::string to_string() const {
        return Symbols::name(predicate) + "[" + std::to_string(index) + "]";
    }
    auto operator<=>(const Position&) const = default;
};

struct PredicateGraph {
    std::set<SymbolId> nodes;
    std::set<std::pair<SymbolId, SymbolId>> edges;
    std::map<SymbolId, std::size_t> scc_id;
    std::map<std::size_t, std::size_t> scc_size;
    std::set<std::size_t> cyclic_sccs;  // sccs containing at least one cycle

    bool has_edge(SymbolId from, SymbolId to) const { return edges.count({from, to}) != 0; }
};

PredicateGraph predicate_graph(const Program& p);

// True iff some cycle of the graph contains both predicates.
bool mutually_recursive(const PredicateGraph& g, SymbolId p, SymbolId r);

// Least fixpoint of the two generation rules for affected positions.
std::set<Position> affected_positions(const Program& p);

struct VariableClasses {
    std::set<Term> harmless;
    std::set<Term> harmful;   // includes the dangerous ones
    std::set<Term> dangerous;
};

VariableClasses classify_variables(const Program& p, const TGD& rule);
VariableClasses classify_variables(const TGD& rule, const std::set<Position>& affected);

struct RuleReport {
    std::string rule;
    std::set<Term> dangerous, harmful, harmless;
    std::optional<Atom> ward;
    std::optional<std::string> violation;
};

struct ClassificationReport {
    bool warded = false;
    bool pwl = false;
    bool intensionally_linear = false;
    bool full_datalog = false;
    bool single_head_normalized = false;  // true when normalization changed the rule set
    std::set<Position> affected;
    std::map<SymbolId, std::size_t> levels;
    std::vector<RuleReport> per_rule;

    nlohmann::ordered_json to_json() const;
};

// Wardedness check; fills per_rule, affected, and the warded flag. Expects a
// single-head program (classify() normalizes first).
ClassificationReport is_warded(const Program& p);

bool is_pwl(const Program& p);
bool is_intensionally_linear(const Program& p);
bool is_full_datalog(const Program& p);

// The unique solution of level(P) = max{level(R) : (R,P) edge, R not mutually
// recursive with P} + 1, with max over the empty set = 0.
std::map<SymbolId, std::size_t> levels(const Program& p);

std::size_t max_level(const Program& p);

enum class Fragment { WardPwl, Ward };

// Node-width bound for bounded proof-tree search; |q| and |body| count atoms.
std::size_t node_width_bound(const CQ& q, const Program& p, Fragment fragment);

// Full report on the single-head normalization of `p`.
ClassificationReport classify(const Program& p);

}  // namespace pwlward

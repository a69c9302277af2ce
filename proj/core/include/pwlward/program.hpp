#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pwlward/atom.hpp"
#include "pwlward/term.hpp"

namespace pwlward {

// A tuple-generating dependency body -> exists z: head. Universally quantified
// variables are implicit; `existentials` lists the declared head-only variables.
struct TGD {
    std::vector<Atom> body;
    std::vector<Atom> head;
    std::vector<Term> existentials;

    bool is_full() const { return existentials.empty(); }
    bool single_head() const { return head.size() == 1; }

    // Variables occurring in both body and head.
    std::vector<Term> frontier() const;
    std::unordered_set<Term> existential_set() const {
        return {existentials.begin(), existentials.end()};
    }

    std::string to_string() const;

    auto operator<=>(const TGD&) const = default;
};

struct CQ {
    SymbolId head_predicate = 0;
    std::vector<Term> outputs;  // variables or constants
    std::vector<Atom> body;

    bool is_boolean() const { return outputs.empty(); }
    std::string to_string() const;

    auto operator<=>(const CQ&) const = default;
};

class Program {
public:
    Program() = default;
    explicit Program(std::vector<TGD> rules) {
        for (TGD& r : rules) add_rule(std::move(r));
    }

    // Throws on arity conflicts with previously seen occurrences.
    void add_rule(TGD rule);

    const std::vector<TGD>& rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }
    std::size_t size() const { return rules_.size(); }

    // Predicate -> arity, over every predicate occurring in the rules.
    const std::map<SymbolId, std::size_t>& schema() const { return schema_; }
    bool declares(SymbolId p) const { return schema_.count(p) != 0; }
    std::optional<std::size_t> arity(SymbolId p) const;

    // Predicates occurring in at least one rule head.
    std::unordered_set<SymbolId> intensional_predicates() const;

    std::size_t max_body_size() const;
    std::vector<Term> constants() const;

private:
    std::vector<TGD> rules_;
    std::map<SymbolId, std::size_t> schema_;
};

}  // namespace pwlward

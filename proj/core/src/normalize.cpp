#include "pwlward/normalize.hpp"

#include <stdexcept>
#include <unordered_set>

#include "pwlward/analysis.hpp"

namespace pwlward {

namespace {

SymbolId fresh_predicate(const Program& p, const std::string& base) {
    std::string name = base;
    for (std::size_t n = 2; p.declares(Symbols::intern(name)); ++n)
        name = base + "_" + std::to_string(n);
    return Symbols::intern(name);
}

}  // namespace

std::pair<Program, NormalizationTrace> to_single_head(const Program& p) {
    NormalizationTrace trace;
    Program out;
    for (std::size_t idx = 0; idx < p.rules().size(); ++idx) {
        const TGD& rule = p.rules()[idx];
        if (rule.single_head()) {
            out.add_rule(rule);
            trace.rule_map.push_back(idx);
            continue;
        }
        // Collector predicate over frontier ∪ existentials.
        std::vector<Term> args = rule.frontier();
        args.insert(args.end(), rule.existentials.begin(), rule.existentials.end());
        SymbolId collector = fresh_predicate(
            p, rule.head.front().predicate_name() + "__h" + std::to_string(idx + 1));
        trace.introduced_predicates.push_back(
            {collector, "collector for multi-head rule " + std::to_string(idx + 1)});

        TGD generator;
        generator.body = rule.body;
        generator.head = {Atom(collector, args)};
        generator.existentials = rule.existentials;
        out.add_rule(std::move(generator));
        trace.rule_map.push_back(idx);

        for (const Atom& h : rule.head) {
            TGD projector;
            projector.body = {Atom(collector, args)};
            projector.head = {h};
            out.add_rule(std::move(projector));
            trace.rule_map.push_back(idx);
        }
    }
    return {std::move(out), std::move(trace)};
}

bool satisfies_levelwise_nf(const Program& p) {
    auto lvl = levels(p);
    PredicateGraph g = predicate_graph(p);
    for (const TGD& rule : p.rules()) {
        for (const Atom& h : rule.head) {
            std::size_t k = lvl.at(h.predicate);
            for (const Atom& b : rule.body) {
                if (mutually_recursive(g, b.predicate, h.predicate)) continue;
                std::size_t bl = lvl.at(b.predicate);
                if (bl != k && bl + 1 != k) return false;
            }
        }
    }
    return true;
}

std::pair<Program, NormalizationTrace> to_levelwise_nf(const Program& p) {
    for (const TGD& rule : p.rules())
        if (!rule.single_head())
            throw std::invalid_argument("to_levelwise_nf requires a single-head program");
    if (!is_pwl(p)) throw std::invalid_argument("to_levelwise_nf requires a PWL program");

    NormalizationTrace trace;
    Program current = p;
    // Single pass given fixed levels, iterated until the recomputed levels
    // satisfy the constraint (fresh predicates can interact).
    for (std::size_t round = 0; !satisfies_levelwise_nf(current); ++round) {
        if (round > current.schema().size() + 8)
            throw std::logic_error("level-wise normalization did not converge");
        auto lvl = levels(current);
        PredicateGraph g = predicate_graph(current);
        Program next;
        NormalizationTrace next_trace;
        std::vector<TGD> copy_rules;
        for (std::size_t idx = 0; idx < current.rules().size(); ++idx) {
            TGD rule = current.rules()[idx];
            std::size_t k = lvl.at(rule.head.front().predicate);
            for (Atom& b : rule.body) {
                if (mutually_recursive(g, b.predicate, rule.head.front().predicate)) continue;
                std::size_t bl = lvl.at(b.predicate);
                if (bl == k || bl + 1 == k) continue;
                // Chain of k-1-bl fresh copies lifting b to level k-1.
                std::size_t steps = k - 1 - bl;
                Atom prev = b;
                std::vector<Term> vars;
                for (std::size_t i = 0; i < b.args.size(); ++i)
                    vars.push_back(Term::variable("c" + std::to_string(i + 1)));
                for (std::size_t j = 1; j <= steps; ++j) {
                    SymbolId fresh = fresh_predicate(
                        current, b.predicate_name() + "__lvl" + std::to_string(j) + "_" +
                                     std::to_string(idx + 1));
                    next_trace.introduced_predicates.push_back(
                        {fresh, "level padding for rule " + std::to_string(idx + 1)});
                    TGD copy;
                    copy.body = {Atom(prev.predicate, vars)};
                    copy.head = {Atom(fresh, vars)};
                    copy_rules.push_back(copy);
                    prev = Atom(fresh, b.args);
                }
                b = prev;
            }
            next.add_rule(std::move(rule));
            next_trace.rule_map.push_back(idx);
        }
        for (TGD& r : copy_rules) {
            next.add_rule(std::move(r));
            next_trace.rule_map.push_back(static_cast<std::size_t>(-1));
        }
        current = std::move(next);
        trace.introduced_predicates.insert(trace.introduced_predicates.end(),
                                           next_trace.introduced_predicates.begin(),
                                           next_trace.introduced_predicates.end());
        trace.rule_map = std::move(next_trace.rule_map);
    }
    return {std::move(current), std::move(trace)};
}

}  // namespace pwlward

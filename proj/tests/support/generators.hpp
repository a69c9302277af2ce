#pragma once

// Shared random-corpus machinery for the unit and acceptance suites: schema
// and rule generation with rejection sampling into the warded / piece-wise
// linear fragments, random databases and queries, and a few brute-force
// oracles the tests compare against.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwlward/analysis.hpp"
#include "pwlward/chase.hpp"
#include "pwlward/homomorphism.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"
#include "pwlward/resolution.hpp"

namespace testgen {

using namespace pwlward;

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng);
    }
    std::size_t range(std::size_t lo, std::size_t hi) {  // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng);
    }
    bool chance(double p) { return std::bernoulli_distribution(p)(eng); }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }
};

struct PredSpec {
    std::string name;
    std::size_t arity;
    bool intensional;  // may appear in rule heads
};

struct Schema {
    std::vector<PredSpec> preds;

    std::vector<PredSpec> extensional() const {
        std::vector<PredSpec> out;
        for (const auto& p : preds)
            if (!p.intensional) out.push_back(p);
        return out;
    }
    std::vector<PredSpec> intensional() const {
        std::vector<PredSpec> out;
        for (const auto& p : preds)
            if (p.intensional) out.push_back(p);
        return out;
    }
};

inline Schema random_schema(Rng& rng, std::size_t max_arity) {
    Schema s;
    std::size_t n_ext = rng.range(1, 3);
    std::size_t n_int = rng.range(1, 2);
    for (std::size_t i = 0; i < n_ext; ++i)
        s.preds.push_back({"E" + std::to_string(i), rng.range(1, max_arity), false});
    for (std::size_t i = 0; i < n_int; ++i)
        s.preds.push_back({"P" + std::to_string(i), rng.range(1, max_arity), true});
    return s;
}

// One candidate rule: single head, no constants anywhere, head variables drawn
// from the body or declared existential. `max_int_body` caps the number of
// intensional body atoms (1 keeps the program trivially piece-wise linear).
inline TGD random_rule(Rng& rng, const Schema& schema, std::size_t max_body,
                       std::size_t max_int_body) {
    static const std::vector<std::string> kVarPool = {"x1", "x2", "x3", "x4"};

    TGD rule;
    std::vector<PredSpec> ext = schema.extensional();
    std::vector<PredSpec> ints = schema.intensional();
    std::size_t body_size = rng.range(1, max_body);
    std::size_t ints_used = 0;
    for (std::size_t i = 0; i < body_size; ++i) {
        const PredSpec* p = nullptr;
        for (int tries = 0; tries < 8; ++tries) {
            p = &rng.pick(schema.preds);
            if (!p->intensional || ints_used < max_int_body) break;
            p = nullptr;
        }
        if (p == nullptr) p = &rng.pick(ext.empty() ? schema.preds : ext);
        if (p->intensional) ++ints_used;
        std::vector<Term> args;
        for (std::size_t a = 0; a < p->arity; ++a)
            args.push_back(Term::variable(rng.pick(kVarPool)));
        rule.body.emplace_back(p->name, std::move(args));
    }

    std::vector<Term> body_vars = variables_of(rule.body);
    const PredSpec& hp = rng.pick(ints);
    std::vector<Term> head_args;
    std::set<Term> ex_seen;
    std::size_t ex_counter = 0;
    for (std::size_t a = 0; a < hp.arity; ++a) {
        if (rng.chance(0.2)) {
            // Reuse an existential within the head occasionally.
            Term z = (!ex_seen.empty() && rng.chance(0.3))
                         ? *ex_seen.begin()
                         : Term::variable("z" + std::to_string(++ex_counter));
            ex_seen.insert(z);
            head_args.push_back(z);
        } else {
            head_args.push_back(rng.pick(body_vars));
        }
    }
    rule.head.emplace_back(hp.name, std::move(head_args));
    rule.existentials.assign(ex_seen.begin(), ex_seen.end());
    return rule;
}

inline std::vector<Term> constant_pool(std::size_t n) {
    std::vector<Term> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Term::constant("C" + std::to_string(i)));
    return out;
}

inline Database random_database(Rng& rng, const Schema& schema, std::size_t max_facts,
                                std::size_t n_constants) {
    std::vector<Term> consts = constant_pool(n_constants);
    std::vector<PredSpec> ext = schema.extensional();
    Database db;
    std::size_t n = rng.range(1, max_facts);
    for (std::size_t i = 0; i < n; ++i) {
        // Mostly extensional facts; the solvers accept intensional ones too.
        const PredSpec& p =
            rng.chance(0.85) && !ext.empty() ? rng.pick(ext) : rng.pick(schema.preds);
        std::vector<Term> args;
        for (std::size_t a = 0; a < p.arity; ++a) args.push_back(rng.pick(consts));
        db.insert(Atom(p.name, std::move(args)));
    }
    return db;
}

inline CQ random_query(Rng& rng, const Schema& schema, std::size_t max_atoms,
                       std::size_t max_outputs) {
    static const std::vector<std::string> kQVars = {"q1", "q2", "q3"};
    CQ q;
    q.head_predicate = Symbols::intern("Q");
    std::size_t n = rng.range(1, max_atoms);
    for (std::size_t i = 0; i < n; ++i) {
        const PredSpec& p = rng.pick(schema.preds);
        std::vector<Term> args;
        for (std::size_t a = 0; a < p.arity; ++a)
            args.push_back(Term::variable(rng.pick(kQVars)));
        q.body.emplace_back(p.name, std::move(args));
    }
    std::vector<Term> vars = variables_of(q.body);
    std::size_t n_out = rng.below(std::min(max_outputs, vars.size()) + 1);
    std::shuffle(vars.begin(), vars.end(), rng.eng);
    q.outputs.assign(vars.begin(), vars.begin() + n_out);
    return q;
}

struct GeneratedCase {
    Schema schema;
    Program program;
};

// Rejection-samples programs until one classifies into the requested fragment.
// `require_pwl` = false yields warded programs that may use non-linear
// recursion (two intensional body atoms are allowed).
inline GeneratedCase random_fragment_program(Rng& rng, bool require_pwl,
                                             std::size_t max_rules = 6,
                                             std::size_t max_arity = 3) {
    for (int attempt = 0; attempt < 4000; ++attempt) {
        Schema schema = random_schema(rng, max_arity);
        Program prog;
        bool ok = true;
        std::size_t n_rules = rng.range(1, max_rules);
        try {
            for (std::size_t i = 0; i < n_rules; ++i)
                prog.add_rule(random_rule(rng, schema, /*max_body=*/rng.range(1, 3),
                                          require_pwl ? 1 : 2));
        } catch (const std::exception&) {
            ok = false;  // arity clash across generated occurrences
        }
        if (!ok) continue;
        ClassificationReport rep = classify(prog);
        if (!rep.warded) continue;
        if (require_pwl && !rep.pwl) continue;
        return {std::move(schema), std::move(prog)};
    }
    throw std::runtime_error("fragment sampler failed to converge");
}

inline bool chase_terminates(const Database& db, const Program& prog,
                             std::size_t max_steps = 2000, std::size_t max_depth = 12) {
    return bounded_chase(db, prog, {max_steps, max_depth}).terminated;
}

// A database on which the restricted chase of `prog` terminates in budget.
inline std::optional<Database> terminating_database(Rng& rng, const Schema& schema,
                                                    const Program& prog,
                                                    std::size_t max_facts = 12,
                                                    std::size_t n_constants = 3,
                                                    int tries = 25) {
    for (int i = 0; i < tries; ++i) {
        Database db = random_database(rng, schema, max_facts, n_constants);
        if (chase_terminates(db, prog)) return db;
    }
    return std::nullopt;
}

// Unconstrained random program for parser round-trips and analysis fixpoint
// properties; multi-atom heads and non-warded shapes are all fair game.
inline Program random_any_program(Rng& rng, std::size_t max_rules = 8,
                                  std::size_t max_arity = 4) {
    static const std::vector<std::string> kVarPool = {"x1", "x2", "x3", "x4", "x5"};
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::map<std::string, std::size_t> arities;
        auto pred = [&](Rng& r) {
            std::string name = "R" + std::to_string(r.below(5));
            if (!arities.count(name)) arities[name] = r.range(1, max_arity);
            return std::pair(name, arities[name]);
        };
        Program prog;
        bool ok = true;
        std::size_t n_rules = rng.range(1, max_rules);
        try {
            for (std::size_t i = 0; i < n_rules; ++i) {
                TGD rule;
                std::size_t nb = rng.range(1, 3), nh = rng.range(1, 2);
                for (std::size_t b = 0; b < nb; ++b) {
                    auto [name, ar] = pred(rng);
                    std::vector<Term> args;
                    for (std::size_t a = 0; a < ar; ++a)
                        args.push_back(Term::variable(rng.pick(kVarPool)));
                    rule.body.emplace_back(name, std::move(args));
                }
                std::vector<Term> body_vars = variables_of(rule.body);
                std::set<Term> exs;
                for (std::size_t h = 0; h < nh; ++h) {
                    auto [name, ar] = pred(rng);
                    std::vector<Term> args;
                    for (std::size_t a = 0; a < ar; ++a) {
                        if (rng.chance(0.2)) {
                            Term z = Term::variable("z" + std::to_string(exs.size() + 1));
                            exs.insert(z);
                            args.push_back(z);
                        } else {
                            args.push_back(rng.pick(body_vars));
                        }
                    }
                    rule.head.emplace_back(name, std::move(args));
                }
                rule.existentials.assign(exs.begin(), exs.end());
                prog.add_rule(std::move(rule));
            }
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) return prog;
    }
    throw std::runtime_error("program sampler failed to converge");
}

inline GoalQuery random_goal(Rng& rng, std::size_t max_atoms = 4) {
    static const std::vector<std::string> kVarPool = {"a", "b", "c", "d", "e"};
    static const std::vector<std::string> kConstPool = {"K1", "K2"};
    GoalQuery g;
    std::size_t n = rng.range(1, max_atoms);
    for (std::size_t i = 0; i < n; ++i) {
        std::string pred = "S" + std::to_string(rng.below(3));
        std::size_t ar = 1 + (pred.back() - '0');  // fixed arity per predicate
        std::vector<Term> args;
        for (std::size_t a = 0; a < ar; ++a) {
            if (rng.chance(0.2))
                args.push_back(Term::constant(rng.pick(kConstPool)));
            else
                args.push_back(Term::variable(rng.pick(kVarPool)));
        }
        g.atoms.emplace_back(pred, std::move(args));
    }
    return g;
}

// Applies a random variable bijection (into fresh names) and shuffles the atom
// order; the result is isomorphic to the input by construction.
inline GoalQuery scramble(Rng& rng, const GoalQuery& g, int tag) {
    std::vector<Term> vars = variables_of(g.atoms);
    std::vector<Term> fresh;
    for (std::size_t i = 0; i < vars.size(); ++i)
        fresh.push_back(Term::variable("w" + std::to_string(tag) + "_" + std::to_string(i)));
    std::shuffle(fresh.begin(), fresh.end(), rng.eng);
    Substitution ren;
    for (std::size_t i = 0; i < vars.size(); ++i) ren.bind(vars[i], fresh[i]);
    GoalQuery out;
    out.atoms = ren.apply(g.atoms);
    out.outputs = ren.apply(g.outputs);
    std::shuffle(out.atoms.begin(), out.atoms.end(), rng.eng);
    return out;
}

// --- Brute-force oracles ---------------------------------------------------

// CQ evaluation by exhaustive assignment of query variables to adom(I).
inline std::set<std::vector<Term>> brute_force_cq(const CQ& q, const Instance& I,
                                                  bool keep_null_tuples = false) {
    std::vector<Term> vars = variables_of(q.body);
    std::vector<Term> dom = I.adom();
    std::set<std::vector<Term>> out;
    if (!vars.empty() && dom.empty()) return out;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        Substitution h;
        for (std::size_t i = 0; i < vars.size(); ++i) h.bind(vars[i], dom[idx[i]]);
        bool holds = true;
        for (const Atom& a : q.body)
            if (!I.contains(h.apply(a))) {
                holds = false;
                break;
            }
        if (holds) {
            std::vector<Term> tup = h.apply(q.outputs);
            bool has_null = std::any_of(tup.begin(), tup.end(),
                                        [](const Term& t) { return t.is_null(); });
            if (keep_null_tuples || !has_null) out.insert(tup);
        }
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++idx[i] < dom.size()) break;
            idx[i] = 0;
        }
        if (i == vars.size() || dom.empty()) break;
    }
    if (vars.empty()) {
        // No variables: the single empty assignment was handled above only
        // when dom is nonempty; redo the ground check explicitly.
        out.clear();
        bool holds = std::all_of(q.body.begin(), q.body.end(),
                                 [&](const Atom& a) { return I.contains(a); });
        if (holds) out.insert(q.outputs);
    }
    return out;
}

// Transitive closure of an edge list, by iterated squaring-free iteration.
inline std::set<std::pair<std::string, std::string>> brute_force_tc(
    const std::set<std::pair<std::string, std::string>>& edges) {
    auto closure = edges;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : std::set(closure))
            for (const auto& [c, d] : std::set(closure))
                if (b == c && closure.insert({a, d}).second) changed = true;
    }
    return closure;
}

// Independent naive iteration of the affected-positions generation rules.
inline std::set<Position> naive_affected(const Program& p) {
    std::set<Position> aff;
    for (const TGD& rule : p.rules()) {
        std::set<Term> ex = {rule.existentials.begin(), rule.existentials.end()};
        for (const Atom& h : rule.head)
            for (std::size_t i = 0; i < h.args.size(); ++i)
                if (h.args[i].is_variable() && ex.count(h.args[i]))
                    aff.insert({h.predicate, i + 1});
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const TGD& rule : p.rules()) {
            std::set<Term> ex = {rule.existentials.begin(), rule.existentials.end()};
            for (const Atom& h : rule.head) {
                for (std::size_t i = 0; i < h.args.size(); ++i) {
                    const Term& v = h.args[i];
                    if (!v.is_variable() || ex.count(v)) continue;
                    bool all_affected = true, occurs = false;
                    for (const Atom& b : rule.body)
                        for (std::size_t j = 0; j < b.args.size(); ++j)
                            if (b.args[j] == v) {
                                occurs = true;
                                if (!aff.count({b.predicate, j + 1})) all_affected = false;
                            }
                    if (occurs && all_affected && aff.insert({h.predicate, i + 1}).second)
                        changed = true;
                }
            }
        }
    }
    return aff;
}

// Checks the level recurrence pointwise against the predicate graph.
inline bool levels_satisfy_recurrence(const Program& p) {
    PredicateGraph g = predicate_graph(p);
    std::map<SymbolId, std::size_t> lv = levels(p);
    for (SymbolId pred : g.nodes) {
        std::size_t expect = 0;
        for (const auto& [from, to] : g.edges)
            if (to == pred && !mutually_recursive(g, from, pred))
                expect = std::max(expect, lv.at(from));
        if (lv.at(pred) != expect + 1) return false;
    }
    return true;
}

}  // namespace testgen

#include "pwlward/chase.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pwlward {

namespace {

// A trigger is identified by its rule and the frontier image, serialized to a
// stable string so the fired-set survives across rounds.
std::string trigger_key(std::size_t rule_index, const TGD& rule, const Substitution& h) {
    std::ostringstream out;
    out << rule_index;
    std::vector<Term> body_vars;
    std::unordered_set<Term, TermHash> seen;
    for (const Atom& a : rule.body) {
        for (const Term& t : a.args) {
            if (t.kind == TermKind::Variable && seen.insert(t).second) body_vars.push_back(t);
        }
    }
    for (const Term& v : body_vars) out << '|' << h.apply(v).to_string();
    return out.str();
}

Substitution extend_with_nulls(const TGD& rule, const Substitution& h,
                               std::uint32_t& null_counter) {
    Substitution hp = h;
    for (const Term& ex : rule.existentials) hp.bind(ex, Term::null(++null_counter));
    return hp;
}

}  // namespace

Instance chase_step(const Instance& I, const TGD& rule, const Substitution& h,
                    std::uint32_t& null_counter) {
    for (const Atom& a : rule.body) {
        if (!I.contains(h.apply(a)))
            throw std::invalid_argument("chase_step: trigger image not in instance: " +
                                        h.apply(a).to_string());
    }
    Substitution hp = extend_with_nulls(rule, h, null_counter);
    Instance out = I;
    for (const Atom& a : rule.head) out.insert(hp.apply(a));
    return out;
}

ChaseResult bounded_chase(const Database& D, const Program& sigma, ChaseBudget budget,
                          ChasePolicy policy) {
    ChaseResult result;
    result.instance = D;
    std::uint32_t null_counter = 0;

    // Depth of a fact: 1 for database facts, 1 + max body-image depth for
    // derived ones. Drives the --max-depth cutoff.
    std::unordered_map<Atom, std::size_t, AtomHash> depth;
    for (const Atom& f : D.facts()) depth[f] = 1;

    std::unordered_set<std::string> handled;

    struct Pending {
        std::size_t rule_index;
        Substitution hom;
        std::string key;
    };

    bool saturated = false;
    bool out_of_steps = false;
    while (!saturated && !out_of_steps) {
        // Collect triggers against a snapshot, then fire; triggers created by
        // this round's new facts are picked up next round (FIFO fairness).
        std::deque<Pending> round;
        for (std::size_t r = 0; r < sigma.rules().size(); ++r) {
            const TGD& rule = sigma.rules()[r];
            for_each_homomorphism(rule.body, result.instance, Substitution{},
                                  [&](const Substitution& h) {
                                      std::string key = trigger_key(r, rule, h);
                                      if (!handled.count(key))
                                          round.push_back({r, h, std::move(key)});
                                      return true;
                                  });
        }

        bool fired_or_deferred = false;
        for (Pending& p : round) {
            if (handled.count(p.key)) continue;  // duplicate match within the round
            const TGD& rule = sigma.rules()[p.rule_index];

            if (policy == ChasePolicy::Restricted) {
                // Keep only the frontier bindings: the head may be satisfied
                // by *any* extension, not just the one this match suggests.
                Substitution frontier;
                for (const Term& v : rule.frontier()) frontier.bind(v, p.hom.apply(v));
                if (homomorphism_exists(rule.head, result.instance, frontier)) {
                    handled.insert(p.key);
                    continue;
                }
            }

            std::size_t body_depth = 1;
            for (const Atom& a : rule.body)
                body_depth = std::max(body_depth, depth.at(p.hom.apply(a)));
            if (body_depth + 1 > budget.max_depth) {
                // Over the depth cap: skip without marking handled so the
                // truncation is visible as terminated == false.
                fired_or_deferred = true;
                continue;
            }

            if (result.budget_spent >= budget.max_steps) {
                out_of_steps = true;
                fired_or_deferred = true;
                break;
            }

            Substitution hp = extend_with_nulls(rule, p.hom, null_counter);
            ChaseStep step{p.rule_index, hp, {}};
            for (const Atom& a : rule.head) {
                Atom img = hp.apply(a);
                if (result.instance.insert(img)) step.new_atoms.push_back(img);
                auto it = depth.find(img);
                if (it == depth.end() || it->second > body_depth + 1)
                    depth[img] = body_depth + 1;
            }
            ++result.budget_spent;
            handled.insert(p.key);
            result.steps.push_back(std::move(step));
            fired_or_deferred = true;
        }

        if (!fired_or_deferred) {
            saturated = true;
        } else if (!out_of_steps) {
            // A round that only deferred depth-capped triggers makes no
            // progress; stop rather than spin.
            bool progressed = false;
            for (const Pending& p : round)
                if (handled.count(p.key)) { progressed = true; break; }
            if (!progressed) break;
        }
    }

    result.terminated = saturated;
    return result;
}

CertainAnswers certain_answers_via_chase(const Database& D, const Program& sigma, const CQ& q,
                                         ChaseBudget budget) {
    ChaseResult chase = bounded_chase(D, sigma, budget);
    CertainAnswers out;
    out.complete = chase.terminated;
    out.answers = evaluate_cq(q, chase.instance, /*keep_null_tuples=*/false);
    return out;
}

Instance seminaive_eval(const Program& sigma, const Database& D) {
    for (const TGD& rule : sigma.rules())
        if (!rule.existentials.empty())
            throw std::invalid_argument("seminaive_eval: program has existential variables");

    Instance I = D;
    std::unordered_set<Atom> delta(D.facts().begin(), D.facts().end());

    while (!delta.empty()) {
        std::unordered_set<Atom> fresh;
        for (const TGD& rule : sigma.rules()) {
            // Standard delta trick: require the i-th body atom to match the
            // previous round's new facts; earlier/later atoms range over all
            // of I. Set insertion deduplicates the overlap.
            for (std::size_t i = 0; i < rule.body.size(); ++i) {
                std::vector<const std::unordered_set<Atom>*> restricted(
                    rule.body.size(), nullptr);
                restricted[i] = &delta;
                for_each_homomorphism_restricted(
                    rule.body, I, restricted, Substitution{}, [&](const Substitution& h) {
                        for (const Atom& a : rule.head) {
                            Atom img = h.apply(a);
                            if (!I.contains(img)) fresh.insert(img);
                        }
                        return true;
                    });
            }
        }
        for (const Atom& a : fresh) I.insert(a);
        delta = std::move(fresh);
    }
    return I;
}

ChaseGraph export_chase_graph(const ChaseResult& result, const Database& D,
                              const Program& sigma) {
    ChaseGraph g;
    g.nodes = result.instance.sorted_facts();
    for (const ChaseStep& step : result.steps) {
        const TGD& rule = sigma.rules()[step.rule_index];
        for (const Atom& produced : step.new_atoms) {
            for (const Atom& b : rule.body) {
                g.edges.push_back({step.trigger.apply(b), produced, step.rule_index,
                                   step.trigger});
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const ChaseGraph::Edge& a,
                                                 const ChaseGraph::Edge& b) {
        auto ka = std::tuple(a.from.to_string(), a.to.to_string(), a.rule_index);
        auto kb = std::tuple(b.from.to_string(), b.to.to_string(), b.rule_index);
        return ka < kb;
    });
    (void)D;
    return g;
}

std::string ChaseGraph::to_dot() const {
    std::ostringstream out;
    out << "digraph chase {\n";
    for (const Atom& n : nodes) out << "  \"" << n.to_string() << "\";\n";
    for (const Edge& e : edges) {
        out << "  \"" << e.from.to_string() << "\" -> \"" << e.to.to_string()
            << "\" [label=\"r" << e.rule_index << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

nlohmann::ordered_json ChaseGraph::to_json() const {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const Atom& n : nodes) j["nodes"].push_back(n.to_string());
    j["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : edges) {
        nlohmann::ordered_json je;
        je["from"] = e.from.to_string();
        je["to"] = e.to.to_string();
        je["rule"] = e.rule_index;
        j["edges"].push_back(je);
    }
    return j;
}

}  // namespace pwlward

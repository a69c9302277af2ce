#include "pwlward/analysis.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "pwlward/normalize.hpp"
#include "pwlward/textio.hpp"

namespace pwlward {

namespace {

// Iterative Tarjan over the predicate graph.
void compute_sccs(PredicateGraph& g) {
    std::map<SymbolId, std::vector<SymbolId>> adj;
    for (const auto& [from, to] : g.edges) adj[from].push_back(to);

    std::map<SymbolId, int> index, lowlink;
    std::vector<SymbolId> stack;
    std::set<SymbolId> on_stack;
    int next_index = 0;
    std::size_t next_scc = 0;

    struct Frame {
        SymbolId node;
        std::size_t child = 0;
    };

    for (SymbolId root : g.nodes) {
        if (index.count(root)) continue;
        std::vector<Frame> frames{{root}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack.insert(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            auto& edges = adj[f.node];
            if (f.child < edges.size()) {
                SymbolId w = edges[f.child++];
                if (!index.count(w)) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack.insert(w);
                    frames.push_back({w});
                } else if (on_stack.count(w)) {
                    lowlink[f.node] = std::min(lowlink[f.node], index[w]);
                }
            } else {
                if (lowlink[f.node] == index[f.node]) {
                    std::size_t id = next_scc++;
                    std::size_t members = 0;
                    SymbolId w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack.erase(w);
                        g.scc_id[w] = id;
                        ++members;
                    } while (w != f.node);
                    g.scc_size[id] = members;
                }
                SymbolId done = f.node;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().node] =
                        std::min(lowlink[frames.back().node], lowlink[done]);
            }
        }
    }
    for (SymbolId n : g.nodes) {
        std::size_t id = g.scc_id[n];
        if (g.scc_size[id] > 1 || g.has_edge(n, n)) g.cyclic_sccs.insert(id);
    }
}

std::set<Position> head_positions_of(const TGD& rule, Term var) {
    std::set<Position> out;
    for (const Atom& a : rule.head)
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i] == var) out.insert({a.predicate, i + 1});
    return out;
}

}  // namespace

PredicateGraph predicate_graph(const Program& p) {
    PredicateGraph g;
    for (const auto& [pred, arity] : p.schema()) g.nodes.insert(pred);
    for (const TGD& r : p.rules())
        for (const Atom& b : r.body)
            for (const Atom& h : r.head) g.edges.insert({b.predicate, h.predicate});
    compute_sccs(g);
    return g;
}

bool mutually_recursive(const PredicateGraph& g, SymbolId p, SymbolId r) {
    auto ip = g.scc_id.find(p);
    auto ir = g.scc_id.find(r);
    if (ip == g.scc_id.end() || ir == g.scc_id.end()) return false;
    return ip->second == ir->second && g.cyclic_sccs.count(ip->second) != 0;
}

std::set<Position> affected_positions(const Program& p) {
    std::set<Position> affected;
    // Base: positions of existentially quantified head variables.
    for (const TGD& r : p.rules()) {
        for (const Term& x : r.existentials)
            for (const Position& pos : head_positions_of(r, x)) affected.insert(pos);
    }
    // Propagation: frontier variables whose body occurrences are all affected.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const TGD& r : p.rules()) {
            std::unordered_set<Term> frontier;
            for (const Term& t : r.frontier()) frontier.insert(t);
            for (const Term& x : frontier) {
                bool occurs = false, all_affected = true;
                for (const Atom& a : r.body)
                    for (std::size_t i = 0; i < a.args.size(); ++i)
                        if (a.args[i] == x) {
                            occurs = true;
                            if (!affected.count({a.predicate, i + 1})) all_affected = false;
                        }
                if (!occurs || !all_affected) continue;
                for (const Position& pos : head_positions_of(r, x))
                    if (affected.insert(pos).second) changed = true;
            }
        }
    }
    return affected;
}

VariableClasses classify_variables(const TGD& rule, const std::set<Position>& affected) {
    VariableClasses out;
    std::unordered_set<Term> frontier;
    for (const Term& t : rule.frontier()) frontier.insert(t);
    for (const Term& x : variables_of(rule.body)) {
        bool harmless = false;
        for (const Atom& a : rule.body)
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i] == x && !affected.count({a.predicate, i + 1})) harmless = true;
        if (harmless) {
            out.harmless.insert(x);
        } else {
            out.harmful.insert(x);
            if (frontier.count(x)) out.dangerous.insert(x);
        }
    }
    return out;
}

VariableClasses classify_variables(const Program& p, const TGD& rule) {
    return classify_variables(rule, affected_positions(p));
}

ClassificationReport is_warded(const Program& p) {
    ClassificationReport report;
    report.affected = affected_positions(p);
    report.warded = true;
    for (const TGD& rule : p.rules()) {
        RuleReport rr;
        rr.rule = textio::serialize_tgd(rule);
        VariableClasses classes = classify_variables(rule, report.affected);
        rr.dangerous = classes.dangerous;
        rr.harmful = classes.harmful;
        rr.harmless = classes.harmless;
        if (!classes.dangerous.empty()) {
            // First body atom in source order that qualifies as a ward.
            std::string why;
            for (const Atom& alpha : rule.body) {
                std::unordered_set<Term> alpha_vars;
                for (const Term& t : alpha.args)
                    if (t.is_variable()) alpha_vars.insert(t);
                bool covers = std::all_of(
                    classes.dangerous.begin(), classes.dangerous.end(),
                    [&](const Term& d) { return alpha_vars.count(d) != 0; });
                if (!covers) {
                    if (why.empty())
                        why = "no body atom contains every dangerous variable";
                    continue;
                }
                std::optional<Term> bad_shared;
                for (const Atom& other : rule.body) {
                    if (&other == &alpha) continue;
                    for (const Term& t : other.args)
                        if (t.is_variable() && alpha_vars.count(t) && !classes.harmless.count(t))
                            bad_shared = t;
                }
                if (bad_shared) {
                    why = "candidate ward " + alpha.to_string() + " shares non-harmless variable " +
                          bad_shared->name() + " with the rest of the body";
                    continue;
                }
                rr.ward = alpha;
                break;
            }
            if (!rr.ward) {
                report.warded = false;
                rr.violation = why.empty() ? "no ward found" : why;
            }
        }
        report.per_rule.push_back(std::move(rr));
    }
    return report;
}

bool is_pwl(const Program& p) {
    PredicateGraph g = predicate_graph(p);
    for (const TGD& rule : p.rules()) {
        std::size_t recursive_atoms = 0;
        for (const Atom& b : rule.body) {
            bool rec = std::any_of(rule.head.begin(), rule.head.end(), [&](const Atom& h) {
                return mutually_recursive(g, b.predicate, h.predicate);
            });
            if (rec) ++recursive_atoms;
        }
        if (recursive_atoms > 1) return false;
    }
    return true;
}

bool is_intensionally_linear(const Program& p) {
    auto intensional = p.intensional_predicates();
    for (const TGD& rule : p.rules()) {
        std::size_t count = 0;
        for (const Atom& b : rule.body)
            if (intensional.count(b.predicate)) ++count;
        if (count > 1) return false;
    }
    return true;
}

bool is_full_datalog(const Program& p) {
    return std::all_of(p.rules().begin(), p.rules().end(), [](const TGD& r) {
        return r.is_full() && r.single_head();
    });
}

std::map<SymbolId, std::size_t> levels(const Program& p) {
    PredicateGraph g = predicate_graph(p);
    // Condensation processed in topological order; the recursion only looks at
    // predecessors that are not mutually recursive, which all live in earlier
    // sccs (or in an acyclic position of the same scc, which cannot happen).
    std::map<std::size_t, std::vector<SymbolId>> members;
    for (SymbolId n : g.nodes) members[g.scc_id[n]].push_back(n);
    std::map<std::size_t, std::set<std::size_t>> dag;  // scc -> predecessor sccs
    std::map<std::size_t, std::size_t> indegree;
    for (auto& [id, _] : members) indegree[id] = 0;
    for (const auto& [from, to] : g.edges) {
        std::size_t a = g.scc_id[from], b = g.scc_id[to];
        if (a != b && dag[b].insert(a).second) ++indegree[b];
    }
    std::vector<std::size_t> order;
    for (auto& [id, deg] : indegree)
        if (deg == 0) order.push_back(id);
    std::map<std::size_t, std::vector<std::size_t>> succs;
    for (auto& [b, preds] : dag)
        for (std::size_t a : preds) succs[a].push_back(b);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t nxt : succs[order[i]])
            if (--indegree[nxt] == 0) order.push_back(nxt);

    std::map<SymbolId, std::size_t> level;
    std::map<SymbolId, std::vector<SymbolId>> preds_of;
    for (const auto& [from, to] : g.edges) preds_of[to].push_back(from);
    for (std::size_t scc : order) {
        for (SymbolId n : members[scc]) {
            std::size_t best = 0;
            for (SymbolId r : preds_of[n])
                if (!mutually_recursive(g, r, n)) best = std::max(best, level[r]);
            level[n] = best + 1;
        }
    }
    return level;
}

std::size_t max_level(const Program& p) {
    std::size_t m = 1;
    for (const auto& [pred, lvl] : levels(p)) m = std::max(m, lvl);
    return m;
}

std::size_t node_width_bound(const CQ& q, const Program& p, Fragment fragment) {
    std::size_t body = std::max<std::size_t>(1, p.max_body_size());
    if (fragment == Fragment::WardPwl) return (q.body.size() + 1) * max_level(p) * body;
    return 2 * std::max(q.body.size(), body);
}

ClassificationReport classify(const Program& p) {
    auto [normalized, trace] = to_single_head(p);
    ClassificationReport report = is_warded(normalized);
    report.single_head_normalized = !trace.introduced_predicates.empty();
    report.pwl = is_pwl(normalized);
    report.intensionally_linear = is_intensionally_linear(normalized);
    report.full_datalog = is_full_datalog(normalized);
    report.levels = levels(normalized);
    return report;
}

nlohmann::ordered_json ClassificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["warded"] = warded;
    j["pwl"] = pwl;
    j["intensionally_linear"] = intensionally_linear;
    j["full_datalog"] = full_datalog;
    j["single_head_normalized"] = single_head_normalized;
    auto& aff = j["affected"] = nlohmann::ordered_json::array();
    for (const Position& pos : affected) aff.push_back(pos.to_string());
    auto& lv = j["levels"] = nlohmann::ordered_json::object();
    std::map<std::string, std::size_t> by_name;
    for (const auto& [pred, l] : levels) by_name[Symbols::name(pred)] = l;
    for (const auto& [name, l] : by_name) lv[name] = l;
    auto& rules = j["per_rule"] = nlohmann::ordered_json::array();
    auto names = [](const std::set<Term>& ts) {
        std::vector<std::string> out;
        for (const Term& t : ts) out.push_back(t.name());
        std::sort(out.begin(), out.end());
        return out;
    };
    for (const RuleReport& rr : per_rule) {
        nlohmann::ordered_json r;
        r["rule"] = rr.rule;
        r["dangerous"] = names(rr.dangerous);
        r["harmful"] = names(rr.harmful);
        r["harmless"] = names(rr.harmless);
        if (rr.ward)
            r["ward"] = rr.ward->to_string();
        else
            r["ward"] = nullptr;
        if (rr.violation)
            r["violation"] = *rr.violation;
        else
            r["violation"] = nullptr;
        rules.push_back(std::move(r));
    }
    return j;
}

}  // namespace pwlward

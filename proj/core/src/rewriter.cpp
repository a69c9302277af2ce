#include "pwlward/rewriter.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pwlward/analysis.hpp"
#include "pwlward/chase.hpp"
#include "pwlward/homomorphism.hpp"
#include "pwlward/normalize.hpp"
#include "pwlward/solver.hpp"

namespace pwlward {

namespace {

std::string short_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffull));
    return buf;
}

Term output_slot(std::size_t i) { return Term::variable("o" + std::to_string(i + 1)); }

// Renames the outputs positionally to o1..on so that states reached through
// different output histories share canonical forms.
GoalQuery normalize_outputs(const GoalQuery& g) {
    Substitution rename;
    GoalQuery out;
    for (std::size_t i = 0; i < g.outputs.size(); ++i) {
        Term slot = output_slot(i);
        out.outputs.push_back(slot);
        if (g.outputs[i] != slot) rename.bind(g.outputs[i], slot);
    }
    out.atoms = rename.apply(g.atoms);
    return out;
}

std::vector<std::vector<std::vector<std::size_t>>> partitions(std::size_t n) {
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::vector<std::size_t>> blocks;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            out.push_back(blocks);
            return;
        }
        for (auto& b : blocks) {
            b.push_back(i);
            self(self, i + 1);
            b.pop_back();
        }
        blocks.push_back({i});
        self(self, i + 1);
        blocks.pop_back();
    };
    rec(rec, 0);
    return out;
}

struct Closure {
    const std::vector<TGD>& apart;
    const std::unordered_set<SymbolId>& intensional;
    const std::vector<Term>& consts;
    std::size_t bound;

    CanonicalPredicateTable table;
    std::unordered_map<std::string, SymbolId> pred_of;
    std::deque<GoalQuery> queue;
    std::set<TGD> rules;

    bool is_extensional_atom(const Atom& a) const { return !intensional.count(a.predicate); }

    // Interns the state (canonicalizing outputs and variables); returns the
    // predicate plus the argument list in the caller's namespace.
    Atom intern(const GoalQuery& raw) {
        GoalQuery canon = canonicalize(normalize_outputs(raw));
        std::string key = canon.key() + "/" + std::to_string(canon.outputs.size());
        auto it = pred_of.find(key);
        SymbolId pred;
        if (it != pred_of.end()) {
            pred = it->second;
        } else {
            bool fresh = false;
            pred = table.intern(canon, fresh);
            pred_of.emplace(key, pred);
            queue.push_back(canon);
        }
        return Atom{pred, raw.outputs};
    }

    void emit(std::vector<Atom> body, Atom head) {
        rules.insert(TGD{std::move(body), {std::move(head)}, {}});
    }

    void expand(const GoalQuery& p) {
        Atom self{pred_of.at(p.key() + "/" + std::to_string(p.outputs.size())), p.outputs};

        // Direct-match rule: the compiled program never derives original
        // predicates, so this body can only match database facts — the
        // evaluation-time counterpart of accepting a goal that embeds into D.
        emit(p.atoms, self);
        bool all_ext = std::all_of(p.atoms.begin(), p.atoms.end(),
                                   [&](const Atom& a) { return is_extensional_atom(a); });
        if (all_ext) return;

        // Resolution steps, width-pruned.
        for (const TGD& rule : apart) {
            for (const ChunkUnifier& u : enumerate_mgcus(p, rule)) {
                GoalQuery res = resolvent(p, rule, u);
                if (res.atoms.size() > bound) continue;
                emit({intern(res)}, self);
            }
        }

        // Outputs pinned to program/query constants, recovering resolution
        // steps that rule-head constants would otherwise block.
        for (std::size_t i = 0; i < p.outputs.size(); ++i) {
            for (const Term& c : consts) {
                Substitution pin;
                pin.bind(p.outputs[i], c);
                GoalQuery child;
                child.atoms = pin.apply(p.atoms);
                for (std::size_t j = 0; j < p.outputs.size(); ++j)
                    if (j != i) child.outputs.push_back(p.outputs[j]);
                Atom head = self;
                head.args[i] = c;
                emit({intern(child)}, head);
            }
        }

        // Split atoms into groups connected by shared non-output variables.
        std::size_t n = p.atoms.size();
        std::vector<std::size_t> uf(n);
        for (std::size_t i = 0; i < n; ++i) uf[i] = i;
        auto find = [&](std::size_t i) {
            while (uf[i] != i) i = uf[i] = uf[uf[i]];
            return i;
        };
        std::unordered_set<Term> frozen(p.outputs.begin(), p.outputs.end());
        std::unordered_map<Term, std::size_t> owner;
        for (std::size_t i = 0; i < n; ++i)
            for (const Term& t : p.atoms[i].args) {
                if (t.kind != TermKind::Variable || frozen.count(t)) continue;
                auto [it, first] = owner.emplace(t, i);
                if (!first) uf[find(i)] = find(it->second);
            }
        std::map<std::size_t, std::vector<Atom>> groups;
        for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(p.atoms[i]);

        auto restrict_outputs = [&](const std::vector<Atom>& atoms) {
            std::unordered_set<Term> vars;
            for (const Atom& a : atoms)
                for (const Term& t : a.args) vars.insert(t);
            std::vector<Term> outs;
            for (const Term& o : p.outputs)
                if (vars.count(o)) outs.push_back(o);
            return outs;
        };

        std::vector<std::vector<Atom>> ext_parts;
        std::vector<Atom> rec_atoms;
        for (auto& [_, atoms] : groups) {
            bool ext = std::all_of(atoms.begin(), atoms.end(),
                                   [&](const Atom& a) { return is_extensional_atom(a); });
            if (ext)
                ext_parts.push_back(atoms);
            else
                rec_atoms.insert(rec_atoms.end(), atoms.begin(), atoms.end());
        }

        if (!ext_parts.empty() && !rec_atoms.empty()) {
            // Linear decomposition: the extensional groups become leaf
            // children, everything else stays together as the one recursive
            // child — which keeps the emitted recursion piece-wise linear.
            std::vector<Atom> body;
            for (const auto& part : ext_parts)
                body.push_back(intern(GoalQuery{part, restrict_outputs(part)}));
            body.push_back(intern(GoalQuery{rec_atoms, restrict_outputs(rec_atoms)}));
            emit(std::move(body), self);
        }

        // Promote a variable bridging extensional and intensional atoms to a
        // fresh symbolic output, enabling the split above at evaluation time.
        std::unordered_set<Term> ext_vars, int_vars;
        for (const Atom& a : p.atoms) {
            auto& side = is_extensional_atom(a) ? ext_vars : int_vars;
            for (const Term& t : a.args)
                if (t.kind == TermKind::Variable && !frozen.count(t)) side.insert(t);
        }
        std::vector<Term> bridges;
        for (const Term& v : ext_vars)
            if (int_vars.count(v)) bridges.push_back(v);
        std::sort(bridges.begin(), bridges.end(),
                  [](const Term& a, const Term& b) { return a.to_string() < b.to_string(); });
        for (const Term& v : bridges) {
            Term w = output_slot(p.outputs.size());
            Substitution s;
            s.bind(v, w);
            GoalQuery child;
            child.atoms = s.apply(p.atoms);
            child.outputs = p.outputs;
            child.outputs.push_back(w);
            emit({intern(child)}, self);
        }
    }
};

}  // namespace

SymbolId CanonicalPredicateTable::intern(const GoalQuery& state, bool& fresh) {
    std::string key = state.key() + "/" + std::to_string(state.outputs.size());
    auto it = by_key_.find(key);
    if (it != by_key_.end()) {
        fresh = false;
        return it->second;
    }
    fresh = true;
    std::string suffix = state.atoms.empty() ? "true" : Symbols::name(state.atoms[0].predicate);
    std::string base =
        "C" + short_hash(key) + "_" + suffix + std::to_string(state.atoms.size());
    std::string name = base;
    int& clash = name_clashes_[base];
    if (clash > 0) name += "_" + std::to_string(clash);
    ++clash;
    SymbolId id = Symbols::intern(name);
    by_key_.emplace(key, id);
    return id;
}

RewriteResult rewrite_to_pwl_datalog(const Program& sigma, const CQ& q) {
    auto [single, sh_trace] = to_single_head(sigma);
    (void)sh_trace;
    if (!is_warded(single).warded)
        throw PreconditionError("rewriting requires a warded program");
    if (!is_pwl(single))
        throw PreconditionError("rewriting requires a piece-wise linear program");
    auto [normalized, nf_trace] = to_levelwise_nf(single);
    (void)nf_trace;

    std::vector<TGD> apart;
    for (const TGD& r : normalized.rules()) apart.push_back(rename_apart(r));
    std::unordered_set<SymbolId> intensional = normalized.intensional_predicates();

    std::vector<Term> consts = normalized.constants();
    {
        std::set<Term> all(consts.begin(), consts.end());
        for (const Atom& a : q.body)
            for (const Term& t : a.args)
                if (t.kind == TermKind::Constant) all.insert(t);
        for (const Term& t : q.outputs)
            if (t.kind == TermKind::Constant) all.insert(t);
        consts.assign(all.begin(), all.end());
    }

    std::size_t bound = node_width_bound(q, normalized, Fragment::WardPwl);
    Closure cl{apart, intensional, consts, bound, {}, {}, {}, {}};

    // Distinct output variables, first-occurrence order.
    std::vector<Term> out_vars;
    for (const Term& t : q.outputs)
        if (t.kind == TermKind::Variable &&
            std::find(out_vars.begin(), out_vars.end(), t) == out_vars.end())
            out_vars.push_back(t);

    // A fresh goal predicate holding the answer relation.
    std::string goal_name = "Goal";
    for (int i = 1; normalized.declares(Symbols::intern(goal_name)) ||
                    Symbols::intern(goal_name) == q.head_predicate;
         ++i)
        goal_name = "Goal_" + std::to_string(i);
    SymbolId goal = Symbols::intern(goal_name);

    // One root state per partition of the output variables: outputs that end
    // up carrying the same value are merged up front (resolution never unifies
    // two symbolic outputs).
    for (const auto& pi : partitions(out_vars.size())) {
        Substitution merge;
        std::vector<Term> reps;
        std::unordered_map<Term, Term> rep_of;
        for (std::size_t b = 0; b < pi.size(); ++b) {
            Term rep = output_slot(b);
            reps.push_back(rep);
            for (std::size_t idx : pi[b]) {
                merge.bind(out_vars[idx], rep);
                rep_of.emplace(out_vars[idx], rep);
            }
        }
        GoalQuery root;
        root.atoms = merge.apply(q.body);
        root.outputs = reps;
        Atom body = cl.intern(root);

        Atom head;
        head.predicate = goal;
        for (const Term& t : q.outputs)
            head.args.push_back(t.kind == TermKind::Constant ? t : rep_of.at(t));
        cl.emit({std::move(body)}, std::move(head));
    }

    while (!cl.queue.empty()) {
        GoalQuery p = std::move(cl.queue.front());
        cl.queue.pop_front();
        cl.expand(p);
    }

    std::vector<TGD> ordered(cl.rules.begin(), cl.rules.end());
    std::sort(ordered.begin(), ordered.end(), [](const TGD& a, const TGD& b) {
        return a.to_string() < b.to_string();
    });

    RewriteResult out;
    out.datalog = Program(std::move(ordered));
    out.query.head_predicate = q.head_predicate;
    out.query.outputs = q.outputs;
    out.query.body = {Atom{goal, q.outputs}};
    out.states = cl.table.size();
    out.bound = bound;
    return out;
}

VerifyReport verify_rewriting(const Program& sigma, const CQ& q,
                              const std::vector<Database>& corpus) {
    VerifyReport report;
    RewriteResult rw = rewrite_to_pwl_datalog(sigma, q);
    for (const Database& D : corpus) {
        ++report.databases;
        std::set<std::vector<Term>> expected = all_answers(D, sigma, q, Engine::ProofTree);

        Instance evaluated = seminaive_eval(rw.datalog, D);
        std::set<std::vector<Term>> actual;
        std::set<Term> adom;
        for (const Term& t : D.adom()) adom.insert(t);
        for (const auto& tuple : evaluate_cq(rw.query, evaluated)) {
            bool in_adom = std::all_of(tuple.begin(), tuple.end(),
                                       [&](const Term& t) { return adom.count(t) != 0; });
            if (in_adom) actual.insert(tuple);
        }

        if (expected != actual) {
            std::ostringstream msg;
            msg << "database " << report.databases << ": solver returned " << expected.size()
                << " tuple(s), rewriting returned " << actual.size();
            report.mismatches.push_back(msg.str());
        }
    }
    return report;
}

}  // namespace pwlward

#include "pwlward/solver.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "pwlward/chase.hpp"
#include "pwlward/normalize.hpp"

namespace pwlward {

namespace {

struct Prepared {
    Program sigma;            // single-head (and level-wise NF for the linear solver)
    std::vector<TGD> apart;   // rules pre-renamed away from the canonical pools
    std::size_t bound = 0;
};

Prepared prepare(const Program& sigma, const CQ& q, Fragment fragment, bool level_nf) {
    auto [single, trace] = to_single_head(sigma);
    (void)trace;
    ClassificationReport report = is_warded(single);
    if (!report.warded)
        throw PreconditionError("program is not warded" +
                                (report.per_rule.empty()
                                     ? std::string{}
                                     : ": see rule-level violations in `classify`"));
    if (fragment == Fragment::WardPwl) {
        if (!is_pwl(single))
            throw PreconditionError(
                "program is not piece-wise linear; use the and-or or chase engine");
        if (level_nf) {
            auto [nf, nf_trace] = to_levelwise_nf(single);
            (void)nf_trace;
            single = std::move(nf);
        }
    }
    Prepared out;
    out.bound = node_width_bound(q, single, fragment);
    for (const TGD& r : single.rules()) out.apart.push_back(rename_apart(r));
    out.sigma = std::move(single);
    return out;
}

// Saturates the rules over D with every existential collapsed to one blank
// placeholder term. The result over-approximates the chase: composing a
// homomorphism into the chase with "nulls to blank" lands in the saturation,
// so any provable goal embeds into it. It is always finite (no fresh terms).
Instance abstract_saturation(const Database& D, const Program& single) {
    Term blank = Term::null(0);
    std::vector<TGD> collapsed;
    for (TGD r : single.rules()) {
        Substitution s;
        for (const Term& z : r.existentials) s.bind(z, blank);
        r.head = s.apply(r.head);
        r.existentials.clear();
        collapsed.push_back(std::move(r));
    }
    return seminaive_eval(Program{std::move(collapsed)}, D);
}

// Goals that do not embed into the abstract saturation are unprovable and can
// be pruned without losing completeness.
bool possibly_provable(const GoalQuery& g, const Instance& abstract) {
    return homomorphism_exists(g.atoms, abstract);
}

std::vector<Term> goal_variables(const GoalQuery& g);

// A goal that embeds into D as a whole is solvable outright: specialize each
// variable along the embedding, then strip. Returns the witnessing steps.
std::optional<std::vector<std::string>> direct_embedding(const GoalQuery& g,
                                                         const Database& D) {
    std::optional<Substitution> h;
    for_each_homomorphism(g.atoms, D, {}, [&](const Substitution& found) {
        h = found;
        return false;
    });
    if (!h) return std::nullopt;
    std::vector<std::string> steps;
    for (const Term& v : goal_variables(g))
        steps.push_back("s " + v.to_string() + ":=" + h->apply(v).to_string());
    steps.push_back("d");
    return steps;
}

// Instantiates the query outputs with the candidate tuple; nullopt when a
// constant output (or a repeated output variable) clashes with the tuple.
std::optional<GoalQuery> ground_goal(const CQ& q, const std::vector<Term>& tuple) {
    if (tuple.size() != q.outputs.size())
        throw std::invalid_argument("answer tuple arity does not match the query");
    Substitution ground;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i].kind != TermKind::Constant)
            throw std::invalid_argument("answer tuples must consist of constants");
        const Term& out = q.outputs[i];
        if (out.kind == TermKind::Constant) {
            if (out != tuple[i]) return std::nullopt;
        } else if (ground.maps(out)) {
            if (ground.apply(out) != tuple[i]) return std::nullopt;
        } else {
            ground.bind(out, tuple[i]);
        }
    }
    return canonicalize(GoalQuery{ground.apply(q.body), {}});
}

std::vector<Term> goal_variables(const GoalQuery& g) {
    std::vector<Term> out;
    std::unordered_set<Term> seen;
    for (const Atom& a : g.atoms)
        for (const Term& t : a.args)
            if (t.kind == TermKind::Variable && seen.insert(t).second) out.push_back(t);
    return out;
}

std::vector<Term> constant_adom(const Database& D) {
    std::vector<Term> out;
    for (const Term& t : D.adom())
        if (t.kind == TermKind::Constant) out.push_back(t);
    return out;
}

// Memoized top-down search over canonical goals. Per goal, in order:
// accept outright on an embedding into D; prune via the abstract saturation;
// split variable-disjoint components and solve them independently (a
// conjunction of variable-disjoint parts is provable iff each part is);
// otherwise branch over strip, single-atom database matches, and width-bounded
// resolution. A path-based cycle cut realizes the least fixpoint; false
// verdicts are cached only when no cut influenced them. Rule heads carry no
// constants, so specialization can never unlock a resolution step; every
// specialize/strip chain factors into the single-atom matches enumerated here,
// or into the final embedding.
class GoalSearch {
public:
    GoalSearch(const Database& D, const Prepared& prep, SearchStats& stats, bool tracing)
        : D_(D),
          prep_(prep),
          stats_(stats),
          tracing_(tracing),
          abstract_(abstract_saturation(D, prep.sigma)) {}

    struct Outcome {
        bool value;
        bool exhausted;  // false when a path-cycle cut influenced the verdict
    };

    // On success with tracing enabled, `steps` receives one r/d/s entry per
    // applied operation (component proofs are concatenated).
    Outcome solvable(const GoalQuery& g, std::vector<std::string>* steps = nullptr) {
        if (g.empty()) {
            if (steps) steps->clear();
            return {true, true};
        }
        std::string key = g.key();
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++stats_.memo_hits;
            if (steps && it->second) *steps = proof_[key];
            return {it->second, true};
        }
        if (auto emb = direct_embedding(g, D_)) {
            remember(key, true, steps, std::move(*emb));
            return {true, true};
        }
        if (!possibly_provable(g, abstract_)) {
            memo_[key] = false;
            return {false, true};
        }
        if (on_path_.count(key)) return {false, false};  // least-fixpoint cycle cut
        on_path_.insert(key);
        stats_.max_frontier = std::max(stats_.max_frontier, on_path_.size());
        stats_.max_width = std::max(stats_.max_width, g.atoms.size());
        ++stats_.expanded;

        bool value = false;
        bool exhausted = true;
        std::vector<std::string> proof;
        auto consider = [&](Outcome o, std::vector<std::string> child,
                            const std::string& label) {
            if (o.value) {
                value = true;
                if (tracing_) {
                    proof.clear();
                    if (!label.empty()) proof.push_back(label);
                    proof.insert(proof.end(), child.begin(), child.end());
                }
            } else {
                exhausted = exhausted && o.exhausted;
            }
            return value;
        };

        std::vector<GoalQuery> parts = decompose(g);
        if (parts.size() > 1) {
            // Independent components: prove each on its own.
            bool all = true;
            bool parts_exhausted = true;
            std::vector<std::string> combined;
            for (const GoalQuery& part : parts) {
                std::vector<std::string> child;
                Outcome o = solvable(part, tracing_ ? &child : nullptr);
                if (!o.value) {
                    all = false;
                    parts_exhausted = o.exhausted;
                    break;
                }
                combined.insert(combined.end(), child.begin(), child.end());
            }
            consider({all, parts_exhausted}, std::move(combined), "");
        } else {
            GoalQuery stripped = strip_db_atoms(g, D_);
            if (stripped.atoms.size() != g.atoms.size()) {
                std::vector<std::string> child;
                consider(solvable(stripped, tracing_ ? &child : nullptr), std::move(child),
                         "d");
            }

            // Discharge one atom against one database fact, specializing the
            // remainder along the induced variable bindings.
            for (std::size_t i = 0; i < g.atoms.size() && !value; ++i) {
                std::vector<Atom> pattern{g.atoms[i]};
                for_each_homomorphism(pattern, D_, {}, [&](const Substitution& h) {
                    GoalQuery rest;
                    rest.outputs = g.outputs;
                    for (std::size_t j = 0; j < g.atoms.size(); ++j)
                        if (j != i) rest.atoms.push_back(h.apply(g.atoms[j]));
                    std::string label;
                    for (const Term& t : g.atoms[i].args)
                        if (t.kind == TermKind::Variable)
                            label += (label.empty() ? "s " : " ") + t.to_string() + ":=" +
                                     h.apply(t).to_string();
                    label += label.empty() ? "d" : "; d";
                    std::vector<std::string> child;
                    return !consider(
                        solvable(canonicalize(rest), tracing_ ? &child : nullptr),
                        std::move(child), label);
                });
            }

            for (std::size_t r = 0; r < prep_.apart.size() && !value; ++r) {
                for (const ChunkUnifier& u : enumerate_mgcus(g, prep_.apart[r])) {
                    GoalQuery res = resolvent(g, prep_.apart[r], u);
                    if (res.atoms.size() > prep_.bound) continue;  // width cut
                    std::vector<std::string> child;
                    if (consider(solvable(res, tracing_ ? &child : nullptr),
                                 std::move(child), "r rule " + std::to_string(r)))
                        break;
                }
            }
        }

        on_path_.erase(key);
        // True verdicts are path-independent; false is cached only when no
        // cycle cut was involved (otherwise it may be an artifact of the path).
        if (value || exhausted) remember(key, value, steps, std::move(proof));
        if (steps && value && !tracing_) steps->clear();
        return {value, exhausted};
    }

private:
    void remember(const std::string& key, bool value, std::vector<std::string>* steps,
                  std::vector<std::string> proof) {
        memo_[key] = value;
        if (tracing_ && value) {
            if (steps) *steps = proof;
            proof_[key] = std::move(proof);
        }
    }

    const Database& D_;
    const Prepared& prep_;
    SearchStats& stats_;
    bool tracing_;
    Instance abstract_;
    std::unordered_map<std::string, bool> memo_;
    std::unordered_map<std::string, std::vector<std::string>> proof_;
    std::unordered_set<std::string> on_path_;
};

}  // namespace

bool decide_pwl_warded(const Database& D, const Program& sigma, const CQ& q,
                       const std::vector<Term>& tuple, SearchStats* stats,
                       std::vector<std::string>* trace, bool auto_normalize) {
    Prepared prep = prepare(sigma, q, Fragment::WardPwl, auto_normalize);
    SearchStats local;
    local.bound = prep.bound;
    bool verdict = false;
    if (auto start = ground_goal(q, tuple)) {
        GoalSearch search(D, prep, local, trace != nullptr);
        std::vector<std::string> steps;
        verdict = search.solvable(*start, trace ? &steps : nullptr).value;
        if (trace && verdict) *trace = std::move(steps);
    }
    if (stats) *stats = local;
    return verdict;
}

bool decide_warded(const Database& D, const Program& sigma, const CQ& q,
                   const std::vector<Term>& tuple, SearchStats* stats) {
    Prepared prep = prepare(sigma, q, Fragment::Ward, /*level_nf=*/false);
    SearchStats local;
    local.bound = prep.bound;
    bool verdict = false;
    if (auto start = ground_goal(q, tuple)) {
        GoalSearch search(D, prep, local, /*tracing=*/false);
        verdict = search.solvable(*start).value;
    }
    if (stats) *stats = local;
    return verdict;
}

std::set<std::vector<Term>> all_answers(const Database& D, const Program& sigma, const CQ& q,
                                        Engine engine) {
    if (engine == Engine::Chase) {
        CertainAnswers ca = certain_answers_via_chase(D, sigma, q);
        if (!ca.complete)
            throw std::runtime_error("all_answers: chase did not terminate within budget");
        // Answer tuples range over adom(D); rule-head constants outside the
        // database are not certain-answer values under the problem statement.
        std::set<std::vector<Term>> out;
        std::unordered_set<Term> adom_set;
        for (const Term& t : D.adom()) adom_set.insert(t);
        for (const auto& tuple : ca.answers) {
            bool ok = std::all_of(tuple.begin(), tuple.end(),
                                  [&](const Term& t) { return adom_set.count(t) != 0; });
            if (ok) out.insert(tuple);
        }
        return out;
    }

    std::vector<Term> adom = constant_adom(D);
    std::set<std::vector<Term>> out;
    std::vector<Term> tuple(q.outputs.size());

    auto decide = [&](const std::vector<Term>& t) {
        return engine == Engine::ProofTree ? decide_pwl_warded(D, sigma, q, t)
                                           : decide_warded(D, sigma, q, t);
    };

    // Enumerate adom(D)-tuples positionally; constant outputs are fixed slots.
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == tuple.size()) {
            if (decide(tuple)) out.insert(tuple);
            return;
        }
        if (q.outputs[i].kind == TermKind::Constant) {
            tuple[i] = q.outputs[i];
            self(self, i + 1);
            return;
        }
        // Repeated output variables must take the same value everywhere.
        for (std::size_t j = 0; j < i; ++j) {
            if (q.outputs[j] == q.outputs[i]) {
                tuple[i] = tuple[j];
                self(self, i + 1);
                return;
            }
        }
        for (const Term& c : adom) {
            tuple[i] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace pwlward

#include "pwlward/resolution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pwlward {

namespace {

// Triangular unifier: variables resolve through `parent` chains. Frozen
// variables are rigid — they behave like constants and are never bound. There
// are no function symbols, so no occurs check is needed.
class Unifier {
public:
    explicit Unifier(const std::unordered_set<Term>* rigid) : rigid_(rigid) {}

    Term walk(Term t) const {
        while (t.kind != TermKind::Constant) {
            auto it = parent_.find(t);
            if (it == parent_.end()) break;
            t = it->second;
        }
        return t;
    }

    bool flexible(Term t) const {
        return t.kind == TermKind::Variable && (!rigid_ || !rigid_->count(t));
    }

    bool unify(Term a, Term b) {
        a = walk(a);
        b = walk(b);
        if (a == b) return true;
        if (flexible(a)) {
            parent_[a] = b;
            return true;
        }
        if (flexible(b)) {
            parent_[b] = a;
            return true;
        }
        return false;
    }

    bool unify(const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!unify(a.args[i], b.args[i])) return false;
        return true;
    }

    Substitution to_substitution() const {
        Substitution s;
        for (const auto& [from, _] : parent_) s.bind(from, walk(from));
        return s;
    }

private:
    const std::unordered_set<Term>* rigid_;
    std::unordered_map<Term, Term> parent_;
};

std::set<Atom> apply_set(const Substitution& s, const std::vector<Atom>& atoms) {
    std::set<Atom> out;
    for (const Atom& a : atoms) out.insert(s.apply(a));
    return out;
}

// Set unification γ(A)=γ(B): branch over which atom of the other side an
// unmatched atom unifies with; return the first success in deterministic order.
std::optional<Substitution> mgu_rec(const std::vector<Atom>& A, const std::vector<Atom>& B,
                                    const Unifier& u) {
    Substitution s = u.to_substitution();
    std::set<Atom> sa = apply_set(s, A);
    std::set<Atom> sb = apply_set(s, B);
    if (sa == sb) return s;

    std::vector<Atom> left(sa.begin(), sa.end());
    std::vector<Atom> right(sb.begin(), sb.end());
    bool pick_from_left = true;
    Atom pivot;
    auto first_not_in = [](const std::vector<Atom>& xs, const std::set<Atom>& ys,
                           Atom& out) {
        for (const Atom& x : xs)
            if (!ys.count(x)) {
                out = x;
                return true;
            }
        return false;
    };
    if (!first_not_in(left, sb, pivot)) {
        pick_from_left = false;
        first_not_in(right, sa, pivot);
    }
    const std::vector<Atom>& partners = pick_from_left ? right : left;
    for (const Atom& cand : partners) {
        Unifier next = u;
        if (!next.unify(pivot, cand)) continue;
        if (auto res = mgu_rec(A, B, next)) return res;
    }
    return std::nullopt;
}

std::string serialize_term(const Term& t, const std::unordered_set<Term>& frozen,
                           std::unordered_map<Term, int>& labels, int& next_label) {
    if (t.kind == TermKind::Constant) return "c:" + t.to_string();
    if (frozen.count(t)) return "f:" + t.to_string();
    auto it = labels.find(t);
    int id;
    if (it != labels.end()) {
        id = it->second;
    } else {
        id = next_label++;
        labels.emplace(t, id);
    }
    return "v" + std::to_string(id);
}

std::string serialize_atom(const Atom& a, const std::unordered_set<Term>& frozen,
                           std::unordered_map<Term, int>& labels, int& next_label) {
    std::string out = Symbols::name(a.predicate);
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += serialize_term(a.args[i], frozen, labels, next_label);
    }
    out += ')';
    return out;
}

// Lexicographically least serialization over all atom orders, with first-
// occurrence labeling of flexible variables. The greedy choice of the least
// next line is exact; ties on the line branch because different atoms may bind
// different underlying variables.
struct CanonSearch {
    const std::vector<Atom>& atoms;
    std::unordered_set<Term> frozen;
    std::vector<std::string> best_lines;
    std::unordered_map<Term, int> best_labels;
    std::vector<std::size_t> best_order;
    bool have_best = false;

    void run() {
        std::vector<std::string> lines;
        std::vector<std::size_t> order;
        std::unordered_map<Term, int> labels;
        rec(0, lines, order, labels, 1, /*tied_with_best=*/true);
    }

    void rec(std::uint64_t used, std::vector<std::string>& lines,
             std::vector<std::size_t>& order, std::unordered_map<Term, int>& labels,
             int next_label, bool tied) {
        if (lines.size() == atoms.size()) {
            if (!have_best || lines < best_lines) {
                best_lines = lines;
                best_labels = labels;
                best_order = order;
                have_best = true;
            }
            return;
        }
        std::string least;
        std::vector<std::size_t> argmin;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (used & (1ull << i)) continue;
            auto probe = labels;
            int probe_next = next_label;
            std::string s = serialize_atom(atoms[i], frozen, probe, probe_next);
            if (argmin.empty() || s < least) {
                least = std::move(s);
                argmin.assign(1, i);
            } else if (s == least) {
                argmin.push_back(i);
            }
        }
        if (have_best && tied) {
            std::size_t k = lines.size();
            if (least > best_lines[k]) return;
            if (least == best_lines[k]) {
                // stays tied
            } else {
                tied = false;
            }
        }
        for (std::size_t i : argmin) {
            auto child_labels = labels;
            int child_next = next_label;
            serialize_atom(atoms[i], frozen, child_labels, child_next);
            lines.push_back(least);
            order.push_back(i);
            rec(used | (1ull << i), lines, order, child_labels, child_next, tied);
            lines.pop_back();
            order.pop_back();
        }
    }
};

std::vector<Atom> dedupe(const std::vector<Atom>& atoms) {
    std::set<Atom> s(atoms.begin(), atoms.end());
    return {s.begin(), s.end()};
}

}  // namespace

std::string GoalQuery::key() const {
    std::string out;
    for (const Atom& a : atoms) {
        out += a.to_string();
        out += '\n';
    }
    return out;
}

std::string GoalQuery::to_string() const {
    std::ostringstream out;
    out << "Q(";
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (i) out << ",";
        out << outputs[i].to_string();
    }
    out << ") <- ";
    if (atoms.empty()) out << "true";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out << ", ";
        out << atoms[i].to_string();
    }
    return out.str();
}

std::optional<Substitution> mgu(const std::vector<Atom>& A, const std::vector<Atom>& B,
                                const std::vector<Term>& frozen) {
    std::unordered_set<Term> rigid(frozen.begin(), frozen.end());
    Unifier u(&rigid);
    return mgu_rec(A, B, u);
}

TGD rename_apart(const TGD& sigma) {
    Substitution rename;
    std::size_t counter = 0;
    auto fresh_for = [&](const Term& t) {
        if (t.kind == TermKind::Variable && !rename.maps(t))
            rename.bind(t, Term::variable("u" + std::to_string(++counter)));
    };
    for (const Atom& a : sigma.body)
        for (const Term& t : a.args) fresh_for(t);
    for (const Atom& a : sigma.head)
        for (const Term& t : a.args) fresh_for(t);
    TGD out;
    out.body = rename.apply(sigma.body);
    out.head = rename.apply(sigma.head);
    out.existentials = rename.apply(sigma.existentials);
    return out;
}

std::vector<ChunkUnifier> enumerate_mgcus(const GoalQuery& q, const TGD& sigma) {
    if (!sigma.single_head())
        throw std::invalid_argument("enumerate_mgcus: rule must be single-head");
    const Atom& head = sigma.head[0];

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < q.atoms.size(); ++i)
        if (q.atoms[i].predicate == head.predicate &&
            q.atoms[i].args.size() == head.args.size())
            candidates.push_back(i);
    if (candidates.empty()) return {};

    std::unordered_set<Term> rigid(q.outputs.begin(), q.outputs.end());
    std::unordered_set<Term> existentials = sigma.existential_set();

    // Variables whose γ-image matters for the side conditions.
    std::vector<Term> all_vars;
    std::unordered_set<Term> seen;
    auto collect = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms)
            for (const Term& t : a.args)
                if (t.kind == TermKind::Variable && seen.insert(t).second)
                    all_vars.push_back(t);
    };
    collect(q.atoms);
    collect(sigma.body);
    collect(sigma.head);

    std::vector<ChunkUnifier> out;
    for (std::uint64_t mask = 1; mask < (1ull << candidates.size()); ++mask) {
        std::vector<std::size_t> s1;
        Unifier u(&rigid);
        bool ok = true;
        for (std::size_t j = 0; j < candidates.size() && ok; ++j) {
            if (!(mask & (1ull << j))) continue;
            s1.push_back(candidates[j]);
            ok = u.unify(q.atoms[candidates[j]], head);
        }
        if (!ok) continue;
        Substitution gamma = u.to_substitution();

        std::unordered_set<Term> s1_vars;
        std::unordered_set<std::size_t> s1_idx(s1.begin(), s1.end());
        for (std::size_t i : s1)
            for (const Term& t : q.atoms[i].args)
                if (t.kind == TermKind::Variable) s1_vars.insert(t);
        auto shared = [&](const Term& y) {
            if (rigid.count(y)) return true;
            for (std::size_t i = 0; i < q.atoms.size(); ++i) {
                if (s1_idx.count(i)) continue;
                for (const Term& t : q.atoms[i].args)
                    if (t == y) return true;
            }
            return false;
        };

        for (auto it = existentials.begin(); ok && it != existentials.end(); ++it) {
            const Term& x = *it;
            bool in_s2 = false;
            for (const Term& t : head.args)
                if (t == x) in_s2 = true;
            if (!in_s2) continue;
            Term img = gamma.apply(x);
            if (img.kind == TermKind::Constant || rigid.count(img)) {
                ok = false;
                break;
            }
            for (const Term& y : all_vars) {
                if (y == x) continue;
                if (gamma.apply(y) != img) continue;
                if (!s1_vars.count(y) || shared(y)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) out.push_back({std::move(s1), std::move(gamma)});
    }
    return out;
}

GoalQuery resolvent(const GoalQuery& q, const TGD& sigma, const ChunkUnifier& u) {
    std::unordered_set<std::size_t> drop(u.s1.begin(), u.s1.end());
    GoalQuery out;
    out.outputs = q.outputs;
    for (std::size_t i = 0; i < q.atoms.size(); ++i)
        if (!drop.count(i)) out.atoms.push_back(u.gamma.apply(q.atoms[i]));
    for (const Atom& a : sigma.body) out.atoms.push_back(u.gamma.apply(a));
    return canonicalize(out);
}

GoalQuery specialize(const GoalQuery& q, const Term& var, const Term& value) {
    Substitution s;
    s.bind(var, value);
    GoalQuery out{s.apply(q.atoms), q.outputs};
    return canonicalize(out);
}

std::vector<GoalQuery> decompose(const GoalQuery& q) {
    std::unordered_set<Term> rigid(q.outputs.begin(), q.outputs.end());
    std::size_t n = q.atoms.size();
    std::vector<std::size_t> uf(n);
    for (std::size_t i = 0; i < n; ++i) uf[i] = i;
    auto find = [&](std::size_t i) {
        while (uf[i] != i) i = uf[i] = uf[uf[i]];
        return i;
    };
    std::unordered_map<Term, std::size_t> owner;
    for (std::size_t i = 0; i < n; ++i) {
        for (const Term& t : q.atoms[i].args) {
            if (t.kind != TermKind::Variable || rigid.count(t)) continue;
            auto [it, fresh] = owner.emplace(t, i);
            if (!fresh) uf[find(i)] = find(it->second);
        }
    }
    std::map<std::size_t, std::vector<Atom>> parts;
    for (std::size_t i = 0; i < n; ++i) parts[find(i)].push_back(q.atoms[i]);

    std::vector<GoalQuery> out;
    for (auto& [_, atoms] : parts) {
        GoalQuery part;
        part.atoms = std::move(atoms);
        std::unordered_set<Term> vars;
        for (const Atom& a : part.atoms)
            for (const Term& t : a.args) vars.insert(t);
        for (const Term& o : q.outputs)
            if (vars.count(o)) part.outputs.push_back(o);
        out.push_back(canonicalize(part));
    }
    std::sort(out.begin(), out.end(),
              [](const GoalQuery& a, const GoalQuery& b) { return a.key() < b.key(); });
    return out;
}

GoalQuery strip_db_atoms(const GoalQuery& q, const Database& D) {
    GoalQuery out;
    out.outputs = q.outputs;
    for (const Atom& a : q.atoms)
        if (!(a.is_ground() && D.contains(a))) out.atoms.push_back(a);
    return canonicalize(out);
}

GoalQuery canonicalize(const GoalQuery& q) {
    GoalQuery out;
    out.outputs = q.outputs;
    std::vector<Atom> atoms = dedupe(q.atoms);
    if (atoms.empty()) return out;
    if (atoms.size() > 64)
        throw std::invalid_argument("canonicalize: goal exceeds 64 atoms");

    CanonSearch search{atoms, {q.outputs.begin(), q.outputs.end()}};
    search.run();

    Substitution rename;
    for (const auto& [var, label] : search.best_labels)
        rename.bind(var, Term::variable("v" + std::to_string(label)));
    for (std::size_t i : search.best_order) out.atoms.push_back(rename.apply(atoms[i]));
    return out;
}

}  // namespace pwlward

#include <optional>
#include <set>

#include "doctest.h"

#include "pwlward/chase.hpp"
#include "pwlward/normalize.hpp"
#include "pwlward/resolution.hpp"
#include "pwlward/solver.hpp"

#include "../support/common.hpp"
#include "../support/generators.hpp"

using namespace pwlward;
using testsup::C;
using testsup::V;

namespace {

GoalQuery goal(std::vector<Atom> atoms) {
    GoalQuery g;
    g.atoms = std::move(atoms);
    return canonicalize(g);
}

TGD rule(const std::string& text) { return testsup::prog(text).rules()[0]; }

}  // namespace

TEST_CASE("mgu basics") {
    auto u = mgu({Atom("R", {V("x"), V("y")})}, {Atom("R", {C("A"), V("z")})});
    REQUIRE(u);
    CHECK(u->apply(V("x")) == C("A"));
    CHECK(u->apply(V("y")) == u->apply(V("z")));

    CHECK(!mgu({Atom("R", {V("x"), V("x")})}, {Atom("R", {C("A"), C("B")})}));

    auto collapse = mgu({Atom("R", {V("x"), V("y")}), Atom("R", {V("y"), V("x")})},
                        {Atom("R", {V("u"), V("u")})});
    REQUIRE(collapse);
    Term img = collapse->apply(V("x"));
    CHECK(collapse->apply(V("y")) == img);
    CHECK(collapse->apply(V("u")) == img);
}

TEST_CASE("mgu is most general: sample unifiers factor through it") {
    std::vector<Atom> A = {Atom("R", {V("x"), V("y")})};
    std::vector<Atom> B = {Atom("R", {V("p"), V("q")})};
    auto u = mgu(A, B);
    REQUIRE(u);
    // The ground unifier {all -> A} must be reachable from u's image.
    Substitution ground;
    for (const char* v : {"x", "y", "p", "q"}) ground.bind(V(v), C("A"));
    Substitution after;
    for (const char* v : {"x", "y", "p", "q"}) {
        Term mid = u->apply(V(v));
        if (mid.is_variable() && !after.maps(mid)) after.bind(mid, C("A"));
    }
    for (const char* v : {"x", "y", "p", "q"})
        CHECK(after.apply(u->apply(V(v))) == ground.apply(V(v)));
}

TEST_CASE("frozen variables are rigid in unification") {
    auto u = mgu({Atom("R", {V("o1"), V("y")})}, {Atom("R", {V("u1"), V("u2")})}, {V("o1")});
    REQUIRE(u);
    CHECK(u->apply(V("u1")) == V("o1"));  // the flexible side moves
    CHECK(!mgu({Atom("R", {V("o1"), V("o1")})}, {Atom("R", {V("o2"), V("u1")})},
               {V("o1"), V("o2")}));
}

TEST_CASE("chunk unifier rejection: existential against a shared variable") {
    // y is shared with S(y) outside the chunk, so unifying it with the
    // existential would be unsound.
    GoalQuery q = goal({Atom("R", {V("x"), V("y")}), Atom("S", {V("y")})});
    TGD sigma = rename_apart(rule("P(x) -> exists y: R(x,y)."));
    CHECK(enumerate_mgcus(q, sigma).empty());

    // Without the outside occurrence the chunk resolves.
    GoalQuery q2 = goal({Atom("R", {V("x"), V("y")})});
    CHECK(enumerate_mgcus(q2, sigma).size() == 1);
}

TEST_CASE("chunk unifier through a collector predicate") {
    // The two-atom head is normalized first; resolving through the collector
    // performs the sound two-step unfolding.
    Program p = testsup::prog("P(x) -> exists y: R(x,y), S(y).");
    auto [single, trace] = to_single_head(p);
    (void)trace;
    Database d = testsup::db("P(A).");
    CQ q = testsup::cq("Q :- R(x,y), S(y).");
    CHECK(decide_pwl_warded(d, single, q, {}));
}

TEST_CASE("chunk unifier on a full rule") {
    GoalQuery q = goal({Atom("T", {C("A"), V("z")})});
    TGD sigma = rename_apart(rule("E(x,y) -> T(x,y)."));
    auto us = enumerate_mgcus(q, sigma);
    REQUIRE(us.size() == 1);
    CHECK(us[0].s1 == std::vector<std::size_t>{0});
    GoalQuery r = resolvent(q, sigma, us[0]);
    CHECK(r.key() == goal({Atom("E", {C("A"), V("w")})}).key());
}

TEST_CASE("resolvent examples") {
    // Unfolding through the recursive closure rule leaves a fresh middle var.
    GoalQuery q = goal({Atom("T", {C("A"), V("z")})});
    TGD sigma = rename_apart(rule("E(x,y), T(y,z) -> T(x,z)."));
    auto us = enumerate_mgcus(q, sigma);
    REQUIRE(us.size() == 1);
    GoalQuery r = resolvent(q, sigma, us[0]);
    CHECK(r.key() ==
          goal({Atom("E", {C("A"), V("m")}), Atom("T", {V("m"), V("z")})}).key());

    // The null-join unfolding: R(c,v1) resolves against the existential rule.
    GoalQuery q2 = goal({Atom("R", {C("c"), V("v1")})});
    TGD ex = rename_apart(rule(testsup::kNullJoinRule));
    auto us2 = enumerate_mgcus(q2, ex);
    REQUIRE(us2.size() == 1);
    CHECK(resolvent(q2, ex, us2[0]).key() == goal({Atom("P", {C("c")})}).key());
}

TEST_CASE("resolution soundness against the chase oracle") {
    testgen::Rng rng(606);
    int checked = 0;
    while (checked < 15) {
        auto [schema, program] = testgen::random_fragment_program(rng, true, 4);
        auto db = testgen::terminating_database(rng, schema, program, 8);
        if (!db) continue;
        CQ q = testgen::random_query(rng, schema, 2, 0);  // Boolean
        GoalQuery raw;
        raw.atoms = q.body;
        GoalQuery g = canonicalize(raw);

        bool advanced = false;
        for (const TGD& r0 : program.rules()) {
            if (!r0.single_head()) continue;
            TGD sigma = rename_apart(r0);
            for (const ChunkUnifier& u : enumerate_mgcus(g, sigma)) {
                GoalQuery res = resolvent(g, sigma, u);
                CQ qres;
                qres.head_predicate = Symbols::intern("Q");
                qres.body = res.atoms;
                // A resolvent proves no more than the original goal.
                CertainAnswers a = certain_answers_via_chase(*db, program, qres, {4000, 14});
                CertainAnswers b = certain_answers_via_chase(*db, program, q, {4000, 14});
                if (!a.complete || !b.complete) continue;
                if (!a.answers.empty()) CHECK(!b.answers.empty());
                advanced = true;
            }
        }
        if (advanced) ++checked;
    }
}

TEST_CASE("specialization") {
    GoalQuery q = goal({Atom("T", {V("v1"), V("v1")})});
    GoalQuery s = specialize(q, V("v1"), C("A"));
    CHECK(s.key() == goal({Atom("T", {C("A"), C("A")})}).key());

    GoalQuery q2 = goal({Atom("R", {C("c"), V("v1")}), Atom("P", {V("v1")})});
    GoalQuery s2 = specialize(q2, V("v1"), C("c"));
    CHECK(s2.key() == goal({Atom("R", {C("c"), C("c")}), Atom("P", {C("c")})}).key());
}

TEST_CASE("decomposition") {
    GoalQuery q =
        goal({Atom("R", {C("A"), V("x")}), Atom("S", {V("x")}), Atom("P", {C("B")})});
    auto parts = decompose(q);
    REQUIRE(parts.size() == 2);

    CHECK(decompose(goal({Atom("R", {V("x"), V("y")}), Atom("S", {V("y"), V("z")})})).size() ==
          1);

    // Constants never glue atoms together.
    CHECK(decompose(goal({Atom("T", {C("A"), C("B")}), Atom("T", {C("B"), C("C")})})).size() ==
          2);

    // Parts are the connected components (up to the canonical renaming each
    // part receives): R and T share b, while S and P stand alone.
    GoalQuery mixed = goal({Atom("R", {V("a"), V("b")}), Atom("S", {V("c")}),
                            Atom("T", {V("b"), C("K")}), Atom("P", {C("K")})});
    auto ps = decompose(mixed);
    REQUIRE(ps.size() == 3);
    std::multiset<std::multiset<std::string>> groups;
    for (const GoalQuery& part : ps) {
        std::multiset<std::string> preds;
        for (const Atom& a : part.atoms) preds.insert(Symbols::name(a.predicate));
        groups.insert(preds);
    }
    CHECK(groups == std::multiset<std::multiset<std::string>>{{"R", "T"}, {"S"}, {"P"}});
}

TEST_CASE("stripping database atoms") {
    Database d = testsup::db("P('c').");
    GoalQuery q = goal({Atom("P", {C("c")}), Atom("R", {C("c"), V("v1")})});
    GoalQuery s = strip_db_atoms(q, d);
    CHECK(s.key() == goal({Atom("R", {C("c"), V("v1")})}).key());

    GoalQuery untouched = goal({Atom("R", {C("c"), V("v1")})});
    CHECK(strip_db_atoms(untouched, d).key() == untouched.key());

    CHECK(strip_db_atoms(goal({Atom("P", {C("c")})}), d).empty());
}

TEST_CASE("canonicalization") {
    GoalQuery a = goal({Atom("S", {V("y"), V("x")}), Atom("R", {V("x")})});
    GoalQuery b = goal({Atom("R", {V("u")}), Atom("S", {V("w"), V("u")})});
    CHECK(a.key() == b.key());

    CHECK(goal({Atom("R", {V("x"), V("y")})}).key() ==
          goal({Atom("R", {V("y"), V("x")})}).key());

    testgen::Rng rng(707);
    for (int i = 0; i < 300; ++i) {
        GoalQuery g = testgen::random_goal(rng);
        GoalQuery c = canonicalize(g);
        CHECK(canonicalize(c) == c);                              // idempotent
        CHECK(canonicalize(testgen::scramble(rng, g, i)) == c);   // invariant
    }
}

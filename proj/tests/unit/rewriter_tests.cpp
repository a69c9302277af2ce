#include <set>

#include "doctest.h"

#include "pwlward/analysis.hpp"
#include "pwlward/chase.hpp"
#include "pwlward/homomorphism.hpp"
#include "pwlward/rewriter.hpp"
#include "pwlward/solver.hpp"

#include "../support/common.hpp"
#include "../support/generators.hpp"

using namespace pwlward;
using testsup::C;

namespace {

// Evaluates the rewriting over D and projects to all-constant tuples (the
// compiled program introduces no constants of its own here).
std::set<std::vector<Term>> run_rewriting(const RewriteResult& rw, const Database& d) {
    Instance fix = seminaive_eval(rw.datalog, d);
    return evaluate_cq(rw.query, fix);
}

}  // namespace

TEST_CASE("rewriting the null-join pair") {
    Program p = testsup::prog(testsup::kNullJoinRule);
    Database d = testsup::db(testsup::kNullJoinDb);

    RewriteResult rw1 = rewrite_to_pwl_datalog(p, testsup::cq("Q :- R(x,y)."));
    CHECK(run_rewriting(rw1, d) == std::set<std::vector<Term>>{{}});

    RewriteResult rw2 = rewrite_to_pwl_datalog(p, testsup::cq("Q :- R(x,y), P(y)."));
    CHECK(run_rewriting(rw2, d).empty());
}

TEST_CASE("rewriting output is piece-wise linear full datalog") {
    Program p = testsup::prog(testsup::kNullJoinRule);
    RewriteResult rw = rewrite_to_pwl_datalog(p, testsup::cq("Q :- R(x,y)."));
    ClassificationReport rep = classify(rw.datalog);
    CHECK(rep.full_datalog);
    CHECK(rep.pwl);
    for (const TGD& r : rw.datalog.rules()) CHECK(r.single_head());
}

TEST_CASE("rewriting transitive closure") {
    Program tc = testsup::prog(testsup::kLinearTc);
    CQ q = testsup::cq("Q(x,y) :- T(x,y).");
    RewriteResult rw = rewrite_to_pwl_datalog(tc, q);
    ClassificationReport rep = classify(rw.datalog);
    CHECK(rep.full_datalog);
    CHECK(rep.pwl);

    testgen::Rng rng(42);
    for (int i = 0; i < 5; ++i) {
        std::size_t n = rng.range(2, 6);
        Database d;
        for (std::size_t e = 0; e < n + 2; ++e)
            d.insert(Atom("E", {C("N" + std::to_string(rng.below(n))),
                                C("N" + std::to_string(rng.below(n)))}));
        CHECK(run_rewriting(rw, d) == all_answers(d, tc, q, Engine::Chase));
    }
}

TEST_CASE("empty rule set reduces to plain query evaluation") {
    CQ q = testsup::cq("Q(x) :- R(x,y), S(y).");
    RewriteResult rw = rewrite_to_pwl_datalog(Program{}, q);
    Database d = testsup::db("R(A,B). S(B). R(A,C).");
    CHECK(run_rewriting(rw, d) == evaluate_cq(q, d));
}

TEST_CASE("rewriter preconditions") {
    CQ q = testsup::cq("Q(x,y) :- T(x,y).");
    CHECK_THROWS_AS(rewrite_to_pwl_datalog(testsup::prog(testsup::kQuadraticTc), q),
                    PreconditionError);
    Program notwarded = testsup::prog(
        "P(x) -> exists z: R(x,z).\n"
        "R(x,y) -> P(y).\n"
        "P(x), P(y) -> S(x,y).\n");
    CHECK_THROWS_AS(rewrite_to_pwl_datalog(notwarded, testsup::cq("Q :- P(x).")),
                    PreconditionError);
}

TEST_CASE("deterministic output") {
    Program p = testsup::prog(testsup::kNullJoinRule);
    CQ q = testsup::cq("Q :- R(x,y).");
    RewriteResult a = rewrite_to_pwl_datalog(p, q);
    RewriteResult b = rewrite_to_pwl_datalog(p, q);
    CHECK(a.datalog.rules() == b.datalog.rules());
    CHECK(a.states == b.states);
}

TEST_CASE("verify_rewriting on the null-join pair and empty corpus") {
    Program p = testsup::prog(testsup::kNullJoinRule);
    std::vector<Database> corpus = {testsup::db(testsup::kNullJoinDb),
                                    testsup::db("P(A). P(B). R(A,B).")};
    VerifyReport r1 = verify_rewriting(p, testsup::cq("Q :- R(x,y)."), corpus);
    CHECK(r1.ok());
    CHECK(r1.databases == 2);
    VerifyReport r2 = verify_rewriting(p, testsup::cq("Q :- R(x,y), P(y)."), corpus);
    CHECK(r2.ok());
    CHECK(verify_rewriting(p, testsup::cq("Q :- R(x,y)."), {}).databases == 0);
}

TEST_CASE("rewriter equivalence on random small programs") {
    testgen::Rng rng(1313);
    int checked = 0;
    while (checked < 8) {
        auto [schema, program] =
            testgen::random_fragment_program(rng, /*require_pwl=*/true, 2, 2);
        CQ q = testgen::random_query(rng, schema, 1, 1);
        // The closure is exponential in the width bound; keep the corpus at
        // transitive-closure scale.
        if (node_width_bound(q, program, Fragment::WardPwl) > 8) continue;

        RewriteResult rw;
        try {
            rw = rewrite_to_pwl_datalog(program, q);
        } catch (const std::invalid_argument&) {
            continue;  // state space too wide for the unit budget
        }
        ClassificationReport rep = classify(rw.datalog);
        CHECK(rep.full_datalog);
        CHECK(rep.pwl);

        std::vector<Database> corpus;
        for (int d = 0; d < 3; ++d) {
            auto db = testgen::terminating_database(rng, schema, program, 6);
            if (db) corpus.push_back(*db);
        }
        if (corpus.empty()) continue;
        VerifyReport report = verify_rewriting(program, q, corpus);
        for (const std::string& m : report.mismatches) {
            CAPTURE(m);
            CHECK(false);
        }
        ++checked;
    }
}

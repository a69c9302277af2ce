// Microbenchmarks for the two hot paths: bottom-up fixpoint evaluation and
// the proof-tree solver.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "pwlward/chase.hpp"
#include "pwlward/solver.hpp"
#include "pwlward/textio.hpp"

using namespace pwlward;

namespace {

const char* kLinearTc =
    "E(x,y) -> T(x,y).\n"
    "E(x,y), T(y,z) -> T(x,z).\n";

Database chain(std::size_t n) {
    Database d;
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.insert(Atom("E", {Term::constant("N" + std::to_string(i)),
                            Term::constant("N" + std::to_string(i + 1))}));
    return d;
}

void BM_SeminaiveClosure(benchmark::State& state) {
    Program tc = textio::parse_program(kLinearTc);
    Database d = chain(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Instance fix = seminaive_eval(tc, d);
        benchmark::DoNotOptimize(fix.size());
    }
}
BENCHMARK(BM_SeminaiveClosure)->Arg(16)->Arg(64)->Arg(128);

void BM_RestrictedChase(benchmark::State& state) {
    Program tc = textio::parse_program(kLinearTc);
    Database d = chain(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        ChaseResult r = bounded_chase(d, tc);
        benchmark::DoNotOptimize(r.instance.size());
    }
}
BENCHMARK(BM_RestrictedChase)->Arg(16)->Arg(64);

void BM_ProofTreeDecision(benchmark::State& state) {
    Program tc = textio::parse_program(kLinearTc);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Database d = chain(n);
    CQ q = textio::parse_query("Q(x,y) :- T(x,y).");
    std::vector<Term> endpoints = {Term::constant("N0"),
                                   Term::constant("N" + std::to_string(n - 2))};
    for (auto _ : state) {
        bool v = decide_pwl_warded(d, tc, q, endpoints);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ProofTreeDecision)->Arg(8)->Arg(16);

void BM_ExistentialChase(benchmark::State& state) {
    Program onto = textio::parse_program(
        "SubClass(x,y) -> SubClassStar(x,y).\n"
        "SubClassStar(x,y), SubClass(y,z) -> SubClassStar(x,z).\n"
        "Type(x,y), SubClassStar(y,z) -> Type(x,z).\n"
        "Type(x,y), Restriction(y,z) -> exists w: Triple(x,z,w).\n"
        "Triple(x,y,z), Inverse(y,w) -> Triple(z,w,x).\n"
        "Triple(x,y,z), Restriction(w,y) -> Type(x,w).\n");
    Database d;
    std::size_t n = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.insert(Atom("SubClass", {Term::constant("K" + std::to_string(i)),
                                   Term::constant("K" + std::to_string(i + 1))}));
    d.insert(Atom("Type", {Term::constant("O"), Term::constant("K0")}));
    d.insert(Atom("Restriction", {Term::constant("K0"), Term::constant("P")}));
    d.insert(Atom("Inverse", {Term::constant("P"), Term::constant("Pinv")}));
    for (auto _ : state) {
        ChaseResult r = bounded_chase(d, onto, {100000, 30});
        benchmark::DoNotOptimize(r.instance.size());
    }
}
BENCHMARK(BM_ExistentialChase)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

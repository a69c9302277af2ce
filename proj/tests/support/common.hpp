#pragma once

// Parsing shorthands and shared fixtures for the unit tests.

#include <string>
#include <vector>

#include "pwlward/program.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/textio.hpp"

namespace testsup {

inline pwlward::Program prog(const std::string& text) {
    return pwlward::textio::parse_program(text);
}
inline pwlward::Database db(const std::string& text) {
    return pwlward::textio::parse_database(text);
}
inline pwlward::CQ cq(const std::string& text, const pwlward::Program* schema = nullptr) {
    return pwlward::textio::parse_query(text, schema);
}

inline pwlward::Term C(const std::string& name) { return pwlward::Term::constant(name); }
inline pwlward::Term V(const std::string& name) { return pwlward::Term::variable(name); }

// The OWL 2 QL-style six-rule warded program used throughout the tests.
inline const char* kOntologyRules =
    "SubClass(x,y) -> SubClassStar(x,y).\n"
    "SubClassStar(x,y), SubClass(y,z) -> SubClassStar(x,z).\n"
    "Type(x,y), SubClassStar(y,z) -> Type(x,z).\n"
    "Type(x,y), Restriction(y,z) -> exists w: Triple(x,z,w).\n"
    "Triple(x,y,z), Inverse(y,w) -> Triple(z,w,x).\n"
    "Triple(x,y,z), Restriction(w,y) -> Type(x,w).\n";

// Single existential rule plus its two companion queries: the classic pair
// where Q1 is certain but Q2 is not (the null breaks the join).
inline const char* kNullJoinRule = "P(x) -> exists y: R(x,y).\n";
inline const char* kNullJoinDb = "P('c').\n";
inline const char* kLinearTc =
    "E(x,y) -> T(x,y).\n"
    "E(x,y), T(y,z) -> T(x,z).\n";
inline const char* kQuadraticTc =
    "E(x,y) -> T(x,y).\n"
    "T(x,y), T(y,z) -> T(x,z).\n";

}  // namespace testsup

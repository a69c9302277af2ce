#pragma once

#include <stdexcept>
#include <string>

#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"

namespace pwlward::textio {

struct SourceSpan {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based
    std::size_t length = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourceSpan span)
        : std::runtime_error(message + " (line " + std::to_string(span.line) + ", column " +
                             std::to_string(span.column) + ")"),
          span_(span) {}

    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

// program := (tgd ".")* ; comments run from '%' to end of line.
// Constants start uppercase or are single-quoted, variables start lowercase
// or '_'; a bare "_" is an anonymous variable, fresh per occurrence.
Program parse_program(const std::string& text);

// facts := (atom ".")*, ground atoms over constants only.
Database parse_database(const std::string& text);

// query := atom ":-" atom ("," atom)* "." ; the head predicate must not occur
// in `schema` when one is supplied.
CQ parse_query(const std::string& text, const Program* schema = nullptr);

std::string serialize_program(const Program& p);
std::string serialize_database(const Database& d);
std::string serialize_query(const CQ& q);

// One rule on one line, internal variable names sanitized so the text reparses.
std::string serialize_tgd(const TGD& rule);

}  // namespace pwlward::textio

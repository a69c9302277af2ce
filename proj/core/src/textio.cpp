#include "pwlward/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace pwlward::textio {

namespace {

enum class Tok { Ident, Quoted, LParen, RParen, Comma, Dot, Arrow, Entails, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*';
    }

    void advance() {
        skip_ws();
        SourceSpan span{line_, col_, 1};
        if (pos_ >= text_.size()) {
            cur_ = {Tok::End, "", span};
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) step();
            span.length = pos_ - start;
            cur_ = {Tok::Ident, text_.substr(start, pos_ - start), span};
            return;
        }
        if (c == '\'') {
            std::size_t start = pos_;
            step();
            while (pos_ < text_.size() && text_[pos_] != '\'' && text_[pos_] != '\n') step();
            if (pos_ >= text_.size() || text_[pos_] != '\'')
                throw ParseError("unterminated quoted constant", span);
            step();
            span.length = pos_ - start;
            cur_ = {Tok::Quoted, text_.substr(start + 1, pos_ - start - 2), span};
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            step();
            step();
            span.length = 2;
            cur_ = {Tok::Arrow, "->", span};
            return;
        }
        if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            step();
            step();
            span.length = 2;
            cur_ = {Tok::Entails, ":-", span};
            return;
        }
        step();
        switch (c) {
            case '(': cur_ = {Tok::LParen, "(", span}; return;
            case ')': cur_ = {Tok::RParen, ")", span}; return;
            case ',': cur_ = {Tok::Comma, ",", span}; return;
            case '.': cur_ = {Tok::Dot, ".", span}; return;
            case ':': cur_ = {Tok::Colon, ":", span}; return;
            default: throw ParseError(std::string("unexpected character '") + c + "'", span);
        }
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') step();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                step();
            } else {
                break;
            }
        }
    }

    void step() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, col_ = 1;
    Token cur_{Tok::End, "", {}};
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    bool at_end() const { return lex_.peek().kind == Tok::End; }

    Token expect(Tok kind, const std::string& what) {
        if (lex_.peek().kind != kind)
            throw ParseError("expected " + what + ", found '" + lex_.peek().text + "'",
                             lex_.peek().span);
        return lex_.take();
    }

    // term := variable | constant | '_' (fresh anonymous variable)
    Term parse_term() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Quoted) return Term::constant(lex_.take().text);
        Token tok = expect(Tok::Ident, "a term");
        if (tok.text == "_")
            return Term::variable("_#" + std::to_string(++anon_counter_));
        char c = tok.text[0];
        if (std::isupper(static_cast<unsigned char>(c))) return Term::constant(tok.text);
        return Term::variable(tok.text);
    }

    Atom parse_atom() {
        Token name = expect(Tok::Ident, "a predicate name");
        std::vector<Term> args;
        if (lex_.peek().kind == Tok::LParen) {
            lex_.take();
            args.push_back(parse_term());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                args.push_back(parse_term());
            }
            expect(Tok::RParen, "')'");
        }
        check_arity(name.text, args.size(), name.span);
        return Atom(name.text, std::move(args));
    }

    std::vector<Atom> parse_atom_list() {
        std::vector<Atom> atoms;
        atoms.push_back(parse_atom());
        while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            atoms.push_back(parse_atom());
        }
        return atoms;
    }

    TGD parse_tgd() {
        SourceSpan rule_span = lex_.peek().span;
        TGD rule;
        rule.body = parse_atom_list();
        expect(Tok::Arrow, "'->'");
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "exists") {
            lex_.take();
            rule.existentials.push_back(parse_existential_var());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                rule.existentials.push_back(parse_existential_var());
            }
            expect(Tok::Colon, "':'");
        }
        rule.head = parse_atom_list();
        expect(Tok::Dot, "'.'");
        validate_rule(rule, rule_span);
        return rule;
    }

    Term parse_existential_var() {
        Token tok = expect(Tok::Ident, "a variable");
        if (tok.text == "_" || std::isupper(static_cast<unsigned char>(tok.text[0])))
            throw ParseError("existentially quantified name must be a named variable", tok.span);
        return Term::variable(tok.text);
    }

    void check_arity(const std::string& pred, std::size_t arity, SourceSpan span) {
        auto [it, fresh] = arities_.emplace(pred, arity);
        if (!fresh && it->second != arity)
            throw ParseError("arity mismatch for predicate " + pred + ": declared as " +
                                 std::to_string(it->second) + ", used with " +
                                 std::to_string(arity),
                             span);
    }

    void validate_rule(const TGD& rule, SourceSpan span) {
        std::unordered_set<Term> body_vars;
        for (const Atom& a : rule.body)
            for (const Term& t : a.args)
                if (t.is_variable()) body_vars.insert(t);
        std::unordered_set<Term> existential(rule.existentials.begin(), rule.existentials.end());
        for (const Term& x : rule.existentials)
            if (body_vars.count(x))
                throw ParseError("existential variable " + x.name() + " used in rule body", span);
        for (const Atom& a : rule.head)
            for (const Term& t : a.args)
                if (t.is_variable() && !body_vars.count(t) && !existential.count(t))
                    throw ParseError("head variable " + t.name() +
                                         " neither occurs in the body nor is declared with "
                                         "'exists'",
                                     span);
    }

    SourceSpan here() const { return lex_.peek().span; }

private:
    Lexer lex_;
    std::map<std::string, std::size_t> arities_;
    std::size_t anon_counter_ = 0;
};

bool bare_constant_ok(const std::string& name) {
    if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*';
    });
}

bool variable_name_ok(const std::string& name) {
    if (name.empty()) return false;
    char c = name[0];
    if (!std::islower(static_cast<unsigned char>(c)) && c != '_') return false;
    if (name == "_") return false;
    if (name == "exists") return false;
    return std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '*';
    });
}

std::string term_text(Term t, const std::unordered_map<Term, std::string>& renames) {
    if (t.is_null()) return t.to_string();
    if (t.is_constant())
        return bare_constant_ok(t.name()) ? t.name() : "'" + t.name() + "'";
    auto it = renames.find(t);
    return it == renames.end() ? t.name() : it->second;
}

std::string atom_text(const Atom& a, const std::unordered_map<Term, std::string>& renames) {
    std::string s = a.predicate_name();
    if (a.args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ',';
        s += term_text(a.args[i], renames);
    }
    s += ')';
    return s;
}

// Fresh reparseable names for variables whose internal names would not lex.
std::unordered_map<Term, std::string> sanitize_variables(const std::vector<Term>& vars) {
    std::unordered_set<std::string> used;
    for (const Term& v : vars)
        if (variable_name_ok(v.name())) used.insert(v.name());
    std::unordered_map<Term, std::string> renames;
    std::size_t next = 0;
    for (const Term& v : vars) {
        if (variable_name_ok(v.name())) continue;
        std::string candidate;
        do {
            candidate = "av" + std::to_string(++next);
        } while (used.count(candidate));
        used.insert(candidate);
        renames.emplace(v, candidate);
    }
    return renames;
}

}  // namespace

Program parse_program(const std::string& text) {
    Parser p(text);
    Program out;
    while (!p.at_end()) out.add_rule(p.parse_tgd());
    return out;
}

Database parse_database(const std::string& text) {
    Parser p(text);
    Database out;
    while (!p.at_end()) {
        SourceSpan span = p.here();
        Atom a = p.parse_atom();
        p.expect(Tok::Dot, "'.'");
        for (const Term& t : a.args)
            if (!t.is_constant())
                throw ParseError("variable in database fact " + a.predicate_name(), span);
        out.insert(std::move(a));
    }
    return out;
}

CQ parse_query(const std::string& text, const Program* schema) {
    Parser p(text);
    SourceSpan span = p.here();
    Atom head = p.parse_atom();
    p.expect(Tok::Entails, "':-'");
    CQ q;
    q.head_predicate = head.predicate;
    q.outputs = std::move(head.args);
    q.body = p.parse_atom_list();
    p.expect(Tok::Dot, "'.'");
    if (!p.at_end()) throw ParseError("trailing input after query", p.here());

    std::unordered_set<Term> body_vars;
    for (const Atom& a : q.body)
        for (const Term& t : a.args)
            if (t.is_variable()) body_vars.insert(t);
    for (const Term& t : q.outputs)
        if (t.is_variable() && !body_vars.count(t))
            throw ParseError("output variable " + t.name() + " does not occur in the query body",
                             span);
    if (schema) {
        if (schema->declares(q.head_predicate))
            throw ParseError("query head predicate " + Symbols::name(q.head_predicate) +
                                 " clashes with the program schema",
                             span);
        for (const Atom& a : q.body) {
            auto arity = schema->arity(a.predicate);
            if (arity && *arity != a.arity())
                throw ParseError("arity mismatch for predicate " + a.predicate_name() +
                                     " against the program schema",
                                 span);
        }
    }
    return q;
}

std::string serialize_tgd(const TGD& rule) {
    std::vector<Term> vars;
    std::unordered_set<Term> seen;
    auto collect = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms)
            for (const Term& t : a.args)
                if (t.is_variable() && seen.insert(t).second) vars.push_back(t);
    };
    collect(rule.body);
    collect(rule.head);
    auto renames = sanitize_variables(vars);

    std::string s;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i) s += ", ";
        s += atom_text(rule.body[i], renames);
    }
    s += " -> ";
    if (!rule.existentials.empty()) {
        s += "exists ";
        for (std::size_t i = 0; i < rule.existentials.size(); ++i) {
            if (i) s += ",";
            s += term_text(rule.existentials[i], renames);
        }
        s += ": ";
    }
    for (std::size_t i = 0; i < rule.head.size(); ++i) {
        if (i) s += ", ";
        s += atom_text(rule.head[i], renames);
    }
    s += ".";
    return s;
}

std::string serialize_program(const Program& p) {
    std::string out;
    for (const TGD& rule : p.rules()) {
        out += serialize_tgd(rule);
        out += '\n';
    }
    return out;
}

std::string serialize_database(const Database& d) {
    std::string out;
    for (const Atom& a : d.sorted_facts()) {
        out += atom_text(a, {});
        out += ".\n";
    }
    return out;
}

std::string serialize_query(const CQ& q) {
    std::vector<Term> vars;
    std::unordered_set<Term> seen;
    for (const Term& t : q.outputs)
        if (t.is_variable() && seen.insert(t).second) vars.push_back(t);
    for (const Atom& a : q.body)
        for (const Term& t : a.args)
            if (t.is_variable() && seen.insert(t).second) vars.push_back(t);
    auto renames = sanitize_variables(vars);

    std::string s = Symbols::name(q.head_predicate);
    if (!q.outputs.empty()) {
        s += '(';
        for (std::size_t i = 0; i < q.outputs.size(); ++i) {
            if (i) s += ',';
            s += term_text(q.outputs[i], renames);
        }
        s += ')';
    }
    s += " :- ";
    for (std::size_t i = 0; i < q.body.size(); ++i) {
        if (i) s += ", ";
        s += atom_text(q.body[i], renames);
    }
    s += ".";
    return s;
}

}  // namespace pwlward::textio

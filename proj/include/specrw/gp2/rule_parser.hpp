#pragma once

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/gp2/rule.hpp"

namespace specrw::gp2 {

struct RuleParseError {
    enum class Kind { Syntax, UndeclaredVariable, InterfaceMismatch, UnresolvedRule };

    Kind kind = Kind::Syntax;
    int line = 1;
    int col = 1;
    std::string message;

    std::string to_string() const {
        const char* k = "syntax error";
        switch (kind) {
        case Kind::UndeclaredVariable: k = "undeclared variable"; break;
        case Kind::InterfaceMismatch: k = "interface mismatch"; break;
        case Kind::UnresolvedRule: k = "unresolved rule"; break;
        default: break;
        }
        return std::string(k) + " at " + std::to_string(line) + ":" + std::to_string(col) + ": " +
               message;
    }
};

namespace detail {

struct RuleToken {
    enum class Kind { Ident, Int, String, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    long long int_value = 0;
    int line = 1, col = 1;

    bool is_symbol(const std::string& s) const { return kind == Kind::Symbol && text == s; }
    bool is_ident(const std::string& s) const { return kind == Kind::Ident && text == s; }
};

class RuleParser {
public:
    Result<RuleFile, RuleParseError> parse(const std::string& text) {
        try {
            lex(text);
            RuleFile file;
            bool have_main = false;
            while (peek().kind != RuleToken::Kind::End) {
                if (peek().is_ident("Main")) {
                    if (have_main) fail("duplicate Main program");
                    next();
                    expect_symbol("=");
                    file.main = parse_seq();
                    have_main = true;
                    continue;
                }
                file.rules.push_back(parse_rule());
            }
            if (!have_main) fail("missing Main program");
            validate(file);
            return file;
        } catch (RuleParseError& e) {
            return e;
        }
    }

private:
    std::vector<RuleToken> tokens_;
    std::size_t pos_ = 0;

    // ---- lexing ----

    void lex(const std::string& raw) {
        // `\\`-prefixed lines are comments; blank them to keep positions stable
        std::string text = raw;
        std::size_t line_start = 0;
        while (line_start < text.size()) {
            std::size_t line_end = text.find('\n', line_start);
            if (line_end == std::string::npos) line_end = text.size();
            std::size_t k = line_start;
            while (k < line_end && (text[k] == ' ' || text[k] == '\t')) ++k;
            if (k + 1 < line_end && text[k] == '\\' && text[k + 1] == '\\')
                for (std::size_t j = line_start; j < line_end; ++j) text[j] = ' ';
            line_start = line_end + 1;
        }

        int line = 1, col = 1;
        std::size_t i = 0;
        auto push = [&](RuleToken t) { tokens_.push_back(std::move(t)); };
        auto step = [&](std::size_t n) {
            for (std::size_t j = 0; j < n; ++j) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                ++i;
            }
        };
        while (i < text.size()) {
            char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                step(1);
                continue;
            }
            RuleToken t;
            t.line = line;
            t.col = col;
            if (c == '"') {
                t.kind = RuleToken::Kind::String;
                std::size_t consumed = 1;
                std::string s;
                while (i + consumed < text.size() && text[i + consumed] != '"') {
                    char d = text[i + consumed];
                    if (d == '\\' && i + consumed + 1 < text.size()) {
                        ++consumed;
                        d = text[i + consumed];
                    }
                    s += d;
                    ++consumed;
                }
                if (i + consumed >= text.size())
                    throw RuleParseError{RuleParseError::Kind::Syntax, line, col,
                                         "unterminated string"};
                ++consumed;
                t.text = s;
                push(t);
                step(consumed);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = RuleToken::Kind::Int;
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                t.text = text.substr(i, j - i);
                t.int_value = std::stoll(t.text);
                push(t);
                step(j - i);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = RuleToken::Kind::Ident;
                std::size_t j = i;
                while (j < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                    ++j;
                t.text = text.substr(i, j - i);
                push(t);
                step(j - i);
                continue;
            }
            static const char* symbols[] = {"=>", "(", ")", "{", "}", "[", "]",
                                            ",",  ";", ":", "#", "=", "|", "!", "-"};
            bool matched = false;
            for (const char* s : symbols) {
                std::size_t len = std::char_traits<char>::length(s);
                if (text.compare(i, len, s) == 0) {
                    t.kind = RuleToken::Kind::Symbol;
                    t.text = s;
                    push(t);
                    step(len);
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw RuleParseError{RuleParseError::Kind::Syntax, line, col,
                                     std::string("unexpected character '") + c + "'"};
        }
        RuleToken end;
        end.kind = RuleToken::Kind::End;
        end.line = line;
        end.col = col;
        push(end);
    }

    const RuleToken& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }
    const RuleToken& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg,
                           RuleParseError::Kind kind = RuleParseError::Kind::Syntax) const {
        throw RuleParseError{kind, peek().line, peek().col, msg};
    }
    void expect_symbol(const std::string& s) {
        if (!peek().is_symbol(s)) fail("expected '" + s + "', found '" + peek().text + "'");
        next();
    }
    bool accept_symbol(const std::string& s) {
        if (peek().is_symbol(s)) {
            next();
            return true;
        }
        return false;
    }
    std::string expect_ident() {
        if (peek().kind != RuleToken::Kind::Ident)
            fail("expected an identifier, found '" + peek().text + "'");
        return next().text;
    }

    // ---- programs ----

    RuleProgram parse_seq() {
        std::vector<RuleProgram> steps;
        steps.push_back(parse_postfix());
        while (accept_symbol(";")) steps.push_back(parse_postfix());
        if (steps.size() == 1) return steps[0];
        return RuleProgram::seq(std::move(steps));
    }

    RuleProgram parse_postfix() {
        RuleProgram p = parse_atom();
        while (accept_symbol("!")) p = RuleProgram::loop(std::move(p));
        return p;
    }

    RuleProgram parse_atom() {
        if (peek().is_ident("try")) {
            next();
            expect_symbol("(");
            RuleProgram body = parse_seq();
            expect_symbol(")");
            return RuleProgram::try_(std::move(body));
        }
        if (accept_symbol("(")) {
            RuleProgram body = parse_seq();
            expect_symbol(")");
            return body;
        }
        if (accept_symbol("{")) {
            std::vector<std::string> names;
            names.push_back(expect_ident());
            while (accept_symbol(",")) names.push_back(expect_ident());
            expect_symbol("}");
            return RuleProgram::choice(std::move(names));
        }
        if (peek().kind == RuleToken::Kind::Ident) return RuleProgram::call(next().text);
        fail("expected a rule name, '{', '(' or 'try'");
    }

    // ---- rules ----

    Rule parse_rule() {
        Rule rule;
        rule.name = expect_ident();
        expect_symbol("(");
        if (!peek().is_symbol(")")) {
            while (true) {
                std::vector<std::string> group;
                group.push_back(expect_ident());
                while (accept_symbol(",")) group.push_back(expect_ident());
                expect_symbol(":");
                std::string type = expect_ident();
                VarType vt;
                if (type == "string") vt = VarType::String;
                else if (type == "int") vt = VarType::Int;
                else if (type == "any") vt = VarType::Any;
                else fail("unknown variable type '" + type + "'");
                for (auto& g : group) rule.params.emplace_back(g, vt);
                if (accept_symbol(";")) continue;
                break;
            }
        }
        expect_symbol(")");
        rule.lhs = parse_graph();
        expect_symbol("=>");
        rule.rhs = parse_graph();
        if (!peek().is_ident("interface")) fail("expected 'interface'");
        next();
        expect_symbol("=");
        expect_symbol("{");
        if (!peek().is_symbol("}")) {
            rule.interface.insert(expect_ident());
            while (accept_symbol(",")) rule.interface.insert(expect_ident());
        }
        expect_symbol("}");
        return rule;
    }

    LabelPattern parse_label() {
        if (peek().kind == RuleToken::Kind::String)
            return LabelPattern::lit(graph::str_atom(next().text));
        if (peek().kind == RuleToken::Kind::Int)
            return LabelPattern::lit(graph::int_atom(next().int_value));
        if (peek().is_symbol("-")) {
            next();
            if (peek().kind != RuleToken::Kind::Int) fail("expected an integer after '-'");
            return LabelPattern::lit(graph::int_atom(-next().int_value));
        }
        if (peek().kind == RuleToken::Kind::Ident) return LabelPattern::variable(next().text);
        fail("expected a label (string, integer or variable)");
    }

    MarkPattern parse_mark() {
        if (!accept_symbol("#")) return MarkPattern::MustBeNone;
        std::string m = expect_ident();
        if (m == "red") return MarkPattern::MustBeRed;
        if (m == "any") return MarkPattern::AnyMark;
        fail("unknown mark '" + m + "'");
    }

    PatternGraph parse_graph() {
        PatternGraph g;
        expect_symbol("[");
        while (peek().is_symbol("(")) {
            next();
            PatternNode n;
            n.id = expect_ident();
            expect_symbol(",");
            n.label = parse_label();
            n.mark = parse_mark();
            expect_symbol(")");
            g.nodes.push_back(std::move(n));
        }
        expect_symbol("|");
        while (peek().is_symbol("(")) {
            next();
            PatternEdge e;
            e.id = expect_ident();
            expect_symbol(",");
            e.src = expect_ident();
            expect_symbol(",");
            e.tgt = expect_ident();
            expect_symbol(",");
            e.label = parse_label();
            expect_symbol(")");
            g.edges.push_back(std::move(e));
        }
        expect_symbol("]");
        return g;
    }

    // ---- validation ----

    [[noreturn]] void vfail(const std::string& msg, RuleParseError::Kind kind) const {
        throw RuleParseError{kind, 0, 0, msg};
    }

    void validate(const RuleFile& file) {
        std::set<std::string> names;
        for (const auto& r : file.rules) {
            if (!names.insert(r.name).second)
                vfail("duplicate rule '" + r.name + "'", RuleParseError::Kind::Syntax);
            validate_rule(r);
        }
        validate_program(file, file.main);
    }

    void validate_program(const RuleFile& file, const RuleProgram& p) {
        switch (p.kind) {
        case RuleProgram::Kind::Call:
            if (!file.rule(p.rule_name))
                vfail("program calls unknown rule '" + p.rule_name + "'",
                      RuleParseError::Kind::UnresolvedRule);
            break;
        case RuleProgram::Kind::Choice:
            for (const auto& n : p.choices)
                if (!file.rule(n))
                    vfail("program calls unknown rule '" + n + "'",
                          RuleParseError::Kind::UnresolvedRule);
            break;
        default:
            for (const auto& c : p.children) validate_program(file, c);
        }
    }

    void validate_graph(const Rule& rule, const PatternGraph& g, const char* side,
                        std::set<std::string>& vars_seen) {
        std::set<std::string> node_ids, edge_ids;
        for (const auto& n : g.nodes) {
            if (!node_ids.insert(n.id).second)
                vfail("duplicate node id '" + n.id + "' in " + side + " of '" + rule.name + "'",
                      RuleParseError::Kind::Syntax);
            if (n.label.is_var) {
                if (!rule.has_param(n.label.var))
                    vfail("variable '" + n.label.var + "' in '" + rule.name + "' is not a parameter",
                          RuleParseError::Kind::UndeclaredVariable);
                vars_seen.insert(n.label.var);
            }
        }
        for (const auto& e : g.edges) {
            if (!edge_ids.insert(e.id).second)
                vfail("duplicate edge id '" + e.id + "' in " + side + " of '" + rule.name + "'",
                      RuleParseError::Kind::Syntax);
            if (!node_ids.count(e.src) || !node_ids.count(e.tgt))
                vfail("edge '" + e.id + "' in " + side + " of '" + rule.name +
                          "' references a missing node",
                      RuleParseError::Kind::Syntax);
            if (e.label.is_var) {
                if (!rule.has_param(e.label.var))
                    vfail("variable '" + e.label.var + "' in '" + rule.name + "' is not a parameter",
                          RuleParseError::Kind::UndeclaredVariable);
                vars_seen.insert(e.label.var);
            }
        }
    }

    void validate_rule(const Rule& rule) {
        std::set<std::string> lhs_vars, rhs_vars;
        validate_graph(rule, rule.lhs, "LHS", lhs_vars);
        validate_graph(rule, rule.rhs, "RHS", rhs_vars);
        for (const auto& v : rhs_vars)
            if (!lhs_vars.count(v))
                vfail("RHS variable '" + v + "' of '" + rule.name + "' does not occur in the LHS",
                      RuleParseError::Kind::UndeclaredVariable);

        std::set<std::string> lhs_nodes, rhs_nodes;
        for (const auto& n : rule.lhs.nodes) lhs_nodes.insert(n.id);
        for (const auto& n : rule.rhs.nodes) rhs_nodes.insert(n.id);
        for (const auto& i : rule.interface)
            if (!lhs_nodes.count(i) || !rhs_nodes.count(i))
                vfail("interface node '" + i + "' of '" + rule.name +
                          "' must appear on both sides",
                      RuleParseError::Kind::InterfaceMismatch);
        for (const auto& id : lhs_nodes)
            if (rhs_nodes.count(id) && !rule.interface.count(id))
                vfail("node '" + id + "' of '" + rule.name +
                          "' appears on both sides but not in the interface",
                      RuleParseError::Kind::InterfaceMismatch);
        // an edge id on both sides is preserved in place; endpoints must agree
        for (const auto& e : rule.rhs.edges) {
            const PatternEdge* l = rule.lhs.edge(e.id);
            if (l && (l->src != e.src || l->tgt != e.tgt))
                vfail("edge '" + e.id + "' of '" + rule.name +
                          "' changes endpoints between sides; use a fresh id",
                      RuleParseError::Kind::InterfaceMismatch);
        }
        // RHS marks must be concrete
        for (const auto& n : rule.rhs.nodes)
            if (n.mark == MarkPattern::AnyMark)
                vfail("RHS node '" + n.id + "' of '" + rule.name + "' cannot use mark 'any'",
                      RuleParseError::Kind::Syntax);
        // a deleted node's incident LHS edges define its dangling boundary;
        // nothing to validate here, but RHS edges must connect RHS nodes
        // (already checked in validate_graph)
    }
};

} // namespace detail

/// Parses a rule file: a `Main = <program>` line plus rule declarations
/// `name(params)[LHS]=>[RHS] interface = {..}`. `\\`-prefixed lines are
/// comments. Unused parameters are accepted; RHS-only variables are not.
inline Result<RuleFile, RuleParseError> parse_rule_file(const std::string& text) {
    detail::RuleParser p;
    return p.parse(text);
}

} // namespace specrw::gp2

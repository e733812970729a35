#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/lexer.hpp"
#include "specrw/essence/parser.hpp"
#include "specrw/eval/value.hpp"

namespace specrw::essence {

/// Ordered name -> value bindings from a .param or .solution file.
struct ParamFile {
    std::vector<std::pair<std::string, eval::Value>> bindings;

    const eval::Value* find(const std::string& name) const {
        for (const auto& [n, v] : bindings)
            if (n == name) return &v;
        return nullptr;
    }
};

namespace detail {

class ValueParser {
public:
    ValueParser(const std::vector<Token>& tokens, std::size_t& pos) : tokens_(tokens), pos_(pos) {}

    eval::Value parse_value() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Int) {
            next();
            return eval::Value::integer(t.int_value);
        }
        if (t.is_symbol("-") && peek(1).kind == Token::Kind::Int) {
            next();
            return eval::Value::integer(-next().int_value);
        }
        if (t.is_symbol("(")) {
            next();
            std::vector<eval::Value> comps;
            comps.push_back(parse_value());
            while (accept(",")) comps.push_back(parse_value());
            expect(")");
            return eval::Value::tuple(std::move(comps));
        }
        if (t.is_symbol("{")) {
            next();
            std::vector<eval::Value> elems;
            if (!peek().is_symbol("}")) {
                elems.push_back(parse_value());
                while (accept(",")) elems.push_back(parse_value());
            }
            expect("}");
            return eval::Value::set(std::move(elems));
        }
        if (t.is_ident("relation")) {
            next();
            expect("(");
            std::vector<eval::Value> tuples;
            if (!peek().is_symbol(")")) {
                tuples.push_back(parse_value());
                while (accept(",")) tuples.push_back(parse_value());
            }
            expect(")");
            for (const auto& tup : tuples)
                if (tup.kind != eval::Value::Kind::Tuple)
                    fail("relation elements must be tuples");
            return eval::Value::relation(std::move(tuples));
        }
        if (t.is_ident("function")) {
            next();
            expect("(");
            std::vector<std::pair<eval::Value, eval::Value>> graph;
            if (!peek().is_symbol(")")) {
                do {
                    eval::Value k = parse_value();
                    if (!peek().is_symbol("-->")) fail("expected '-->' in function literal");
                    next();
                    eval::Value v = parse_value();
                    graph.emplace_back(std::move(k), std::move(v));
                } while (accept(","));
            }
            expect(")");
            return eval::Value::function(std::move(graph));
        }
        fail("expected a value literal, found '" + t.text + "'");
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool accept(const std::string& s) {
        if (peek().is_symbol(s)) {
            next();
            return true;
        }
        return false;
    }
    void expect(const std::string& s) {
        if (!peek().is_symbol(s)) fail("expected '" + s + "', found '" + peek().text + "'");
        next();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        SpecError e;
        e.kind = SpecError::Kind::Parse;
        e.line = peek().line;
        e.col = peek().col;
        e.message = msg;
        throw e;
    }

private:
    const std::vector<Token>& tokens_;
    std::size_t& pos_;
};

} // namespace detail

/// Parses a single value literal (integers, tuples, `{..}` sets,
/// `relation(..)`, `function(k --> v, ..)`).
inline Result<eval::Value, SpecError> parse_value_literal(const std::string& text) {
    TokenStream stream = lex(text);
    if (stream.failed)
        return SpecError{SpecError::Kind::Parse, stream.error.line, stream.error.col,
                         stream.error.message, {}};
    std::size_t pos = 0;
    detail::ValueParser p(stream.tokens, pos);
    try {
        eval::Value v = p.parse_value();
        if (stream.tokens[pos].kind != Token::Kind::End) p.fail("trailing input after value");
        return v;
    } catch (SpecError& e) {
        return e;
    }
}

/// Parses a parameter/solution file: a sequence of
/// `letting <name> be <value-literal>` lines. `$` comments are ignored.
inline Result<ParamFile, SpecError> parse_param_file(const std::string& text) {
    TokenStream stream = lex(text);
    if (stream.failed)
        return SpecError{SpecError::Kind::Parse, stream.error.line, stream.error.col,
                         stream.error.message, {}};
    ParamFile out;
    std::size_t pos = 0;
    detail::ValueParser p(stream.tokens, pos);
    try {
        while (stream.tokens[pos].kind != Token::Kind::End) {
            if (!stream.tokens[pos].is_ident("letting")) p.fail("expected 'letting'");
            ++pos;
            if (stream.tokens[pos].kind != Token::Kind::Ident) p.fail("expected a name");
            std::string name = stream.tokens[pos++].text;
            if (!stream.tokens[pos].is_ident("be")) p.fail("expected 'be'");
            ++pos;
            out.bindings.emplace_back(name, p.parse_value());
        }
        return out;
    } catch (SpecError& e) {
        return e;
    }
}

inline std::string print_param_file(const ParamFile& file) {
    std::string out;
    for (const auto& [name, value] : file.bindings)
        out += "letting " + name + " be " + eval::print_value(value) + "\n";
    return out;
}

} // namespace specrw::essence

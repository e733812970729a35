#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/ast.hpp"
#include "specrw/essence/lexer.hpp"
#include "specrw/essence/scope.hpp"

namespace specrw::essence {

struct SpecError {
    enum class Kind { Parse, Scope };
    Kind kind = Kind::Parse;
    int line = 0;
    int col = 0;
    std::string message;
    std::set<std::string> expected;

    std::string to_string() const {
        std::string s = (kind == Kind::Parse ? "parse error" : "scope error");
        if (line > 0) s += " at " + std::to_string(line) + ":" + std::to_string(col);
        s += ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            bool first = true;
            for (const auto& e : expected) {
                if (!first) s += ", ";
                s += e;
                first = false;
            }
            s += ")";
        }
        return s;
    }
};

namespace detail {

inline const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "given", "letting", "be",  "domain",    "find",  "such",    "that",
        "relation", "set",  "function", "tuple", "of",  "int",     "forAll",
        "sum",   "in",      "intersect", "toInt", "defined",
    };
    return kw;
}

class SpecParser {
public:
    SpecParser(TokenStream stream) : stream_(std::move(stream)) {}

    Result<Specification, SpecError> parse(const std::string& name) {
        Specification spec;
        spec.name = name;
        // (token index, index of the first Declaration the written line expands to)
        std::vector<std::pair<std::size_t, std::size_t>> decl_starts;
        std::vector<std::size_t> constraint_starts;

        try {
            while (!at_end() && !(peek().is_ident("such"))) {
                decl_starts.emplace_back(pos_, spec.declarations.size());
                parse_declaration_into(spec);
            }
            if (peek().is_ident("such")) {
                expect_ident("such");
                expect_ident("that");
                while (true) {
                    if (at_end()) break; // allow `such that` with trailing comma before EOF
                    constraint_starts.push_back(pos_);
                    Constraint c;
                    c.expr = parse_expr();
                    spec.constraints.push_back(std::move(c));
                    if (peek().is_symbol(",")) {
                        next();
                        if (at_end()) break; // trailing comma
                        continue;
                    }
                    break;
                }
            }
            if (!at_end()) fail("trailing input after specification", {"end of input"});
        } catch (SpecError& e) {
            return e;
        }

        attach_comments(spec, decl_starts, constraint_starts);

        if (auto issue = scope_check(spec)) {
            SpecError e;
            e.kind = SpecError::Kind::Scope;
            e.message = issue->message;
            return e;
        }
        return spec;
    }

private:
    TokenStream stream_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= stream_.tokens.size()) i = stream_.tokens.size() - 1;
        return stream_.tokens[i];
    }
    const Token& next() { return stream_.tokens[pos_ < stream_.tokens.size() - 1 ? pos_++ : pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected = {}) const {
        SpecError e;
        e.kind = SpecError::Kind::Parse;
        e.line = peek().line;
        e.col = peek().col;
        e.message = msg;
        e.expected = std::move(expected);
        throw e;
    }

    void expect_symbol(const std::string& s) {
        if (!peek().is_symbol(s)) fail("found '" + peek().text + "'", {"'" + s + "'"});
        next();
    }
    void expect_ident(const std::string& s) {
        if (!peek().is_ident(s)) fail("found '" + peek().text + "'", {"'" + s + "'"});
        next();
    }
    bool accept_symbol(const std::string& s) {
        if (peek().is_symbol(s)) {
            next();
            return true;
        }
        return false;
    }

    std::string parse_name() {
        if (peek().kind != Token::Kind::Ident) fail("found '" + peek().text + "'", {"identifier"});
        if (keywords().count(peek().text))
            fail("keyword '" + peek().text + "' cannot be used as an identifier", {"identifier"});
        return next().text;
    }

    // ---- declarations ----

    void parse_declaration_into(Specification& spec) {
        if (peek().is_ident("given")) {
            next();
            auto names = parse_name_list();
            expect_symbol(":");
            Domain d = parse_domain();
            for (auto& n : names) {
                Declaration decl;
                decl.kind = Declaration::Kind::Given;
                decl.name = n;
                decl.domain.emplace(d);
                spec.declarations.push_back(std::move(decl));
            }
            return;
        }
        if (peek().is_ident("letting")) {
            next();
            auto names = parse_name_list();
            expect_ident("be");
            if (peek().is_ident("domain")) {
                next();
                Domain d = parse_domain();
                for (auto& n : names) {
                    Declaration decl;
                    decl.kind = Declaration::Kind::LettingDomain;
                    decl.name = n;
                    decl.domain.emplace(d);
                    spec.declarations.push_back(std::move(decl));
                }
            } else {
                Expr e = parse_expr();
                for (auto& n : names) {
                    Declaration decl;
                    decl.kind = Declaration::Kind::LettingValue;
                    decl.name = n;
                    decl.value.emplace(e);
                    spec.declarations.push_back(std::move(decl));
                }
            }
            return;
        }
        if (peek().is_ident("find")) {
            next();
            auto names = parse_name_list();
            expect_symbol(":");
            Domain d = parse_domain();
            for (auto& n : names) {
                Declaration decl;
                decl.kind = Declaration::Kind::Find;
                decl.name = n;
                decl.domain.emplace(d);
                spec.declarations.push_back(std::move(decl));
            }
            return;
        }
        fail("found '" + peek().text + "'", {"'given'", "'letting'", "'find'", "'such that'"});
    }

    std::vector<std::string> parse_name_list() {
        std::vector<std::string> names;
        names.push_back(parse_name());
        while (accept_symbol(",")) names.push_back(parse_name());
        return names;
    }

    // ---- domains ----

    Domain parse_domain() {
        Domain d;
        if (peek().is_ident("int")) {
            next();
            if (accept_symbol("(")) {
                Box<Expr> lo, hi;
                if (!peek().is_symbol("..")) lo.emplace(parse_additive());
                expect_symbol("..");
                if (!peek().is_symbol(")")) hi.emplace(parse_additive());
                expect_symbol(")");
                if (!lo && !hi) {
                    d.kind = Domain::Kind::IntUnbounded; // int(..) normalizes to int
                } else {
                    d.kind = Domain::Kind::IntRange;
                    d.lo = std::move(lo);
                    d.hi = std::move(hi);
                }
            } else {
                d.kind = Domain::Kind::IntUnbounded;
            }
            return d;
        }
        if (peek().is_ident("relation")) {
            next();
            d.kind = Domain::Kind::Relation;
            d.attrs = parse_attrs({"irreflexive", "size"});
            expect_ident("of");
            expect_symbol("(");
            d.components.push_back(parse_domain());
            expect_symbol("*");
            d.components.push_back(parse_domain());
            if (peek().is_symbol("*"))
                fail("only binary relations are supported in this subset", {"')'"});
            expect_symbol(")");
            return d;
        }
        if (peek().is_ident("set")) {
            next();
            d.kind = Domain::Kind::SetOf;
            d.attrs = parse_attrs({"size"});
            expect_ident("of");
            d.components.push_back(parse_domain());
            return d;
        }
        if (peek().is_ident("function")) {
            next();
            d.kind = Domain::Kind::FunctionOf;
            d.attrs = parse_attrs({"total"});
            d.components.push_back(parse_domain());
            expect_symbol("-->");
            d.components.push_back(parse_domain());
            return d;
        }
        if (peek().is_ident("tuple")) {
            next();
            d.kind = Domain::Kind::TupleOf;
            expect_symbol("(");
            d.components.push_back(parse_domain());
            while (accept_symbol(",")) d.components.push_back(parse_domain());
            expect_symbol(")");
            return d;
        }
        if (peek().kind == Token::Kind::Ident && !keywords().count(peek().text)) {
            d.kind = Domain::Kind::Ref;
            d.name = next().text;
            return d;
        }
        fail("found '" + peek().text + "'",
             {"'int'", "'relation'", "'set'", "'function'", "'tuple'", "domain name"});
    }

    std::vector<Attribute> parse_attrs(const std::set<std::string>& allowed) {
        std::vector<Attribute> attrs;
        if (!peek().is_symbol("(")) return attrs;
        next();
        while (true) {
            if (peek().kind != Token::Kind::Ident) fail("found '" + peek().text + "'", {"attribute name"});
            Attribute a;
            a.name = next().text;
            if (!allowed.count(a.name))
                fail("attribute '" + a.name + "' is not valid here");
            if (a.name == "size") {
                a.args.push_back(parse_additive());
            }
            attrs.push_back(std::move(a));
            if (accept_symbol(",")) continue;
            break;
        }
        expect_symbol(")");
        return attrs;
    }

    // ---- expressions ----
    //
    // Precedence, tightest first: application/indexing, !, *, + -, intersect,
    // comparison/in, /\, ->. Quantifier bodies extend as far right as possible.

    Expr parse_expr() { return parse_implies(); }

    Expr parse_implies() {
        Expr lhs = parse_conj();
        if (peek().is_symbol("->")) {
            next();
            return bin_op("->", std::move(lhs), parse_implies()); // right-assoc
        }
        return lhs;
    }

    Expr parse_conj() {
        Expr lhs = parse_cmp();
        while (peek().is_symbol("/\\")) {
            next();
            lhs = bin_op("/\\", std::move(lhs), parse_cmp());
        }
        return lhs;
    }

    Expr parse_cmp() {
        Expr lhs = parse_isect();
        if (peek().is_symbol("=") || peek().is_symbol("!=") || peek().is_ident("in")) {
            std::string op = next().text;
            return bin_op(op, std::move(lhs), parse_isect()); // non-associative
        }
        return lhs;
    }

    Expr parse_isect() {
        Expr lhs = parse_additive();
        while (peek().is_ident("intersect")) {
            next();
            lhs = bin_op("intersect", std::move(lhs), parse_additive());
        }
        return lhs;
    }

    Expr parse_additive() {
        Expr lhs = parse_term();
        while (peek().is_symbol("+") || peek().is_symbol("-")) {
            std::string op = next().text;
            lhs = bin_op(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (peek().is_symbol("*")) {
            next();
            lhs = bin_op("*", std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expr parse_unary() {
        if (peek().is_symbol("!")) {
            next();
            Expr e;
            e.kind = Expr::Kind::Not;
            e.children.push_back(parse_unary());
            return e;
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        Expr e = parse_primary();
        while (peek().is_symbol("[")) {
            next();
            if (peek().kind != Token::Kind::Int) fail("found '" + peek().text + "'", {"integer index"});
            long long ix = next().int_value;
            if (ix < 1) fail("tuple indices are 1-based");
            expect_symbol("]");
            Expr t;
            t.kind = Expr::Kind::TupleIndex;
            t.index = static_cast<int>(ix);
            t.children.push_back(std::move(e));
            e = std::move(t);
        }
        return e;
    }

    Expr parse_primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Int) {
            next();
            return int_lit(t.int_value);
        }
        if (t.is_symbol("-") && peek(1).kind == Token::Kind::Int) {
            next();
            return int_lit(-next().int_value);
        }
        if (t.is_symbol("{")) {
            next();
            expect_symbol("}");
            Expr e;
            e.kind = Expr::Kind::EmptySet;
            return e;
        }
        if (t.is_symbol("(")) {
            next();
            Expr first = parse_expr();
            if (peek().is_symbol(",")) {
                Expr tup;
                tup.kind = Expr::Kind::TupleLit;
                tup.children.push_back(std::move(first));
                while (accept_symbol(",")) tup.children.push_back(parse_expr());
                expect_symbol(")");
                return tup;
            }
            expect_symbol(")");
            return first;
        }
        if (t.is_ident("toInt") || t.is_ident("defined")) {
            std::string fn = next().text;
            expect_symbol("(");
            Expr inner = parse_expr();
            expect_symbol(")");
            Expr e;
            e.kind = (fn == "toInt") ? Expr::Kind::ToInt : Expr::Kind::Defined;
            e.children.push_back(std::move(inner));
            return e;
        }
        if (t.is_ident("forAll")) {
            next();
            Expr e;
            e.kind = Expr::Kind::ForAll;
            e.binders = parse_binders();
            e.source.emplace(parse_quant_source());
            expect_symbol(".");
            e.children.push_back(parse_expr());
            return e;
        }
        if (t.is_ident("sum")) {
            next();
            Expr e;
            e.kind = Expr::Kind::Sum;
            e.binders.push_back(parse_name());
            e.source.emplace(parse_quant_source());
            expect_symbol(".");
            e.children.push_back(parse_expr());
            return e;
        }
        if (t.kind == Token::Kind::Ident && !keywords().count(t.text)) {
            std::string name = next().text;
            if (peek().is_symbol("(")) {
                next();
                std::vector<Expr> args;
                if (!peek().is_symbol(")")) {
                    args.push_back(parse_expr());
                    while (accept_symbol(",")) args.push_back(parse_expr());
                }
                expect_symbol(")");
                return apply(name, std::move(args));
            }
            return ident(name);
        }
        fail("found '" + t.text + "'", {"expression"});
    }

    std::vector<std::string> parse_binders() {
        std::vector<std::string> binders;
        if (accept_symbol("(")) {
            binders.push_back(parse_name());
            expect_symbol(",");
            binders.push_back(parse_name());
            while (accept_symbol(",")) binders.push_back(parse_name());
            expect_symbol(")");
            return binders;
        }
        binders.push_back(parse_name());
        return binders;
    }

    QuantSource parse_quant_source() {
        QuantSource src;
        if (accept_symbol(":")) {
            src.over_domain = true;
            src.domain.emplace(parse_domain());
            return src;
        }
        if (peek().is_ident("in")) {
            next();
            src.over_domain = false;
            src.collection.emplace(parse_isect());
            return src;
        }
        fail("found '" + peek().text + "'", {"':'", "'in'"});
    }

    // ---- comments ----

    void attach_comments(Specification& spec,
                         const std::vector<std::pair<std::size_t, std::size_t>>& decl_starts,
                         const std::vector<std::size_t>& constraint_starts) {
        for (const auto& c : stream_.comments) {
            bool placed = false;
            for (std::size_t i = 0; i < decl_starts.size() && !placed; ++i) {
                if (c.next_token <= decl_starts[i].first) {
                    spec.declarations[decl_starts[i].second].leading_comments.push_back(c.text);
                    placed = true;
                }
            }
            for (std::size_t i = 0; i < constraint_starts.size() && !placed; ++i) {
                if (c.next_token <= constraint_starts[i]) {
                    spec.constraints[i].leading_comments.push_back(c.text);
                    placed = true;
                }
            }
            if (!placed) spec.trailing_comments.push_back(c.text);
        }
    }
};

} // namespace detail

/// Parses Essence-subset text. `name` becomes the specification name (by
/// convention the source file stem). Scope rules are checked as part of
/// parsing: every referenced identifier must be declared earlier or bound by
/// an enclosing quantifier, and declaration names must be unique.
inline Result<Specification, SpecError> parse_spec(const std::string& text,
                                                   const std::string& name = "spec") {
    TokenStream stream = lex(text);
    if (stream.failed) {
        SpecError e;
        e.kind = SpecError::Kind::Parse;
        e.line = stream.error.line;
        e.col = stream.error.col;
        e.message = stream.error.message;
        return e;
    }
    detail::SpecParser parser(std::move(stream));
    return parser.parse(name);
}

} // namespace specrw::essence

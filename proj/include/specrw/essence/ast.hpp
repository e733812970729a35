#pragma once

#include <string>
#include <vector>

#include "specrw/common/box.hpp"

namespace specrw::essence {

struct Expr;
struct Domain;

/// Domain attribute, e.g. `size n*k`, `irreflexive`, `total`.
/// `size` carries exactly one argument expression; the others carry none.
struct Attribute {
    std::string name;
    std::vector<Expr> args; // 0 or 1
};

struct Domain {
    enum class Kind {
        IntUnbounded, // int
        IntRange,     // int(lo..hi), either bound may be absent
        Ref,          // reference to a `letting ... be domain` name
        Relation,     // relation (attrs) of ( A * B ), binary in this subset
        SetOf,        // set (attrs) of D
        FunctionOf,   // function (attrs) A --> B
        TupleOf,      // tuple (D1, ..., Dk)
    };

    Kind kind = Kind::IntUnbounded;
    std::string name;                 // Ref
    Box<Expr> lo, hi;                 // IntRange
    std::vector<Attribute> attrs;     // Relation/SetOf/FunctionOf
    std::vector<Domain> components;   // Relation: {A,B}; SetOf: {elem};
                                      // FunctionOf: {from,to}; TupleOf: all
};

/// Quantifier source: either `: Domain` or `in Expr`.
struct QuantSource {
    bool over_domain = false;
    Box<Domain> domain;   // when over_domain
    Box<Expr> collection; // otherwise
};

struct Expr {
    enum class Kind {
        IntLit,
        Ident,
        TupleLit,
        EmptySet,
        BinOp,      // op in {+,-,*,=,!=,->,/\,in,intersect}
        Not,
        TupleIndex, // e[i], 1-based literal index
        Apply,      // f(args), f an identifier
        ForAll,
        Sum,
        ToInt,
        Defined,
    };

    Kind kind = Kind::IntLit;
    long long value = 0;            // IntLit
    int index = 0;                  // TupleIndex
    std::string name;               // Ident name, BinOp glyph, Apply fn name
    std::vector<std::string> binders; // ForAll (>=1), Sum (exactly 1)
    Box<QuantSource> source;        // ForAll/Sum
    std::vector<Expr> children;     // operands / elements / args / body
};

struct Declaration {
    enum class Kind { Given, LettingDomain, LettingValue, Find };

    Kind kind = Kind::Given;
    std::string name;
    Box<Domain> domain; // Given/LettingDomain/Find
    Box<Expr> value;    // LettingValue
    std::vector<std::string> leading_comments;
};

struct Constraint {
    Expr expr;
    std::vector<std::string> leading_comments;
};

/// A parsed specification. `name` is presentation metadata (the file stem);
/// it labels the root node of the graph encoding and is ignored by struct_eq.
struct Specification {
    std::string name = "spec";
    std::vector<Declaration> declarations;
    std::vector<Constraint> constraints;
    std::vector<std::string> trailing_comments;

    const Declaration* find_decl(const std::string& ident) const {
        for (const auto& d : declarations)
            if (d.name == ident) return &d;
        return nullptr;
    }
};

// ---- small construction helpers (used by tests and the converter) ----

inline Expr int_lit(long long v) {
    Expr e;
    e.kind = Expr::Kind::IntLit;
    e.value = v;
    return e;
}

inline Expr ident(std::string name) {
    Expr e;
    e.kind = Expr::Kind::Ident;
    e.name = std::move(name);
    return e;
}

inline Expr bin_op(std::string op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Expr::Kind::BinOp;
    e.name = std::move(op);
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

inline Expr apply(std::string fn, std::vector<Expr> args) {
    Expr e;
    e.kind = Expr::Kind::Apply;
    e.name = std::move(fn);
    e.children = std::move(args);
    return e;
}

} // namespace specrw::essence

#pragma once

#include <sstream>
#include <string>

#include "specrw/essence/ast.hpp"

namespace specrw::essence {

namespace detail {

// Binding tightness; anything tighter than the context prints without parens.
inline int expr_prec(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::ForAll:
    case Expr::Kind::Sum:
        return 10;
    case Expr::Kind::BinOp:
        if (e.name == "->") return 30;
        if (e.name == "/\\") return 40;
        if (e.name == "=" || e.name == "!=" || e.name == "in") return 50;
        if (e.name == "intersect") return 60;
        if (e.name == "+" || e.name == "-") return 70;
        return 80; // *
    case Expr::Kind::Not:
        return 90;
    default:
        return 100;
    }
}

inline bool spaced_op(const std::string& op) {
    return op != "+" && op != "-" && op != "*";
}

inline void print_expr_to(std::ostringstream& os, const Expr& e, int min_prec);
inline void print_domain_to(std::ostringstream& os, const Domain& d);

inline void print_quant_source_to(std::ostringstream& os, const QuantSource& src) {
    if (src.over_domain) {
        os << " : ";
        print_domain_to(os, *src.domain);
    } else {
        os << " in ";
        print_expr_to(os, *src.collection, 60); // an intersect-level operand
    }
}

inline void print_expr_to(std::ostringstream& os, const Expr& e, int min_prec) {
    int prec = expr_prec(e);
    bool parens = prec < min_prec;
    if (parens) os << "(";
    switch (e.kind) {
    case Expr::Kind::IntLit:
        os << e.value;
        break;
    case Expr::Kind::Ident:
        os << e.name;
        break;
    case Expr::Kind::TupleLit: {
        os << "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i) os << ",";
            print_expr_to(os, e.children[i], 0);
        }
        os << ")";
        break;
    }
    case Expr::Kind::EmptySet:
        os << "{}";
        break;
    case Expr::Kind::BinOp: {
        bool right_assoc = (e.name == "->");
        bool non_assoc = (e.name == "=" || e.name == "!=" || e.name == "in");
        int lmin = right_assoc || non_assoc ? prec + 1 : prec;
        int rmin = right_assoc ? prec : prec + 1;
        print_expr_to(os, e.children[0], lmin);
        if (spaced_op(e.name))
            os << " " << e.name << " ";
        else
            os << e.name;
        print_expr_to(os, e.children[1], rmin);
        break;
    }
    case Expr::Kind::Not:
        os << "!";
        print_expr_to(os, e.children[0], 90);
        break;
    case Expr::Kind::TupleIndex:
        print_expr_to(os, e.children[0], 100);
        os << "[" << e.index << "]";
        break;
    case Expr::Kind::Apply: {
        os << e.name << "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i) os << ", ";
            print_expr_to(os, e.children[i], 0);
        }
        os << ")";
        break;
    }
    case Expr::Kind::ForAll: {
        os << "forAll ";
        if (e.binders.size() == 1) {
            os << e.binders[0];
        } else {
            os << "(";
            for (std::size_t i = 0; i < e.binders.size(); ++i) {
                if (i) os << ",";
                os << e.binders[i];
            }
            os << ")";
        }
        print_quant_source_to(os, *e.source);
        os << " . ";
        print_expr_to(os, e.children[0], 0);
        break;
    }
    case Expr::Kind::Sum: {
        os << "sum " << e.binders[0];
        print_quant_source_to(os, *e.source);
        os << " . ";
        print_expr_to(os, e.children[0], 0);
        break;
    }
    case Expr::Kind::ToInt:
        os << "toInt(";
        print_expr_to(os, e.children[0], 0);
        os << ")";
        break;
    case Expr::Kind::Defined:
        os << "defined(";
        print_expr_to(os, e.children[0], 0);
        os << ")";
        break;
    }
    if (parens) os << ")";
}

// Domain bounds and attribute arguments re-parse at additive precedence, so
// anything looser needs parentheses.
inline constexpr int domain_expr_prec = 70;

inline void print_attrs_to(std::ostringstream& os, const std::vector<Attribute>& attrs) {
    if (attrs.empty()) return;
    os << "(";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) os << ", ";
        os << attrs[i].name;
        if (!attrs[i].args.empty()) {
            os << " ";
            print_expr_to(os, attrs[i].args[0], domain_expr_prec);
        }
    }
    os << ") ";
}

inline void print_domain_to(std::ostringstream& os, const Domain& d) {
    switch (d.kind) {
    case Domain::Kind::IntUnbounded:
        os << "int";
        break;
    case Domain::Kind::IntRange:
        os << "int(";
        if (d.lo) print_expr_to(os, *d.lo, domain_expr_prec);
        os << "..";
        if (d.hi) print_expr_to(os, *d.hi, domain_expr_prec);
        os << ")";
        break;
    case Domain::Kind::Ref:
        os << d.name;
        break;
    case Domain::Kind::Relation:
        os << "relation ";
        print_attrs_to(os, d.attrs);
        os << "of ( ";
        print_domain_to(os, d.components[0]);
        os << " * ";
        print_domain_to(os, d.components[1]);
        os << " )";
        break;
    case Domain::Kind::SetOf:
        os << "set ";
        print_attrs_to(os, d.attrs);
        os << "of ";
        print_domain_to(os, d.components[0]);
        break;
    case Domain::Kind::FunctionOf:
        os << "function ";
        print_attrs_to(os, d.attrs);
        print_domain_to(os, d.components[0]);
        os << " --> ";
        print_domain_to(os, d.components[1]);
        break;
    case Domain::Kind::TupleOf:
        os << "tuple (";
        for (std::size_t i = 0; i < d.components.size(); ++i) {
            if (i) os << ", ";
            print_domain_to(os, d.components[i]);
        }
        os << ")";
        break;
    }
}

} // namespace detail

inline std::string print_expr(const Expr& e) {
    std::ostringstream os;
    detail::print_expr_to(os, e, 0);
    return os.str();
}

inline std::string print_domain(const Domain& d) {
    std::ostringstream os;
    detail::print_domain_to(os, d);
    return os.str();
}

inline std::string print_declaration(const Declaration& d) {
    std::ostringstream os;
    switch (d.kind) {
    case Declaration::Kind::Given:
        os << "given " << d.name << " : ";
        detail::print_domain_to(os, *d.domain);
        break;
    case Declaration::Kind::LettingDomain:
        os << "letting " << d.name << " be domain ";
        detail::print_domain_to(os, *d.domain);
        break;
    case Declaration::Kind::LettingValue:
        os << "letting " << d.name << " be ";
        detail::print_expr_to(os, *d.value, 0);
        break;
    case Declaration::Kind::Find:
        os << "find " << d.name << " : ";
        detail::print_domain_to(os, *d.domain);
        break;
    }
    return os.str();
}

/// Deterministic pretty-printer: one declaration per line, constraints joined
/// by ",\n" under a `such that` header, comments re-emitted before the item
/// they were attached to. The output re-parses to a struct_eq specification.
inline std::string print_spec(const Specification& spec) {
    std::ostringstream os;
    for (const auto& d : spec.declarations) {
        for (const auto& c : d.leading_comments) os << c << "\n";
        os << print_declaration(d) << "\n";
    }
    if (!spec.constraints.empty()) {
        os << "such that\n";
        for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
            for (const auto& c : spec.constraints[i].leading_comments) os << c << "\n";
            detail::print_expr_to(os, spec.constraints[i].expr, 0);
            os << (i + 1 < spec.constraints.size() ? ",\n" : "\n");
        }
    }
    for (const auto& c : spec.trailing_comments) os << c << "\n";
    return os.str();
}

} // namespace specrw::essence

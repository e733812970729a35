#pragma once

#include <optional>
#include <set>
#include <string>

#include "specrw/essence/ast.hpp"

namespace specrw::essence {

struct ScopeIssue {
    std::string name;
    std::string message;
};

namespace detail {

inline std::optional<ScopeIssue> check_expr(const Expr& e, std::set<std::string>& in_scope);

inline std::optional<ScopeIssue> check_domain(const Domain& d, std::set<std::string>& in_scope) {
    if (d.kind == Domain::Kind::Ref) {
        if (!in_scope.count(d.name))
            return ScopeIssue{d.name, "identifier '" + d.name + "' used before declaration"};
        return std::nullopt;
    }
    if (d.lo)
        if (auto issue = check_expr(*d.lo, in_scope)) return issue;
    if (d.hi)
        if (auto issue = check_expr(*d.hi, in_scope)) return issue;
    for (const auto& a : d.attrs)
        for (const auto& arg : a.args)
            if (auto issue = check_expr(arg, in_scope)) return issue;
    for (const auto& c : d.components)
        if (auto issue = check_domain(c, in_scope)) return issue;
    return std::nullopt;
}

inline std::optional<ScopeIssue> check_expr(const Expr& e, std::set<std::string>& in_scope) {
    switch (e.kind) {
    case Expr::Kind::Ident:
        if (!in_scope.count(e.name))
            return ScopeIssue{e.name, "identifier '" + e.name + "' used before declaration"};
        return std::nullopt;
    case Expr::Kind::Apply:
        if (!in_scope.count(e.name))
            return ScopeIssue{e.name, "identifier '" + e.name + "' used before declaration"};
        break;
    case Expr::Kind::ForAll:
    case Expr::Kind::Sum: {
        if (e.source) {
            if (e.source->over_domain) {
                if (auto issue = check_domain(*e.source->domain, in_scope)) return issue;
            } else {
                if (auto issue = check_expr(*e.source->collection, in_scope)) return issue;
            }
        }
        std::set<std::string> added;
        for (const auto& b : e.binders)
            if (in_scope.insert(b).second) added.insert(b);
        for (const auto& c : e.children)
            if (auto issue = check_expr(c, in_scope)) {
                for (const auto& b : added) in_scope.erase(b);
                return issue;
            }
        for (const auto& b : added) in_scope.erase(b);
        return std::nullopt;
    }
    default:
        break;
    }
    for (const auto& c : e.children)
        if (auto issue = check_expr(c, in_scope)) return issue;
    return std::nullopt;
}

} // namespace detail

/// Single-pass scoping: every identifier in a domain or expression must be
/// declared earlier in the declaration list or bound by an enclosing
/// quantifier; declaration names must be unique.
inline std::optional<ScopeIssue> scope_check(const Specification& spec) {
    std::set<std::string> in_scope;
    for (const auto& d : spec.declarations) {
        if (d.domain)
            if (auto issue = detail::check_domain(*d.domain, in_scope)) return issue;
        if (d.value)
            if (auto issue = detail::check_expr(*d.value, in_scope)) return issue;
        if (!in_scope.insert(d.name).second)
            return ScopeIssue{d.name, "duplicate declaration of '" + d.name + "'"};
    }
    for (const auto& c : spec.constraints)
        if (auto issue = detail::check_expr(c.expr, in_scope)) return issue;
    return std::nullopt;
}

} // namespace specrw::essence

#pragma once

#include <string>
#include <vector>

#include "specrw/essence/ast.hpp"

namespace specrw::essence {

namespace detail {

// Parallel binder stack for alpha-equivalence; empty when comparing plain.
struct AlphaEnv {
    std::vector<std::pair<std::string, std::string>> pairs;

    bool names_equal(const std::string& a, const std::string& b) const {
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
            bool la = it->first == a, rb = it->second == b;
            if (la || rb) return la && rb;
        }
        return a == b; // both free
    }
};

inline bool eq_expr(const Expr& a, const Expr& b, AlphaEnv& env, bool alpha);

inline bool eq_domain(const Domain& a, const Domain& b, AlphaEnv& env, bool alpha) {
    if (a.kind != b.kind) return false;
    if (a.kind == Domain::Kind::Ref) return env.names_equal(a.name, b.name);
    if (a.lo.has_value() != b.lo.has_value() || a.hi.has_value() != b.hi.has_value()) return false;
    if (a.lo && !eq_expr(*a.lo, *b.lo, env, alpha)) return false;
    if (a.hi && !eq_expr(*a.hi, *b.hi, env, alpha)) return false;
    if (a.attrs.size() != b.attrs.size()) return false;
    for (std::size_t i = 0; i < a.attrs.size(); ++i) {
        if (a.attrs[i].name != b.attrs[i].name) return false;
        if (a.attrs[i].args.size() != b.attrs[i].args.size()) return false;
        for (std::size_t j = 0; j < a.attrs[i].args.size(); ++j)
            if (!eq_expr(a.attrs[i].args[j], b.attrs[i].args[j], env, alpha)) return false;
    }
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i)
        if (!eq_domain(a.components[i], b.components[i], env, alpha)) return false;
    return true;
}

inline bool eq_expr(const Expr& a, const Expr& b, AlphaEnv& env, bool alpha) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::IntLit:
        return a.value == b.value;
    case Expr::Kind::Ident:
        return env.names_equal(a.name, b.name);
    case Expr::Kind::EmptySet:
        return true;
    case Expr::Kind::BinOp:
        if (a.name != b.name) return false;
        break;
    case Expr::Kind::TupleIndex:
        if (a.index != b.index) return false;
        break;
    case Expr::Kind::Apply:
        if (!env.names_equal(a.name, b.name)) return false;
        break;
    case Expr::Kind::ForAll:
    case Expr::Kind::Sum: {
        if (a.binders.size() != b.binders.size()) return false;
        const QuantSource& sa = *a.source;
        const QuantSource& sb = *b.source;
        if (sa.over_domain != sb.over_domain) return false;
        if (sa.over_domain) {
            if (!eq_domain(*sa.domain, *sb.domain, env, alpha)) return false;
        } else {
            if (!eq_expr(*sa.collection, *sb.collection, env, alpha)) return false;
        }
        if (!alpha) {
            if (a.binders != b.binders) return false;
            return eq_expr(a.children[0], b.children[0], env, alpha);
        }
        for (std::size_t i = 0; i < a.binders.size(); ++i)
            env.pairs.emplace_back(a.binders[i], b.binders[i]);
        bool ok = eq_expr(a.children[0], b.children[0], env, alpha);
        env.pairs.resize(env.pairs.size() - a.binders.size());
        return ok;
    }
    default:
        break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!eq_expr(a.children[i], b.children[i], env, alpha)) return false;
    return true;
}

} // namespace detail

inline bool eq_expr(const Expr& a, const Expr& b, bool alpha_binders = false) {
    detail::AlphaEnv env;
    return detail::eq_expr(a, b, env, alpha_binders);
}

inline bool eq_domain(const Domain& a, const Domain& b, bool alpha_binders = false) {
    detail::AlphaEnv env;
    return detail::eq_domain(a, b, env, alpha_binders);
}

/// Structural equality: comments and the specification name are ignored;
/// identifier names are significant. With `alpha_binders` set, quantifier
/// binder names may differ as long as bound occurrences correspond.
inline bool struct_eq(const Specification& a, const Specification& b, bool alpha_binders = false) {
    if (a.declarations.size() != b.declarations.size()) return false;
    if (a.constraints.size() != b.constraints.size()) return false;
    for (std::size_t i = 0; i < a.declarations.size(); ++i) {
        const Declaration& da = a.declarations[i];
        const Declaration& db = b.declarations[i];
        if (da.kind != db.kind || da.name != db.name) return false;
        if (da.domain.has_value() != db.domain.has_value()) return false;
        if (da.domain && !eq_domain(*da.domain, *db.domain, alpha_binders)) return false;
        if (da.value.has_value() != db.value.has_value()) return false;
        if (da.value && !eq_expr(*da.value, *db.value, alpha_binders)) return false;
    }
    for (std::size_t i = 0; i < a.constraints.size(); ++i)
        if (!eq_expr(a.constraints[i].expr, b.constraints[i].expr, alpha_binders)) return false;
    return true;
}

} // namespace specrw::essence

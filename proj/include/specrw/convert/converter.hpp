#pragma once

#include <set>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/ast.hpp"
#include "specrw/essence/equality.hpp"
#include "specrw/essence/printer.hpp"
#include "specrw/essence/scope.hpp"
#include "specrw/eval/evaluator.hpp"

namespace specrw::conv {

/// A generated solution-converter specification: all needed parameters of the
/// original, a `given solution` typed by the rewritten find's domain, a find
/// named like the original decision variable, and one bridging constraint.
struct ConverterSpec {
    essence::Specification spec;
};

struct ConvError {
    enum class Kind { NoConversionNeeded, Unsupported };

    Kind kind = Kind::Unsupported;
    std::string message;
};

namespace detail {

inline void collect_names(const essence::Expr& e, std::set<std::string>& out);

inline void collect_names(const essence::Domain& d, std::set<std::string>& out) {
    if (d.kind == essence::Domain::Kind::Ref) {
        out.insert(d.name);
        return;
    }
    if (d.lo) collect_names(*d.lo, out);
    if (d.hi) collect_names(*d.hi, out);
    for (const auto& a : d.attrs)
        for (const auto& arg : a.args) collect_names(arg, out);
    for (const auto& c : d.components) collect_names(c, out);
}

inline void collect_names(const essence::Expr& e, std::set<std::string>& out) {
    if (e.kind == essence::Expr::Kind::Ident || e.kind == essence::Expr::Kind::Apply)
        out.insert(e.name);
    if (e.source) {
        if (e.source->over_domain) collect_names(*e.source->domain, out);
        else collect_names(*e.source->collection, out);
    }
    for (const auto& c : e.children) collect_names(c, out);
}

inline std::set<std::string> decl_deps(const essence::Declaration& d) {
    std::set<std::string> out;
    if (d.domain) collect_names(*d.domain, out);
    if (d.value) collect_names(*d.value, out);
    return out;
}

/// Resolves a Ref chain against a spec's letting-domains.
inline const essence::Domain* resolve_ref(const essence::Domain& d,
                                          const essence::Specification& spec) {
    const essence::Domain* cur = &d;
    int hops = 0;
    while (cur->kind == essence::Domain::Kind::Ref && hops++ < 64) {
        const essence::Declaration* decl = spec.find_decl(cur->name);
        if (!decl || decl->kind != essence::Declaration::Kind::LettingDomain) return nullptr;
        cur = &*decl->domain;
    }
    return cur;
}

inline std::string fresh_binder(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int i = 2;; ++i) {
        std::string candidate = base + std::to_string(i);
        if (!taken.count(candidate)) return candidate;
    }
}

} // namespace detail

/// Generates the converter specification for an (original, rewritten) pair.
/// The shipped bridge covers the function-of-fixed-size-sets direction: the
/// rewritten find must be a total function to a set domain and the original
/// find a binary relation. Identical find domains need no converter and are
/// reported as NoConversionNeeded.
inline Result<ConverterSpec, ConvError>
generate_converter(const essence::Specification& original,
                   const essence::Specification& rewritten) {
    using DK = essence::Domain::Kind;
    const essence::Declaration* orig_find = nullptr;
    const essence::Declaration* rew_find = nullptr;
    for (const auto& d : original.declarations)
        if (d.kind == essence::Declaration::Kind::Find) {
            if (orig_find) return ConvError{ConvError::Kind::Unsupported, "multiple finds"};
            orig_find = &d;
        }
    for (const auto& d : rewritten.declarations)
        if (d.kind == essence::Declaration::Kind::Find) {
            if (rew_find) return ConvError{ConvError::Kind::Unsupported, "multiple finds"};
            rew_find = &d;
        }
    if (!orig_find || !rew_find)
        return ConvError{ConvError::Kind::Unsupported, "both specifications need a find"};
    if (orig_find->name != rew_find->name)
        return ConvError{ConvError::Kind::Unsupported, "find names differ"};

    if (essence::eq_domain(*orig_find->domain, *rew_find->domain))
        return ConvError{ConvError::Kind::NoConversionNeeded,
                         "find domains are identical; no conversion needed"};

    // bridge registry: (total function A --> set-of) -> (binary relation)
    const essence::Domain& rew_domain = *rew_find->domain;
    bool total = false;
    for (const auto& a : rew_domain.attrs) total |= (a.name == "total");
    const essence::Domain* to_resolved =
        rew_domain.kind == DK::FunctionOf ? detail::resolve_ref(rew_domain.components[1], rewritten)
                                          : nullptr;
    if (rew_domain.kind != DK::FunctionOf || !total || !to_resolved ||
        to_resolved->kind != DK::SetOf || orig_find->domain->kind != DK::Relation)
        return ConvError{ConvError::Kind::Unsupported,
                         "no bridge template registered for this type pair"};

    // declarations needed by the solution given, the find, or transitively
    std::set<std::string> needed;
    detail::collect_names(rew_domain, needed);
    detail::collect_names(*orig_find->domain, needed);
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& d : rewritten.declarations) {
            if (d.kind == essence::Declaration::Kind::Find || !needed.count(d.name)) continue;
            for (const auto& dep : detail::decl_deps(d))
                grew |= needed.insert(dep).second;
        }
    }

    auto build = [&](bool hoist_givens) {
        essence::Specification out;
        out.name = original.name + "Converter";
        auto emit = [&](essence::Declaration::Kind kind_filter) {
            for (const auto& d : rewritten.declarations) {
                if (d.kind == essence::Declaration::Kind::Find || !needed.count(d.name)) continue;
                bool is_given = d.kind == essence::Declaration::Kind::Given;
                if (hoist_givens && (is_given != (kind_filter == essence::Declaration::Kind::Given)))
                    continue;
                essence::Declaration copy = d;
                copy.leading_comments.clear();
                out.declarations.push_back(std::move(copy));
            }
        };
        if (hoist_givens) {
            emit(essence::Declaration::Kind::Given);
            emit(essence::Declaration::Kind::LettingDomain);
        } else {
            for (const auto& d : rewritten.declarations) {
                if (d.kind == essence::Declaration::Kind::Find || !needed.count(d.name)) continue;
                essence::Declaration copy = d;
                copy.leading_comments.clear();
                out.declarations.push_back(std::move(copy));
            }
        }

        essence::Declaration solution;
        solution.kind = essence::Declaration::Kind::Given;
        solution.name = "solution";
        solution.domain.emplace(rew_domain);
        out.declarations.push_back(std::move(solution));

        essence::Declaration find_decl;
        find_decl.kind = essence::Declaration::Kind::Find;
        find_decl.name = orig_find->name;
        find_decl.domain.emplace(*orig_find->domain);
        out.declarations.push_back(std::move(find_decl));

        std::set<std::string> taken;
        for (const auto& d : out.declarations) taken.insert(d.name);
        std::string item = detail::fresh_binder("item", taken);
        taken.insert(item);
        std::string colour = detail::fresh_binder("colour", taken);

        // forAll item in defined(solution) . forAll colour in solution(item) .
        //   <find>(item, colour)
        essence::Expr inner;
        inner.kind = essence::Expr::Kind::ForAll;
        inner.binders.push_back(colour);
        inner.source.emplace();
        inner.source->over_domain = false;
        inner.source->collection.emplace(essence::apply("solution", {essence::ident(item)}));
        inner.children.push_back(
            essence::apply(orig_find->name, {essence::ident(item), essence::ident(colour)}));

        essence::Expr outer;
        outer.kind = essence::Expr::Kind::ForAll;
        outer.binders.push_back(item);
        outer.source.emplace();
        outer.source->over_domain = false;
        essence::Expr defined;
        defined.kind = essence::Expr::Kind::Defined;
        defined.children.push_back(essence::ident("solution"));
        outer.source->collection.emplace(std::move(defined));
        outer.children.push_back(std::move(inner));

        essence::Constraint c;
        c.expr = std::move(outer);
        out.constraints.push_back(std::move(c));
        return out;
    };

    essence::Specification out = build(/*hoist_givens=*/true);
    if (essence::scope_check(out)) {
        out = build(/*hoist_givens=*/false);
        if (auto issue = essence::scope_check(out))
            return ConvError{ConvError::Kind::Unsupported,
                             "generated converter is ill-scoped: " + issue->message};
    }
    return ConverterSpec{std::move(out)};
}

/// Direct in-process conversion: a function-to-sets solution becomes the
/// relation pairing every defined point with each member of its image set.
/// The result is checked against the original find domain (size included).
inline Result<eval::Value, eval::EvalError>
convert_solution(const eval::Value& rewritten_solution, const essence::Domain& original_find_domain,
                 eval::Env& env) {
    using eval::Value;
    if (rewritten_solution.kind != Value::Kind::Function)
        return eval::EvalError{eval::EvalError::Kind::TypeMismatch,
                               "rewritten solution must be a function"};
    std::vector<Value> pairs;
    for (const auto& [x, image] : rewritten_solution.mapping) {
        if (image.kind != Value::Kind::Set)
            return eval::EvalError{eval::EvalError::Kind::TypeMismatch,
                                   "function images must be sets"};
        for (const auto& c : image.elems) pairs.push_back(Value::tuple({x, c}));
    }
    Value rel = Value::relation(std::move(pairs));
    try {
        if (!eval::inhabits(rel, original_find_domain, env))
            return eval::EvalError{eval::EvalError::Kind::DomainMismatch,
                                   "converted value does not inhabit the original find domain"};
    } catch (eval::EvalError& e) {
        return e;
    }
    return rel;
}

struct Validation {
    bool valid = false;
    std::vector<std::string> failing; // pretty-printed failing constraints
};

/// Evaluates every original constraint under inst + {find -> candidate}.
inline Result<Validation, std::string> validate(const essence::Specification& original,
                                                const eval::Instance& inst,
                                                const eval::Value& candidate,
                                                long long max_ground = eval::default_max_ground) {
    const essence::Declaration* find = nullptr;
    for (const auto& d : original.declarations)
        if (d.kind == essence::Declaration::Kind::Find) find = &d;
    if (!find) return std::string("specification has no find declaration");
    try {
        eval::Env env = eval::build_env(original, inst, max_ground);
        env.bind_value(find->name, candidate);
        Validation result;
        result.valid = true;
        for (const auto& c : original.constraints) {
            eval::Value v = eval::eval_expr(c.expr, env);
            if (v.kind != eval::Value::Kind::Int)
                return std::string("constraint did not evaluate to a truth value: ") +
                       essence::print_expr(c.expr);
            if (v.num == 0) {
                result.valid = false;
                result.failing.push_back(essence::print_expr(c.expr));
            }
        }
        return result;
    } catch (eval::EvalError& e) {
        return std::string("evaluation error: ") + e.message;
    }
}

} // namespace specrw::conv

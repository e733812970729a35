#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/ast.hpp"
#include "specrw/essence/printer.hpp"
#include "specrw/eval/value.hpp"

namespace specrw::eval {

struct EvalError {
    enum class Kind {
        TypeMismatch,
        PartialApplication,
        IndexOutOfArity,
        UnboundIdentifier,
        NegativeSize,
        TooLarge,
        UnboundedDomain,
        DomainMismatch,
    };

    Kind kind = Kind::TypeMismatch;
    std::string message;
};

[[noreturn]] inline void eval_fail(EvalError::Kind kind, const std::string& msg) {
    throw EvalError{kind, msg};
}

inline constexpr long long default_max_ground = 10'000'000;

/// Evaluation environment: value bindings for givens/lettings/finds, a
/// binder stack for quantifiers, and the letting-domain table.
class Env {
public:
    void bind_value(const std::string& name, Value v) { values_[name] = std::move(v); }
    void bind_domain(const std::string& name, essence::Domain d) { domains_[name] = std::move(d); }
    void unbind_value(const std::string& name) { values_.erase(name); }

    const Value* lookup(const std::string& name) const {
        for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
            if (it->first == name) return &it->second;
        auto it = values_.find(name);
        return it == values_.end() ? nullptr : &it->second;
    }

    const essence::Domain* domain(const std::string& name) const {
        auto it = domains_.find(name);
        return it == domains_.end() ? nullptr : &it->second;
    }

    long long max_ground = default_max_ground;

    /// RAII quantifier binder scope.
    class Scope {
    public:
        Scope(Env& env, const std::vector<std::string>& names) : env_(env), count_(names.size()) {
            for (const auto& n : names) env_.binders_.emplace_back(n, Value());
        }
        ~Scope() { env_.binders_.resize(env_.binders_.size() - count_); }
        void set(std::size_t i, Value v) {
            env_.binders_[env_.binders_.size() - count_ + i].second = std::move(v);
        }

    private:
        Env& env_;
        std::size_t count_;
    };

private:
    std::map<std::string, Value> values_;
    std::map<std::string, essence::Domain> domains_;
    std::vector<std::pair<std::string, Value>> binders_;
};

inline Value eval_expr(const essence::Expr& e, Env& env);

// ---------------------------------------------------------------------------
// grounding
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr long long count_cap = 2'000'000'000'000'000'000LL; // saturation guard

inline long long sat_mul(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    if (a > count_cap / b) return count_cap;
    return a * b;
}

inline long long sat_pow(long long base, long long exp) {
    long long r = 1;
    for (long long i = 0; i < exp; ++i) {
        r = sat_mul(r, base);
        if (r >= count_cap) return count_cap;
    }
    return r;
}

inline long long sat_binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = sat_mul(r, n - k + i);
        if (r >= count_cap) return count_cap;
        r /= i;
    }
    return r;
}

inline long long eval_int(const essence::Expr& e, Env& env) {
    Value v = eval_expr(e, env);
    if (v.kind != Value::Kind::Int) eval_fail(EvalError::Kind::TypeMismatch, "expected an integer");
    return v.num;
}

struct DomainInfo {
    // the base element pool and the shaping attributes, resolved under an env
    enum class Shape { Ints, Relation, Set, Function, Tuple };
    Shape shape = Shape::Ints;
    long long lo = 0, hi = -1;                 // Ints
    std::vector<Value> pool;                   // Relation: pairs; Set: elements
    std::vector<DomainInfo> components;        // Function: {from,to}; Tuple: all
    bool total = false;
    bool has_size = false;
    long long size = 0;
};

inline DomainInfo resolve(const essence::Domain& d, Env& env);

inline std::vector<Value> enumerate_all(const DomainInfo& info);

inline long long count_candidates(const DomainInfo& info) {
    switch (info.shape) {
    case DomainInfo::Shape::Ints:
        return info.hi < info.lo ? 0 : info.hi - info.lo + 1;
    case DomainInfo::Shape::Relation:
    case DomainInfo::Shape::Set: {
        long long p = static_cast<long long>(info.pool.size());
        return info.has_size ? sat_binomial(p, info.size) : sat_pow(2, p);
    }
    case DomainInfo::Shape::Function: {
        long long from = count_candidates(info.components[0]);
        long long to = count_candidates(info.components[1]);
        return sat_pow(info.total ? to : to + 1, from);
    }
    case DomainInfo::Shape::Tuple: {
        long long r = 1;
        for (const auto& c : info.components) r = sat_mul(r, count_candidates(c));
        return r;
    }
    }
    return 0;
}

inline DomainInfo resolve(const essence::Domain& d, Env& env) {
    using DK = essence::Domain::Kind;
    DomainInfo info;
    switch (d.kind) {
    case DK::IntUnbounded:
        eval_fail(EvalError::Kind::UnboundedDomain, "cannot enumerate an unbounded int domain");
    case DK::IntRange: {
        if (!d.lo || !d.hi)
            eval_fail(EvalError::Kind::UnboundedDomain, "cannot enumerate a half-open int domain");
        info.shape = DomainInfo::Shape::Ints;
        info.lo = eval_int(*d.lo, env);
        info.hi = eval_int(*d.hi, env);
        return info;
    }
    case DK::Ref: {
        const essence::Domain* resolved = env.domain(d.name);
        if (!resolved)
            eval_fail(EvalError::Kind::UnboundIdentifier, "unknown domain '" + d.name + "'");
        return resolve(*resolved, env);
    }
    case DK::Relation: {
        info.shape = DomainInfo::Shape::Relation;
        DomainInfo a = resolve(d.components[0], env);
        DomainInfo b = resolve(d.components[1], env);
        bool irreflexive = false;
        for (const auto& attr : d.attrs) {
            if (attr.name == "irreflexive") irreflexive = true;
            if (attr.name == "size") {
                info.has_size = true;
                info.size = eval_int(attr.args[0], env);
                if (info.size < 0)
                    eval_fail(EvalError::Kind::NegativeSize, "negative relation size");
            }
        }
        if (sat_mul(count_candidates(a), count_candidates(b)) > env.max_ground)
            eval_fail(EvalError::Kind::TooLarge, "relation component product too large");
        std::vector<Value> av = enumerate_all(a);
        std::vector<Value> bv = enumerate_all(b);
        for (const auto& x : av)
            for (const auto& y : bv) {
                if (irreflexive && x == y) continue;
                info.pool.push_back(Value::tuple({x, y}));
            }
        return info;
    }
    case DK::SetOf: {
        info.shape = DomainInfo::Shape::Set;
        DomainInfo elem = resolve(d.components[0], env);
        for (const auto& attr : d.attrs) {
            if (attr.name == "size") {
                info.has_size = true;
                info.size = eval_int(attr.args[0], env);
                if (info.size < 0) eval_fail(EvalError::Kind::NegativeSize, "negative set size");
            }
        }
        if (count_candidates(elem) > env.max_ground)
            eval_fail(EvalError::Kind::TooLarge, "set element domain too large");
        info.pool = enumerate_all(elem);
        return info;
    }
    case DK::FunctionOf: {
        info.shape = DomainInfo::Shape::Function;
        info.components.push_back(resolve(d.components[0], env));
        info.components.push_back(resolve(d.components[1], env));
        for (const auto& attr : d.attrs)
            if (attr.name == "total") info.total = true;
        return info;
    }
    case DK::TupleOf: {
        info.shape = DomainInfo::Shape::Tuple;
        for (const auto& c : d.components) info.components.push_back(resolve(c, env));
        return info;
    }
    }
    return info;
}

/// Streams candidates in canonical order; the callback returns false to stop.
/// Returns false when stopped early.
inline bool enumerate(const DomainInfo& info, const std::function<bool(const Value&)>& fn) {
    switch (info.shape) {
    case DomainInfo::Shape::Ints: {
        for (long long v = info.lo; v <= info.hi; ++v)
            if (!fn(Value::integer(v))) return false;
        return true;
    }
    case DomainInfo::Shape::Relation:
    case DomainInfo::Shape::Set: {
        bool is_rel = info.shape == DomainInfo::Shape::Relation;
        auto emit = [&](const std::vector<Value>& chosen) {
            return fn(is_rel ? Value::relation(chosen) : Value::set(chosen));
        };
        long long p = static_cast<long long>(info.pool.size());
        if (info.has_size) {
            long long k = info.size;
            if (k > p) return true; // no candidates
            std::vector<long long> ix(k);
            for (long long i = 0; i < k; ++i) ix[i] = i;
            while (true) {
                std::vector<Value> chosen;
                chosen.reserve(k);
                for (long long i : ix) chosen.push_back(info.pool[i]);
                if (!emit(chosen)) return false;
                long long i = k - 1;
                while (i >= 0 && ix[i] == p - k + i) --i;
                if (i < 0) break;
                ++ix[i];
                for (long long j = i + 1; j < k; ++j) ix[j] = ix[j - 1] + 1;
            }
            return true;
        }
        // all subsets, ordered by the bitmask counter (element 0 varies fastest)
        for (unsigned long long mask = 0; mask < (1ULL << p); ++mask) {
            std::vector<Value> chosen;
            for (long long i = 0; i < p; ++i)
                if (mask & (1ULL << i)) chosen.push_back(info.pool[i]);
            if (!emit(chosen)) return false;
        }
        return true;
    }
    case DomainInfo::Shape::Function: {
        std::vector<Value> keys = enumerate_all(info.components[0]);
        std::vector<Value> values = enumerate_all(info.components[1]);
        long long base = static_cast<long long>(values.size()) + (info.total ? 0 : 1);
        if (keys.empty()) return fn(Value::function({}));
        std::vector<long long> digits(keys.size(), 0);
        while (true) {
            std::vector<std::pair<Value, Value>> mapping;
            for (std::size_t i = 0; i < keys.size(); ++i) {
                long long digit = digits[i];
                if (!info.total) {
                    if (digit == 0) continue; // absent
                    mapping.emplace_back(keys[i], values[digit - 1]);
                } else {
                    mapping.emplace_back(keys[i], values[digit]);
                }
            }
            if (!fn(Value::function(std::move(mapping)))) return false;
            // odometer: last key varies fastest
            std::size_t i = keys.size();
            while (i > 0) {
                --i;
                if (++digits[i] < base) break;
                digits[i] = 0;
                if (i == 0) return true;
            }
            if (i == 0 && digits[0] == 0) return true;
        }
    }
    case DomainInfo::Shape::Tuple: {
        std::vector<std::vector<Value>> pools;
        for (const auto& c : info.components) pools.push_back(enumerate_all(c));
        std::vector<std::size_t> ix(pools.size(), 0);
        for (const auto& pool : pools)
            if (pool.empty()) return true;
        if (pools.empty()) return fn(Value::tuple({}));
        while (true) {
            std::vector<Value> comps;
            for (std::size_t i = 0; i < pools.size(); ++i) comps.push_back(pools[i][ix[i]]);
            if (!fn(Value::tuple(std::move(comps)))) return false;
            std::size_t i = pools.size();
            while (i > 0) {
                --i;
                if (++ix[i] < pools[i].size()) break;
                ix[i] = 0;
                if (i == 0) return true;
            }
        }
    }
    }
    return true;
}

inline std::vector<Value> enumerate_all(const DomainInfo& info) {
    std::vector<Value> out;
    enumerate(info, [&](const Value& v) {
        out.push_back(v);
        return true;
    });
    return out;
}

} // namespace detail

/// The finite set of values inhabiting a domain under an environment, in
/// canonical enumeration order. Fails with TooLarge when the candidate count
/// exceeds env.max_ground.
inline std::vector<Value> ground(const essence::Domain& d, Env& env) {
    detail::DomainInfo info = detail::resolve(d, env);
    long long count = detail::count_candidates(info);
    if (count > env.max_ground)
        eval_fail(EvalError::Kind::TooLarge,
                  "domain has " + std::to_string(count) + " values (cap " +
                      std::to_string(env.max_ground) + ")");
    return detail::enumerate_all(info);
}

/// Membership check: does the value inhabit the domain under env?
inline bool inhabits(const Value& v, const essence::Domain& d, Env& env) {
    using DK = essence::Domain::Kind;
    switch (d.kind) {
    case DK::IntUnbounded:
        return v.kind == Value::Kind::Int;
    case DK::IntRange: {
        if (v.kind != Value::Kind::Int) return false;
        if (d.lo && v.num < detail::eval_int(*d.lo, env)) return false;
        if (d.hi && v.num > detail::eval_int(*d.hi, env)) return false;
        return true;
    }
    case DK::Ref: {
        const essence::Domain* resolved = env.domain(d.name);
        if (!resolved)
            eval_fail(EvalError::Kind::UnboundIdentifier, "unknown domain '" + d.name + "'");
        return inhabits(v, *resolved, env);
    }
    case DK::Relation: {
        if (v.kind != Value::Kind::Relation) return false;
        bool irreflexive = false;
        for (const auto& attr : d.attrs) {
            if (attr.name == "irreflexive") irreflexive = true;
            if (attr.name == "size" &&
                static_cast<long long>(v.elems.size()) != detail::eval_int(attr.args[0], env))
                return false;
        }
        for (const auto& t : v.elems) {
            if (t.kind != Value::Kind::Tuple || t.elems.size() != 2) return false;
            if (!inhabits(t.elems[0], d.components[0], env)) return false;
            if (!inhabits(t.elems[1], d.components[1], env)) return false;
            if (irreflexive && t.elems[0] == t.elems[1]) return false;
        }
        return true;
    }
    case DK::SetOf: {
        if (v.kind != Value::Kind::Set) return false;
        for (const auto& attr : d.attrs)
            if (attr.name == "size" &&
                static_cast<long long>(v.elems.size()) != detail::eval_int(attr.args[0], env))
                return false;
        for (const auto& e : v.elems)
            if (!inhabits(e, d.components[0], env)) return false;
        return true;
    }
    case DK::FunctionOf: {
        if (v.kind != Value::Kind::Function) return false;
        for (const auto& [k, val] : v.mapping) {
            if (!inhabits(k, d.components[0], env)) return false;
            if (!inhabits(val, d.components[1], env)) return false;
        }
        for (const auto& attr : d.attrs) {
            if (attr.name == "total") {
                std::vector<Value> from = ground(d.components[0], env);
                if (v.mapping.size() != from.size()) return false;
                for (std::size_t i = 0; i < from.size(); ++i)
                    if (!(v.mapping[i].first == from[i])) return false;
            }
        }
        return true;
    }
    case DK::TupleOf: {
        if (v.kind != Value::Kind::Tuple || v.elems.size() != d.components.size()) return false;
        for (std::size_t i = 0; i < d.components.size(); ++i)
            if (!inhabits(v.elems[i], d.components[i], env)) return false;
        return true;
    }
    }
    return false;
}

// ---------------------------------------------------------------------------
// expression evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline long long eval_bool(const essence::Expr& e, Env& env) {
    Value v = eval_expr(e, env);
    if (v.kind != Value::Kind::Int)
        eval_fail(EvalError::Kind::TypeMismatch, "expected a truth value (0/1)");
    return v.num != 0 ? 1 : 0;
}

/// Iterates a quantifier source; binds and calls fn per element.
/// fn returns false to short-circuit; returns false if stopped.
inline bool for_each_source(const essence::Expr& quant, Env& env,
                            const std::function<bool(const Value&)>& fn) {
    const essence::QuantSource& src = *quant.source;
    if (src.over_domain) {
        std::vector<Value> values = ground(*src.domain, env);
        for (const auto& v : values)
            if (!fn(v)) return false;
        return true;
    }
    Value coll = eval_expr(*src.collection, env);
    if (coll.kind != Value::Kind::Set && coll.kind != Value::Kind::Relation)
        eval_fail(EvalError::Kind::TypeMismatch,
                  "quantification over a value that is not a set or relation");
    for (const auto& v : coll.elems)
        if (!fn(v)) return false;
    return true;
}

inline void bind_element(Env::Scope& scope, const std::vector<std::string>& binders,
                         const Value& element) {
    if (binders.size() == 1) {
        scope.set(0, element);
        return;
    }
    if (element.kind != Value::Kind::Tuple || element.elems.size() != binders.size())
        eval_fail(EvalError::Kind::TypeMismatch, "binder tuple arity mismatch");
    for (std::size_t i = 0; i < binders.size(); ++i) scope.set(i, element.elems[i]);
}

} // namespace detail

/// Standard semantics over ground values. Truth values are integers 0/1;
/// forAll over an empty source is 1; sum over an empty source is 0.
inline Value eval_expr(const essence::Expr& e, Env& env) {
    using EK = essence::Expr::Kind;
    switch (e.kind) {
    case EK::IntLit:
        return Value::integer(e.value);
    case EK::Ident: {
        const Value* v = env.lookup(e.name);
        if (!v) {
            if (env.domain(e.name))
                eval_fail(EvalError::Kind::TypeMismatch,
                          "'" + e.name + "' names a domain, not a value");
            eval_fail(EvalError::Kind::UnboundIdentifier, "unbound identifier '" + e.name + "'");
        }
        return *v;
    }
    case EK::TupleLit: {
        std::vector<Value> comps;
        for (const auto& c : e.children) comps.push_back(eval_expr(c, env));
        return Value::tuple(std::move(comps));
    }
    case EK::EmptySet:
        return Value::set({});
    case EK::BinOp: {
        if (e.name == "->") {
            long long a = detail::eval_bool(e.children[0], env);
            if (a == 0) return Value::integer(1);
            return Value::integer(detail::eval_bool(e.children[1], env));
        }
        if (e.name == "/\\") {
            if (detail::eval_bool(e.children[0], env) == 0) return Value::integer(0);
            return Value::integer(detail::eval_bool(e.children[1], env));
        }
        Value lhs = eval_expr(e.children[0], env);
        Value rhs = eval_expr(e.children[1], env);
        if (e.name == "=") return Value::integer(lhs == rhs ? 1 : 0);
        if (e.name == "!=") return Value::integer(lhs != rhs ? 1 : 0);
        if (e.name == "in") {
            if (rhs.kind == Value::Kind::Set || rhs.kind == Value::Kind::Relation)
                return Value::integer(rhs.contains(lhs) ? 1 : 0);
            eval_fail(EvalError::Kind::TypeMismatch, "'in' needs a set or relation");
        }
        if (e.name == "intersect") {
            if ((lhs.kind == Value::Kind::Set && rhs.kind == Value::Kind::Set) ||
                (lhs.kind == Value::Kind::Relation && rhs.kind == Value::Kind::Relation)) {
                std::vector<Value> both;
                for (const auto& v : lhs.elems)
                    if (rhs.contains(v)) both.push_back(v);
                return lhs.kind == Value::Kind::Set ? Value::set(std::move(both))
                                                    : Value::relation(std::move(both));
            }
            eval_fail(EvalError::Kind::TypeMismatch, "'intersect' needs two sets or two relations");
        }
        if (lhs.kind != Value::Kind::Int || rhs.kind != Value::Kind::Int)
            eval_fail(EvalError::Kind::TypeMismatch, "arithmetic on non-integers");
        if (e.name == "+") return Value::integer(lhs.num + rhs.num);
        if (e.name == "-") return Value::integer(lhs.num - rhs.num);
        if (e.name == "*") return Value::integer(lhs.num * rhs.num);
        eval_fail(EvalError::Kind::TypeMismatch, "unknown operator '" + e.name + "'");
    }
    case EK::Not:
        return Value::integer(detail::eval_bool(e.children[0], env) == 0 ? 1 : 0);
    case EK::TupleIndex: {
        Value t = eval_expr(e.children[0], env);
        if (t.kind != Value::Kind::Tuple)
            eval_fail(EvalError::Kind::TypeMismatch, "indexing a non-tuple");
        if (e.index < 1 || static_cast<std::size_t>(e.index) > t.elems.size())
            eval_fail(EvalError::Kind::IndexOutOfArity,
                      "tuple index " + std::to_string(e.index) + " out of arity");
        return t.elems[e.index - 1];
    }
    case EK::Apply: {
        const Value* f = env.lookup(e.name);
        if (!f) eval_fail(EvalError::Kind::UnboundIdentifier, "unbound identifier '" + e.name + "'");
        std::vector<Value> args;
        for (const auto& a : e.children) args.push_back(eval_expr(a, env));
        if (f->kind == Value::Kind::Function) {
            if (args.size() != 1)
                eval_fail(EvalError::Kind::TypeMismatch, "function application takes one argument");
            const Value* v = f->lookup(args[0]);
            if (!v)
                eval_fail(EvalError::Kind::PartialApplication,
                          "'" + e.name + "' applied outside its defined set");
            return *v;
        }
        if (f->kind == Value::Kind::Relation) {
            // full-arity application is a membership test
            return Value::integer(f->contains(Value::tuple(std::move(args))) ? 1 : 0);
        }
        eval_fail(EvalError::Kind::TypeMismatch, "'" + e.name + "' is not applicable");
    }
    case EK::ForAll: {
        Env::Scope scope(env, e.binders);
        bool all = detail::for_each_source(e, env, [&](const Value& element) {
            detail::bind_element(scope, e.binders, element);
            return detail::eval_bool(e.children[0], env) != 0;
        });
        return Value::integer(all ? 1 : 0);
    }
    case EK::Sum: {
        Env::Scope scope(env, e.binders);
        long long total = 0;
        detail::for_each_source(e, env, [&](const Value& element) {
            detail::bind_element(scope, e.binders, element);
            Value v = eval_expr(e.children[0], env);
            if (v.kind != Value::Kind::Int)
                eval_fail(EvalError::Kind::TypeMismatch, "sum body must be an integer");
            total += v.num;
            return true;
        });
        return Value::integer(total);
    }
    case EK::ToInt: {
        Value v = eval_expr(e.children[0], env);
        if (v.kind != Value::Kind::Int)
            eval_fail(EvalError::Kind::TypeMismatch, "toInt needs a truth value");
        return Value::integer(v.num != 0 ? 1 : 0);
    }
    case EK::Defined: {
        Value f = eval_expr(e.children[0], env);
        if (f.kind != Value::Kind::Function)
            eval_fail(EvalError::Kind::TypeMismatch, "defined() needs a function");
        std::vector<Value> keys;
        for (const auto& [k, v] : f.mapping) keys.push_back(k);
        return Value::set(std::move(keys));
    }
    }
    eval_fail(EvalError::Kind::TypeMismatch, "unhandled expression");
}

// ---------------------------------------------------------------------------
// instances and solving
// ---------------------------------------------------------------------------

/// A binding of a specification's given parameters to values.
struct Instance {
    std::string id;
    std::vector<std::pair<std::string, Value>> bindings;

    const Value* find(const std::string& name) const {
        for (const auto& [n, v] : bindings)
            if (n == name) return &v;
        return nullptr;
    }
};

struct SolveError {
    bool too_large = false;
    std::string message;
};

using Solution = std::map<std::string, Value>;

/// Builds the evaluation environment for a specification under an instance:
/// givens are taken from the instance (and checked against their declared
/// domains), lettings are evaluated in declaration order. Instance bindings
/// that match no given are ignored, so one .param file can serve both a
/// specification and its generated converter.
inline Env build_env(const essence::Specification& spec, const Instance& inst,
                     long long max_ground = default_max_ground) {
    Env env;
    env.max_ground = max_ground;
    for (const auto& d : spec.declarations) {
        switch (d.kind) {
        case essence::Declaration::Kind::Given: {
            const Value* v = inst.find(d.name);
            if (!v)
                eval_fail(EvalError::Kind::UnboundIdentifier,
                          "instance does not bind given '" + d.name + "'");
            if (!inhabits(*v, *d.domain, env))
                eval_fail(EvalError::Kind::DomainMismatch,
                          "value for '" + d.name + "' does not inhabit its domain");
            env.bind_value(d.name, *v);
            break;
        }
        case essence::Declaration::Kind::LettingDomain:
            env.bind_domain(d.name, *d.domain);
            break;
        case essence::Declaration::Kind::LettingValue:
            env.bind_value(d.name, eval_expr(*d.value, env));
            break;
        case essence::Declaration::Kind::Find:
            break;
        }
    }
    return env;
}

struct SolveOptions {
    long long limit = -1; // < 0: unlimited
    long long max_ground = default_max_ground;
};

/// Brute-force enumeration: grounds every find domain, filters assignments by
/// the constraints, and returns solutions in canonical enumeration order.
inline Result<std::vector<Solution>, SolveError> solve(const essence::Specification& spec,
                                                       const Instance& inst,
                                                       const SolveOptions& options = {}) {
    try {
        Env env = build_env(spec, inst, options.max_ground);
        std::vector<const essence::Declaration*> finds;
        for (const auto& d : spec.declarations)
            if (d.kind == essence::Declaration::Kind::Find) finds.push_back(&d);
        if (finds.empty()) return SolveError{false, "specification has no find declaration"};

        std::vector<detail::DomainInfo> infos;
        long long total = 1;
        for (const auto* f : finds) {
            infos.push_back(detail::resolve(*f->domain, env));
            total = detail::sat_mul(total, detail::count_candidates(infos.back()));
        }
        if (total > options.max_ground)
            return SolveError{true, "candidate space has " + std::to_string(total) +
                                        " assignments (cap " +
                                        std::to_string(options.max_ground) + ")"};

        std::vector<Solution> solutions;
        std::size_t constraint_index = 0;
        try {
            std::function<bool(std::size_t)> enumerate_finds = [&](std::size_t i) -> bool {
                if (i == finds.size()) {
                    for (constraint_index = 0; constraint_index < spec.constraints.size();
                         ++constraint_index) {
                        if (detail::eval_bool(spec.constraints[constraint_index].expr, env) == 0)
                            return true; // rejected; keep enumerating
                    }
                    Solution s;
                    for (const auto* f : finds) s.emplace(f->name, *env.lookup(f->name));
                    solutions.push_back(std::move(s));
                    return options.limit < 0 ||
                           static_cast<long long>(solutions.size()) < options.limit;
                }
                return detail::enumerate(infos[i], [&](const Value& candidate) {
                    env.bind_value(finds[i]->name, candidate);
                    return enumerate_finds(i + 1);
                });
            };
            enumerate_finds(0);
            for (const auto* f : finds) env.unbind_value(f->name);
        } catch (EvalError& e) {
            std::string context;
            if (constraint_index < spec.constraints.size()) {
                context = " while evaluating constraint " + std::to_string(constraint_index + 1) +
                          ": " + essence::print_expr(spec.constraints[constraint_index].expr);
                for (const auto* f : finds)
                    if (const Value* bound = env.lookup(f->name))
                        context += " with " + f->name + " = " + print_value(*bound);
            }
            return SolveError{e.kind == EvalError::Kind::TooLarge, e.message + context};
        }
        return solutions;
    } catch (EvalError& e) {
        return SolveError{e.kind == EvalError::Kind::TooLarge, e.message};
    }
}

} // namespace specrw::eval

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/ast.hpp"
#include "specrw/graph/labeled_graph.hpp"

namespace specrw::graph {

/// Grammar-kind names carried on each node's "kind" branch.
namespace kind {
inline constexpr const char* spec = "spec";
inline constexpr const char* given = "given";
inline constexpr const char* letting_domain = "lettingDomain";
inline constexpr const char* letting_value = "lettingValue";
inline constexpr const char* find = "find";
inline constexpr const char* ident = "ident";
inline constexpr const char* int_domain = "int";
inline constexpr const char* int_range = "intRange";
inline constexpr const char* int_range_from = "intRangeFrom";
inline constexpr const char* int_range_to = "intRangeTo";
inline constexpr const char* domain_ref = "domainRef";
inline constexpr const char* relation = "relation";
inline constexpr const char* set_of = "setOf";
inline constexpr const char* function_of = "functionOf";
inline constexpr const char* tuple_of = "tupleOf";
inline constexpr const char* attr = "attr";
inline constexpr const char* int_lit = "intLit";
inline constexpr const char* tuple_lit = "tupleLit";
inline constexpr const char* empty_set = "emptySet";
inline constexpr const char* binop = "binop";
inline constexpr const char* not_ = "not";
inline constexpr const char* tuple_index = "tupleIndex";
inline constexpr const char* apply = "apply";
inline constexpr const char* for_all = "forAll";
inline constexpr const char* sum = "sum";
inline constexpr const char* to_int = "toInt";
inline constexpr const char* defined = "defined";
inline constexpr const char* quant_domain = "quantDomain";
inline constexpr const char* quant_in = "quantIn";
} // namespace kind

inline const std::string kind_edge_label = "kind";

struct DecodeError {
    int node_id = -1;
    std::string rule;

    std::string to_string() const {
        return "decode error at node " + std::to_string(node_id) + ": " + rule;
    }
};

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

namespace detail {

class Encoder {
public:
    Encoder(LabeledGraph& g) : g_(g) {}

    /// Creates a node labelled with the AST node's symbol plus its "kind"
    /// branch: an extra edge to a leaf carrying the grammar kind.
    int make(Atom symbol, const char* kind_name) {
        int id = g_.add_node(std::move(symbol));
        int leaf = g_.add_node(str_atom(kind_name));
        g_.add_edge(id, leaf, str_atom(kind_edge_label));
        return id;
    }

    void attach(int parent, int child, long long position) {
        g_.add_edge(parent, child, int_atom(position));
    }

    int encode_domain(const essence::Domain& d) {
        using DK = essence::Domain::Kind;
        switch (d.kind) {
        case DK::IntUnbounded:
            return make(str_atom("int"), kind::int_domain);
        case DK::IntRange: {
            const char* k = d.lo && d.hi ? kind::int_range
                            : d.lo       ? kind::int_range_from
                                         : kind::int_range_to;
            int id = make(str_atom("int"), k);
            long long pos = 1;
            if (d.lo) attach(id, encode_expr(*d.lo), pos++);
            if (d.hi) attach(id, encode_expr(*d.hi), pos++);
            return id;
        }
        case DK::Ref:
            return make(str_atom(d.name), kind::domain_ref);
        case DK::Relation: {
            int id = make(str_atom("relation"), kind::relation);
            attach(id, encode_domain(d.components[0]), 1);
            attach(id, encode_domain(d.components[1]), 2);
            long long pos = 3;
            for (const auto& a : d.attrs) attach(id, encode_attr(a), pos++);
            return id;
        }
        case DK::SetOf: {
            int id = make(str_atom("set"), kind::set_of);
            attach(id, encode_domain(d.components[0]), 1);
            long long pos = 2;
            for (const auto& a : d.attrs) attach(id, encode_attr(a), pos++);
            return id;
        }
        case DK::FunctionOf: {
            int id = make(str_atom("function"), kind::function_of);
            attach(id, encode_domain(d.components[0]), 1);
            attach(id, encode_domain(d.components[1]), 2);
            long long pos = 3;
            for (const auto& a : d.attrs) attach(id, encode_attr(a), pos++);
            return id;
        }
        case DK::TupleOf: {
            int id = make(str_atom("tuple"), kind::tuple_of);
            long long pos = 1;
            for (const auto& c : d.components) attach(id, encode_domain(c), pos++);
            return id;
        }
        }
        return -1;
    }

    int encode_attr(const essence::Attribute& a) {
        int id = make(str_atom(a.name), kind::attr);
        if (!a.args.empty()) attach(id, encode_expr(a.args[0]), 1);
        return id;
    }

    int encode_quant_source(const essence::QuantSource& s) {
        if (s.over_domain) {
            int id = make(str_atom(":"), kind::quant_domain);
            attach(id, encode_domain(*s.domain), 1);
            return id;
        }
        int id = make(str_atom("in"), kind::quant_in);
        attach(id, encode_expr(*s.collection), 1);
        return id;
    }

    int encode_expr(const essence::Expr& e) {
        using EK = essence::Expr::Kind;
        switch (e.kind) {
        case EK::IntLit:
            return make(int_atom(e.value), kind::int_lit);
        case EK::Ident:
            return make(str_atom(e.name), kind::ident);
        case EK::TupleLit: {
            int id = make(str_atom(""), kind::tuple_lit);
            long long pos = 1;
            for (const auto& c : e.children) attach(id, encode_expr(c), pos++);
            return id;
        }
        case EK::EmptySet:
            return make(str_atom("{}"), kind::empty_set);
        case EK::BinOp: {
            int id = make(str_atom(e.name), kind::binop);
            attach(id, encode_expr(e.children[0]), 1);
            attach(id, encode_expr(e.children[1]), 2);
            return id;
        }
        case EK::Not: {
            int id = make(str_atom("!"), kind::not_);
            attach(id, encode_expr(e.children[0]), 1);
            return id;
        }
        case EK::TupleIndex: {
            int id = make(str_atom("[]"), kind::tuple_index);
            attach(id, encode_expr(e.children[0]), 1);
            attach(id, make(int_atom(e.index), kind::int_lit), 2);
            return id;
        }
        case EK::Apply: {
            int id = make(str_atom(""), kind::apply);
            attach(id, make(str_atom(e.name), kind::ident), 1);
            long long pos = 2;
            for (const auto& c : e.children) attach(id, encode_expr(c), pos++);
            return id;
        }
        case EK::ForAll: {
            int id = make(str_atom("forAll"), kind::for_all);
            long long pos = 1;
            for (const auto& b : e.binders) attach(id, make(str_atom(b), kind::ident), pos++);
            attach(id, encode_quant_source(*e.source), pos++);
            attach(id, encode_expr(e.children[0]), pos);
            return id;
        }
        case EK::Sum: {
            int id = make(str_atom("sum"), kind::sum);
            attach(id, make(str_atom(e.binders[0]), kind::ident), 1);
            attach(id, encode_quant_source(*e.source), 2);
            attach(id, encode_expr(e.children[0]), 3);
            return id;
        }
        case EK::ToInt: {
            int id = make(str_atom("toInt"), kind::to_int);
            attach(id, encode_expr(e.children[0]), 1);
            return id;
        }
        case EK::Defined: {
            int id = make(str_atom("defined"), kind::defined);
            attach(id, encode_expr(e.children[0]), 1);
            return id;
        }
        }
        return -1;
    }

    int encode_declaration(const essence::Declaration& d) {
        using DK = essence::Declaration::Kind;
        int id = -1;
        switch (d.kind) {
        case DK::Given: id = make(str_atom("given"), kind::given); break;
        case DK::LettingDomain: id = make(str_atom("letting"), kind::letting_domain); break;
        case DK::LettingValue: id = make(str_atom("letting"), kind::letting_value); break;
        case DK::Find: id = make(str_atom("find"), kind::find); break;
        }
        int name = make(str_atom(d.name), kind::ident);
        attach(id, name, 1);
        if (d.kind == DK::LettingValue)
            attach(name, encode_expr(*d.value), 1);
        else
            attach(name, encode_domain(*d.domain), 1);
        return id;
    }

private:
    LabeledGraph& g_;
};

} // namespace detail

/// Encodes a specification as a host graph: one node per AST node labelled
/// with the node's symbol, a "kind" branch per node carrying the grammar
/// kind, and 1-based positional child edges. The root carries the
/// specification name; its children are the declarations then the
/// constraints, so a find declaration's root-edge label is its 1-based
/// declaration index. Node ids are assigned in pre-order. Comments are
/// dropped. The encoding never produces marks.
inline LabeledGraph encode(const essence::Specification& spec) {
    LabeledGraph g;
    detail::Encoder enc(g);
    int root = enc.make(str_atom(spec.name), kind::spec);
    long long pos = 1;
    for (const auto& d : spec.declarations) enc.attach(root, enc.encode_declaration(d), pos++);
    for (const auto& c : spec.constraints) enc.attach(root, enc.encode_expr(c.expr), pos++);
    return g;
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

namespace detail {

class Decoder {
public:
    Decoder(const LabeledGraph& g) : g_(g) {}

    Result<essence::Specification, DecodeError> run() {
        try {
            classify();
            int root = find_root();
            essence::Specification spec;
            if (!is_str(g_.node(root).label))
                fail(root, "root label must be a string");
            spec.name = as_str(g_.node(root).label);
            visited_.insert(root);
            for (int child : children(root)) {
                const std::string& k = kind_of(child);
                if (k == kind::given || k == kind::letting_domain || k == kind::letting_value ||
                    k == kind::find) {
                    spec.declarations.push_back(decode_declaration(child));
                } else {
                    essence::Constraint c;
                    c.expr = decode_expr(child);
                    spec.constraints.push_back(std::move(c));
                }
            }
            if (visited_.size() != ast_nodes_.size())
                fail(-1, "graph has nodes unreachable from the root");
            return spec;
        } catch (DecodeError& e) {
            return e;
        }
    }

private:
    const LabeledGraph& g_;
    std::map<int, std::string> node_kind_;      // AST node -> kind string
    std::set<int> ast_nodes_;
    std::set<int> visited_;

    [[noreturn]] void fail(int node, const std::string& rule) const {
        throw DecodeError{node, rule};
    }

    void classify() {
        std::set<int> kind_leaves;
        for (const auto& [id, e] : g_.edges()) {
            bool is_kind = is_str(e.label) && as_str(e.label) == kind_edge_label;
            if (!is_kind && !is_int(e.label))
                fail(e.src, "edge label must be a child position or \"kind\"");
            if (is_kind) {
                if (!kind_leaves.insert(e.tgt).second)
                    fail(e.tgt, "node is the target of two kind edges");
            }
        }
        for (const auto& [id, n] : g_.nodes()) {
            if (n.mark != Mark::None) fail(id, "dangling mark");
            if (kind_leaves.count(id)) {
                if (!g_.out_edges(id).empty()) fail(id, "kind leaf has outgoing edges");
                if (g_.in_edges(id).size() != 1) fail(id, "kind leaf has extra incoming edges");
                continue;
            }
            std::string k;
            int kind_edges = 0;
            for (int eid : g_.out_edges(id)) {
                const GraphEdge& e = g_.edge(eid);
                if (is_str(e.label) && as_str(e.label) == kind_edge_label) {
                    ++kind_edges;
                    const GraphNode& leaf = g_.node(e.tgt);
                    if (!is_str(leaf.label)) fail(e.tgt, "kind leaf label must be a string");
                    k = as_str(leaf.label);
                }
            }
            if (kind_edges != 1) fail(id, "node must have exactly one kind edge");
            if (!known_kind(k)) fail(id, "unknown kind '" + k + "'");
            node_kind_.emplace(id, k);
            ast_nodes_.insert(id);
        }
    }

    static bool known_kind(const std::string& k) {
        static const std::set<std::string> kinds = {
            kind::spec,        kind::given,        kind::letting_domain, kind::letting_value,
            kind::find,        kind::ident,        kind::int_domain,     kind::int_range,
            kind::int_range_from, kind::int_range_to, kind::domain_ref,  kind::relation,
            kind::set_of,      kind::function_of,  kind::tuple_of,       kind::attr,
            kind::int_lit,     kind::tuple_lit,    kind::empty_set,      kind::binop,
            kind::not_,        kind::tuple_index,  kind::apply,          kind::for_all,
            kind::sum,         kind::to_int,       kind::defined,        kind::quant_domain,
            kind::quant_in,
        };
        return kinds.count(k) != 0;
    }

    int find_root() {
        int root = -1;
        for (int id : ast_nodes_) {
            bool has_parent = false;
            for (int eid : g_.in_edges(id))
                if (is_int(g_.edge(eid).label)) has_parent = true;
            if (!has_parent && node_kind_.at(id) == kind::spec) {
                if (root != -1) fail(id, "multiple roots");
                root = id;
            }
        }
        if (root == -1) fail(-1, "no root of kind \"spec\"");
        return root;
    }

    const std::string& kind_of(int id) const {
        auto it = node_kind_.find(id);
        if (it == node_kind_.end()) throw DecodeError{id, "not an AST node"};
        return it->second;
    }

    /// Positional children in order; positions must be exactly 1..k.
    std::vector<int> children(int id) {
        std::map<long long, int> by_pos;
        for (int eid : g_.out_edges(id)) {
            const GraphEdge& e = g_.edge(eid);
            if (!is_int(e.label)) continue;
            if (!by_pos.emplace(as_int(e.label), e.tgt).second)
                fail(id, "duplicate child position " + std::to_string(as_int(e.label)));
        }
        std::vector<int> out;
        long long expect = 1;
        for (const auto& [pos, child] : by_pos) {
            if (pos != expect)
                fail(id, "missing child position " + std::to_string(expect));
            ++expect;
            if (!visited_.insert(child).second)
                fail(child, "node has two parents (cycle or sharing)");
            out.push_back(child);
        }
        return out;
    }

    std::string str_label(int id) {
        if (!is_str(g_.node(id).label)) fail(id, "expected a string label");
        return as_str(g_.node(id).label);
    }

    essence::Declaration decode_declaration(int id) {
        using DK = essence::Declaration::Kind;
        const std::string& k = kind_of(id);
        essence::Declaration d;
        if (k == kind::given) d.kind = DK::Given;
        else if (k == kind::letting_domain) d.kind = DK::LettingDomain;
        else if (k == kind::letting_value) d.kind = DK::LettingValue;
        else d.kind = DK::Find;
        auto kids = children(id);
        if (kids.size() != 1) fail(id, "declaration must have exactly one name child");
        int name = kids[0];
        if (kind_of(name) != kind::ident) fail(name, "declaration name must be an ident");
        d.name = str_label(name);
        auto name_kids = children(name);
        if (name_kids.size() != 1) fail(name, "declared name must have exactly one child");
        if (d.kind == DK::LettingValue)
            d.value.emplace(decode_expr(name_kids[0]));
        else
            d.domain.emplace(decode_domain(name_kids[0]));
        return d;
    }

    essence::Domain decode_domain(int id) {
        using DK = essence::Domain::Kind;
        const std::string& k = kind_of(id);
        essence::Domain d;
        auto kids = children(id);
        auto take_attrs = [&](std::size_t from) {
            for (std::size_t i = from; i < kids.size(); ++i) d.attrs.push_back(decode_attr(kids[i]));
        };
        if (k == kind::int_domain) {
            d.kind = DK::IntUnbounded;
            if (!kids.empty()) fail(id, "int domain has no children");
        } else if (k == kind::int_range) {
            d.kind = DK::IntRange;
            if (kids.size() != 2) fail(id, "intRange needs two bounds");
            d.lo.emplace(decode_expr(kids[0]));
            d.hi.emplace(decode_expr(kids[1]));
        } else if (k == kind::int_range_from) {
            d.kind = DK::IntRange;
            if (kids.size() != 1) fail(id, "intRangeFrom needs one bound");
            d.lo.emplace(decode_expr(kids[0]));
        } else if (k == kind::int_range_to) {
            d.kind = DK::IntRange;
            if (kids.size() != 1) fail(id, "intRangeTo needs one bound");
            d.hi.emplace(decode_expr(kids[0]));
        } else if (k == kind::domain_ref) {
            d.kind = DK::Ref;
            d.name = str_label(id);
            if (!kids.empty()) fail(id, "domain reference has no children");
        } else if (k == kind::relation) {
            d.kind = DK::Relation;
            if (kids.size() < 2) fail(id, "relation needs two components");
            d.components.push_back(decode_domain(kids[0]));
            d.components.push_back(decode_domain(kids[1]));
            take_attrs(2);
        } else if (k == kind::set_of) {
            d.kind = DK::SetOf;
            if (kids.empty()) fail(id, "set needs an element domain");
            d.components.push_back(decode_domain(kids[0]));
            take_attrs(1);
        } else if (k == kind::function_of) {
            d.kind = DK::FunctionOf;
            if (kids.size() < 2) fail(id, "function needs two domains");
            d.components.push_back(decode_domain(kids[0]));
            d.components.push_back(decode_domain(kids[1]));
            take_attrs(2);
        } else if (k == kind::tuple_of) {
            d.kind = DK::TupleOf;
            for (int c : kids) d.components.push_back(decode_domain(c));
        } else {
            fail(id, "expected a domain, found kind '" + k + "'");
        }
        return d;
    }

    essence::Attribute decode_attr(int id) {
        if (kind_of(id) != kind::attr) fail(id, "expected an attribute");
        essence::Attribute a;
        a.name = str_label(id);
        auto kids = children(id);
        if (kids.size() > 1) fail(id, "attribute takes at most one argument");
        for (int c : kids) a.args.push_back(decode_expr(c));
        if (a.name == "size" && a.args.empty()) fail(id, "size attribute needs an argument");
        if (a.name != "size" && !a.args.empty()) fail(id, "attribute takes no argument");
        return a;
    }

    essence::QuantSource decode_quant_source(int id) {
        essence::QuantSource s;
        auto kids = children(id);
        if (kids.size() != 1) fail(id, "quantifier source needs one child");
        if (kind_of(id) == kind::quant_domain) {
            s.over_domain = true;
            s.domain.emplace(decode_domain(kids[0]));
        } else {
            s.over_domain = false;
            s.collection.emplace(decode_expr(kids[0]));
        }
        return s;
    }

    essence::Expr decode_expr(int id) {
        using EK = essence::Expr::Kind;
        const std::string& k = kind_of(id);
        essence::Expr e;
        auto kids = children(id);
        auto need = [&](std::size_t n, const char* what) {
            if (kids.size() != n) fail(id, std::string(what) + ": wrong arity");
        };
        if (k == kind::int_lit) {
            need(0, "intLit");
            if (!is_int(g_.node(id).label)) fail(id, "intLit label must be an integer");
            e.kind = EK::IntLit;
            e.value = as_int(g_.node(id).label);
        } else if (k == kind::ident) {
            need(0, "ident");
            e.kind = EK::Ident;
            e.name = str_label(id);
        } else if (k == kind::tuple_lit) {
            e.kind = EK::TupleLit;
            for (int c : kids) e.children.push_back(decode_expr(c));
        } else if (k == kind::empty_set) {
            need(0, "emptySet");
            e.kind = EK::EmptySet;
        } else if (k == kind::binop) {
            need(2, "binop");
            e.kind = EK::BinOp;
            e.name = str_label(id);
            static const std::set<std::string> ops = {"+", "-", "*", "=", "!=", "->",
                                                      "/\\", "in", "intersect"};
            if (!ops.count(e.name)) fail(id, "unknown operator '" + e.name + "'");
            e.children.push_back(decode_expr(kids[0]));
            e.children.push_back(decode_expr(kids[1]));
        } else if (k == kind::not_) {
            need(1, "not");
            e.kind = EK::Not;
            e.children.push_back(decode_expr(kids[0]));
        } else if (k == kind::tuple_index) {
            need(2, "tupleIndex");
            e.kind = EK::TupleIndex;
            e.children.push_back(decode_expr(kids[0]));
            const GraphNode& ix = g_.node(kids[1]);
            if (kind_of(kids[1]) != kind::int_lit || !is_int(ix.label) || as_int(ix.label) < 1)
                fail(kids[1], "tuple index must be an intLit >= 1");
            e.index = static_cast<int>(as_int(ix.label));
        } else if (k == kind::apply) {
            if (kids.empty()) fail(id, "apply needs a function child");
            e.kind = EK::Apply;
            if (kind_of(kids[0]) != kind::ident) fail(kids[0], "apply function must be an ident");
            e.name = str_label(kids[0]);
            visitedless_check(kids[0], id);
            for (std::size_t i = 1; i < kids.size(); ++i)
                e.children.push_back(decode_expr(kids[i]));
        } else if (k == kind::for_all || k == kind::sum) {
            e.kind = (k == kind::for_all) ? EK::ForAll : EK::Sum;
            // binder idents, then the source node, then the body
            std::size_t i = 0;
            while (i < kids.size() && kind_of(kids[i]) == kind::ident) {
                e.binders.push_back(str_label(kids[i]));
                if (!children(kids[i]).empty()) fail(kids[i], "binder has no children");
                ++i;
            }
            if (e.binders.empty()) fail(id, "quantifier needs at least one binder");
            if (e.kind == EK::Sum && e.binders.size() != 1) fail(id, "sum takes one binder");
            if (i + 2 != kids.size()) fail(id, "quantifier needs a source and a body");
            const std::string& sk = kind_of(kids[i]);
            if (sk != kind::quant_domain && sk != kind::quant_in)
                fail(kids[i], "expected a quantifier source");
            e.source.emplace(decode_quant_source(kids[i]));
            e.children.push_back(decode_expr(kids[i + 1]));
        } else if (k == kind::to_int) {
            need(1, "toInt");
            e.kind = EK::ToInt;
            e.children.push_back(decode_expr(kids[0]));
        } else if (k == kind::defined) {
            need(1, "defined");
            e.kind = EK::Defined;
            e.children.push_back(decode_expr(kids[0]));
        } else {
            fail(id, "expected an expression, found kind '" + k + "'");
        }
        return e;
    }

    void visitedless_check(int ident_node, int parent) {
        if (!children(ident_node).empty()) fail(parent, "apply function ident has no children");
    }
};

} // namespace detail

/// Decodes a host graph back to a specification, validating shape: the graph
/// must be tree-shaped once "kind" edges are removed, rooted at a single node
/// of kind "spec", with contiguous child positions, known kinds and no marks.
inline Result<essence::Specification, DecodeError> decode(const LabeledGraph& g) {
    detail::Decoder dec(g);
    return dec.run();
}

} // namespace specrw::graph

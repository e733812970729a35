#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace specrw::graph {

/// Every label in this artifact is a single atom: an integer or a string.
using Atom = std::variant<long long, std::string>;

inline Atom int_atom(long long v) { return Atom{v}; }
inline Atom str_atom(std::string s) { return Atom{std::move(s)}; }

inline bool is_int(const Atom& a) { return a.index() == 0; }
inline bool is_str(const Atom& a) { return a.index() == 1; }
inline long long as_int(const Atom& a) { return std::get<long long>(a); }
inline const std::string& as_str(const Atom& a) { return std::get<std::string>(a); }

inline std::string atom_to_string(const Atom& a) {
    return is_int(a) ? std::to_string(as_int(a)) : as_str(a);
}

enum class Mark { None, Red };

struct GraphNode {
    int id = 0;
    Atom label;
    Mark mark = Mark::None;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
    int id = 0;
    int src = 0;
    int tgt = 0;
    Atom label;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Directed labelled graph with stable integer ids; the GP2-style host-graph
/// form of an AST. Ids are never reused within a graph's lifetime.
class LabeledGraph {
public:
    int add_node(Atom label, Mark mark = Mark::None) {
        int id = next_node_id_++;
        nodes_.emplace(id, GraphNode{id, std::move(label), mark});
        out_[id];
        in_[id];
        return id;
    }

    /// Inserts a node with a caller-chosen id (file loading); id must be fresh.
    void add_node_with_id(int id, Atom label, Mark mark = Mark::None) {
        assert(!nodes_.count(id));
        nodes_.emplace(id, GraphNode{id, std::move(label), mark});
        out_[id];
        in_[id];
        next_node_id_ = std::max(next_node_id_, id + 1);
    }

    int add_edge(int src, int tgt, Atom label) {
        assert(nodes_.count(src) && nodes_.count(tgt));
        int id = next_edge_id_++;
        edges_.emplace(id, GraphEdge{id, src, tgt, std::move(label)});
        out_[src].push_back(id);
        in_[tgt].push_back(id);
        return id;
    }

    void add_edge_with_id(int id, int src, int tgt, Atom label) {
        assert(!edges_.count(id));
        assert(nodes_.count(src) && nodes_.count(tgt));
        edges_.emplace(id, GraphEdge{id, src, tgt, std::move(label)});
        out_[src].push_back(id);
        in_[tgt].push_back(id);
        next_edge_id_ = std::max(next_edge_id_, id + 1);
    }

    void remove_edge(int id) {
        auto it = edges_.find(id);
        assert(it != edges_.end());
        auto& o = out_[it->second.src];
        o.erase(std::find(o.begin(), o.end(), id));
        auto& i = in_[it->second.tgt];
        i.erase(std::find(i.begin(), i.end(), id));
        edges_.erase(it);
    }

    /// The node must be isolated.
    void remove_node(int id) {
        assert(nodes_.count(id));
        assert(out_[id].empty() && in_[id].empty());
        out_.erase(id);
        in_.erase(id);
        nodes_.erase(id);
    }

    void set_label(int node_id, Atom label) { nodes_.at(node_id).label = std::move(label); }
    void set_mark(int node_id, Mark mark) { nodes_.at(node_id).mark = mark; }
    void set_edge_label(int edge_id, Atom label) { edges_.at(edge_id).label = std::move(label); }

    bool has_node(int id) const { return nodes_.count(id) != 0; }
    bool has_edge(int id) const { return edges_.count(id) != 0; }
    const GraphNode& node(int id) const { return nodes_.at(id); }
    const GraphEdge& edge(int id) const { return edges_.at(id); }

    const std::map<int, GraphNode>& nodes() const { return nodes_; }
    const std::map<int, GraphEdge>& edges() const { return edges_; }

    std::vector<int> out_edges(int node_id) const {
        auto v = out_.at(node_id);
        std::sort(v.begin(), v.end());
        return v;
    }
    std::vector<int> in_edges(int node_id) const {
        auto v = in_.at(node_id);
        std::sort(v.begin(), v.end());
        return v;
    }
    std::size_t degree(int node_id) const { return out_.at(node_id).size() + in_.at(node_id).size(); }

    int next_node_id() const { return next_node_id_; }
    int next_edge_id() const { return next_edge_id_; }

    std::size_t red_count() const {
        std::size_t n = 0;
        for (const auto& [id, node] : nodes_)
            if (node.mark == Mark::Red) ++n;
        return n;
    }

    /// Checks id uniqueness (by construction), edge endpoints, and
    /// child-position uniqueness: no two out-edges of one node share an
    /// integer label. Returns a description of the first violation.
    std::optional<std::string> check_invariants() const {
        for (const auto& [id, e] : edges_) {
            if (!nodes_.count(e.src) || !nodes_.count(e.tgt))
                return "edge " + std::to_string(id) + " has a missing endpoint";
        }
        for (const auto& [nid, eids] : out_) {
            std::vector<long long> positions;
            for (int eid : eids) {
                const Atom& l = edges_.at(eid).label;
                if (is_int(l)) positions.push_back(as_int(l));
            }
            std::sort(positions.begin(), positions.end());
            if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
                return "node " + std::to_string(nid) + " has duplicate child positions";
        }
        return std::nullopt;
    }

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::map<int, GraphNode> nodes_;
    std::map<int, GraphEdge> edges_;
    std::map<int, std::vector<int>> out_;
    std::map<int, std::vector<int>> in_;
    int next_node_id_ = 0;
    int next_edge_id_ = 0;
};

} // namespace specrw::graph

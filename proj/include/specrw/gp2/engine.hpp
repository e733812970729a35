#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "specrw/gp2/rule.hpp"
#include "specrw/graph/labeled_graph.hpp"

namespace specrw::gp2 {

namespace detail {

inline bool atom_fits(VarType t, const graph::Atom& a) {
    switch (t) {
    case VarType::String: return graph::is_str(a);
    case VarType::Int: return graph::is_int(a);
    case VarType::Any: return true;
    }
    return false;
}

class Matcher {
public:
    Matcher(const Rule& rule, const graph::LabeledGraph& host) : rule_(rule), host_(host) {
        order_ = plan_order();
    }

    std::vector<Match> all() {
        if (!rule_.lhs.nodes.empty()) assign_node(0);
        else finish();
        std::sort(results_.begin(), results_.end(), canonical_less);
        results_.erase(std::unique(results_.begin(), results_.end()), results_.end());
        return std::move(results_);
    }

private:
    const Rule& rule_;
    const graph::LabeledGraph& host_;
    std::vector<std::size_t> order_; // indices into rule_.lhs.nodes

    std::map<std::string, int> node_map_;
    std::map<std::string, int> edge_map_;
    std::map<std::string, graph::Atom> assignment_;
    std::set<int> used_nodes_;
    std::set<int> used_edges_;
    std::vector<Match> results_;

    // Most-constrained-first ordering: prefer nodes connected to already
    // ordered ones, then literal-labelled nodes.
    std::vector<std::size_t> plan_order() const {
        const auto& nodes = rule_.lhs.nodes;
        std::vector<std::size_t> order;
        std::set<std::string> placed;
        while (order.size() < nodes.size()) {
            std::size_t best = nodes.size();
            int best_score = -1;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (placed.count(nodes[i].id)) continue;
                int score = 0;
                for (const auto& e : rule_.lhs.edges) {
                    bool touches = (e.src == nodes[i].id && placed.count(e.tgt)) ||
                                   (e.tgt == nodes[i].id && placed.count(e.src));
                    if (touches) score += 4;
                }
                if (!nodes[i].label.is_var) score += 2;
                if (nodes[i].mark == MarkPattern::MustBeRed) score += 1;
                if (score > best_score) {
                    best_score = score;
                    best = i;
                }
            }
            placed.insert(nodes[best].id);
            order.push_back(best);
        }
        return order;
    }

    bool label_match(const LabelPattern& p, const graph::Atom& a,
                     std::vector<std::string>& bound_trail) {
        if (!p.is_var) return p.literal == a;
        auto it = assignment_.find(p.var);
        if (it != assignment_.end()) return it->second == a;
        if (!atom_fits(rule_.param_type(p.var), a)) return false;
        assignment_.emplace(p.var, a);
        bound_trail.push_back(p.var);
        return true;
    }

    static bool mark_match(MarkPattern p, graph::Mark m) {
        switch (p) {
        case MarkPattern::MustBeNone: return m == graph::Mark::None;
        case MarkPattern::MustBeRed: return m == graph::Mark::Red;
        case MarkPattern::AnyMark: return true;
        }
        return false;
    }

    std::vector<int> node_candidates(const PatternNode& pn) const {
        // seed via an already-assigned neighbour when possible
        for (const auto& e : rule_.lhs.edges) {
            if (e.tgt == pn.id) {
                auto it = node_map_.find(e.src);
                if (it != node_map_.end()) {
                    std::vector<int> out;
                    for (int eid : host_.out_edges(it->second)) out.push_back(host_.edge(eid).tgt);
                    std::sort(out.begin(), out.end());
                    out.erase(std::unique(out.begin(), out.end()), out.end());
                    return out;
                }
            }
            if (e.src == pn.id) {
                auto it = node_map_.find(e.tgt);
                if (it != node_map_.end()) {
                    std::vector<int> out;
                    for (int eid : host_.in_edges(it->second)) out.push_back(host_.edge(eid).src);
                    std::sort(out.begin(), out.end());
                    out.erase(std::unique(out.begin(), out.end()), out.end());
                    return out;
                }
            }
        }
        std::vector<int> out;
        for (const auto& [id, n] : host_.nodes()) {
            if (!pn.label.is_var) {
                auto it = assignment_.end();
                (void)it;
                if (!(n.label == pn.label.literal)) continue;
            }
            out.push_back(id);
        }
        return out;
    }

    void assign_node(std::size_t k) {
        const PatternNode& pn = rule_.lhs.nodes[order_[k]];
        for (int candidate : node_candidates(pn)) {
            if (used_nodes_.count(candidate)) continue;
            const graph::GraphNode& hn = host_.node(candidate);
            if (!mark_match(pn.mark, hn.mark)) continue;
            std::vector<std::string> trail;
            if (!label_match(pn.label, hn.label, trail)) {
                for (const auto& v : trail) assignment_.erase(v);
                continue;
            }
            node_map_.emplace(pn.id, candidate);
            used_nodes_.insert(candidate);

            // edges whose endpoints are now both mapped and are not matched yet
            std::vector<const PatternEdge*> ready;
            for (const auto& e : rule_.lhs.edges) {
                if (edge_map_.count(e.id)) continue;
                if (node_map_.count(e.src) && node_map_.count(e.tgt)) ready.push_back(&e);
            }
            assign_edges(ready, 0, k);

            used_nodes_.erase(candidate);
            node_map_.erase(pn.id);
            for (const auto& v : trail) assignment_.erase(v);
        }
    }

    void assign_edges(const std::vector<const PatternEdge*>& ready, std::size_t i, std::size_t k) {
        if (i == ready.size()) {
            if (k + 1 < order_.size()) assign_node(k + 1);
            else finish();
            return;
        }
        const PatternEdge& pe = *ready[i];
        int hs = node_map_.at(pe.src);
        int ht = node_map_.at(pe.tgt);
        for (int eid : host_.out_edges(hs)) {
            const graph::GraphEdge& he = host_.edge(eid);
            if (he.tgt != ht) continue;
            if (used_edges_.count(eid)) continue;
            std::vector<std::string> trail;
            if (!label_match(pe.label, he.label, trail)) {
                for (const auto& v : trail) assignment_.erase(v);
                continue;
            }
            edge_map_.emplace(pe.id, eid);
            used_edges_.insert(eid);
            assign_edges(ready, i + 1, k);
            used_edges_.erase(eid);
            edge_map_.erase(pe.id);
            for (const auto& v : trail) assignment_.erase(v);
        }
    }

    void finish() {
        // dangling condition: a host node matched by a non-interface LHS node
        // may have no incident edges outside the matched edge image
        for (const auto& pn : rule_.lhs.nodes) {
            if (rule_.interface.count(pn.id)) continue;
            int h = node_map_.at(pn.id);
            std::size_t matched_incident = 0;
            for (const auto& [pid, eid] : edge_map_) {
                const graph::GraphEdge& he = host_.edge(eid);
                if (he.src == h) ++matched_incident;
                if (he.tgt == h) ++matched_incident;
            }
            if (matched_incident != host_.degree(h)) return;
        }
        Match m;
        m.node_map = node_map_;
        m.edge_map = edge_map_;
        m.assignment = assignment_;
        results_.push_back(std::move(m));
    }

    static bool canonical_less(const Match& a, const Match& b) {
        auto key = [](const Match& m) {
            std::vector<int> sorted_nodes;
            for (const auto& [pid, hid] : m.node_map) sorted_nodes.push_back(hid);
            std::sort(sorted_nodes.begin(), sorted_nodes.end());
            std::vector<int> by_pattern;
            for (const auto& [pid, hid] : m.node_map) by_pattern.push_back(hid);
            std::vector<int> edges_by_pattern;
            for (const auto& [pid, hid] : m.edge_map) edges_by_pattern.push_back(hid);
            return std::tuple(sorted_nodes, by_pattern, edges_by_pattern);
        };
        return key(a) < key(b);
    }
};

} // namespace detail

/// All injective matches of the rule's LHS into the host satisfying label,
/// mark and dangling conditions, in canonical order (lexicographic by sorted
/// matched host node ids, ties broken by pattern-ordered node and edge maps).
inline std::vector<Match> find_matches(const Rule& rule, const graph::LabeledGraph& host) {
    detail::Matcher m(rule, host);
    return m.all();
}

/// Applies a rule at a match. Non-interface LHS nodes and unmatched-in-RHS
/// edges are deleted; RHS-only nodes/edges are created fresh; interface nodes
/// and edges whose id appears on both sides are kept in place with label and
/// mark rewritten under the assignment. Host structure outside the match is
/// untouched.
inline graph::LabeledGraph apply(const Rule& rule, const Match& match,
                                 const graph::LabeledGraph& host) {
    graph::LabeledGraph g = host;
    auto subst = [&](const LabelPattern& p) -> graph::Atom {
        return p.is_var ? match.assignment.at(p.var) : p.literal;
    };
    auto concrete = [](MarkPattern m) {
        return m == MarkPattern::MustBeRed ? graph::Mark::Red : graph::Mark::None;
    };

    // rewrite interface nodes
    for (const auto& rn : rule.rhs.nodes) {
        if (!rule.interface.count(rn.id)) continue;
        int h = match.node_map.at(rn.id);
        g.set_label(h, subst(rn.label));
        g.set_mark(h, concrete(rn.mark));
    }
    // edges present on both sides stay in place, relabelled
    std::set<std::string> preserved;
    for (const auto& re : rule.rhs.edges) {
        if (rule.lhs.edge(re.id)) {
            preserved.insert(re.id);
            g.set_edge_label(match.edge_map.at(re.id), subst(re.label));
        }
    }
    // delete LHS-only edges, then LHS-only nodes (isolated by the dangling condition)
    for (const auto& le : rule.lhs.edges)
        if (!preserved.count(le.id)) g.remove_edge(match.edge_map.at(le.id));
    for (const auto& ln : rule.lhs.nodes)
        if (!rule.rhs.node(ln.id)) g.remove_node(match.node_map.at(ln.id));
    // create RHS-only nodes and edges
    std::map<std::string, int> rhs_host;
    for (const auto& rn : rule.rhs.nodes) {
        if (rule.interface.count(rn.id))
            rhs_host.emplace(rn.id, match.node_map.at(rn.id));
        else
            rhs_host.emplace(rn.id, g.add_node(subst(rn.label), concrete(rn.mark)));
    }
    for (const auto& re : rule.rhs.edges)
        if (!preserved.count(re.id))
            g.add_edge(rhs_host.at(re.src), rhs_host.at(re.tgt), subst(re.label));
    return g;
}

struct AppliedRule {
    std::string rule;
    std::string summary;
};

struct RunResult {
    enum class Status { Ok, Stuck, FuelExhausted };

    Status status = Status::Ok;
    graph::LabeledGraph graph;
    std::string stuck_at;
    std::vector<AppliedRule> log;
    int applications = 0;

    bool ok() const { return status == Status::Ok; }
};

inline constexpr int default_fuel = 10000;

namespace detail {

inline std::string summarize(const Match& m) {
    std::ostringstream os;
    os << "nodes{";
    bool first = true;
    for (const auto& [pid, hid] : m.node_map) {
        if (!first) os << " ";
        os << pid << "->" << hid;
        first = false;
    }
    os << "}";
    if (!m.assignment.empty()) {
        os << " vars{";
        first = true;
        for (const auto& [v, a] : m.assignment) {
            if (!first) os << " ";
            os << v << "=" << graph::atom_to_string(a);
            first = false;
        }
        os << "}";
    }
    return os.str();
}

struct FuelExhaustedSignal {};

class Interpreter {
public:
    Interpreter(const std::vector<Rule>& rules, graph::LabeledGraph host, int fuel)
        : rules_(rules), result_{}, fuel_(fuel) {
        result_.graph = std::move(host);
    }

    RunResult run(const RuleProgram& program) {
        try {
            if (exec(program, "Main")) {
                result_.status = RunResult::Status::Ok;
            } else {
                result_.status = RunResult::Status::Stuck;
            }
        } catch (FuelExhaustedSignal&) {
            result_.status = RunResult::Status::FuelExhausted;
        }
        return std::move(result_);
    }

private:
    const std::vector<Rule>& rules_;
    RunResult result_;
    int fuel_;

    const Rule* lookup(const std::string& name) const {
        for (const auto& r : rules_)
            if (r.name == name) return &r;
        return nullptr;
    }

    bool apply_first(const Rule& rule, const std::string& at) {
        auto matches = find_matches(rule, result_.graph);
        if (matches.empty()) return false;
        if (result_.applications >= fuel_) throw FuelExhaustedSignal{};
        result_.graph = apply(rule, matches.front(), result_.graph);
        ++result_.applications;
        result_.log.push_back({rule.name, summarize(matches.front())});
        (void)at;
        return true;
    }

    bool exec(const RuleProgram& p, const std::string& path) {
        switch (p.kind) {
        case RuleProgram::Kind::Call: {
            const Rule* r = lookup(p.rule_name);
            if (!r) {
                result_.stuck_at = path + "/" + p.rule_name + " (unknown rule)";
                return false;
            }
            if (!apply_first(*r, path)) {
                if (result_.stuck_at.empty()) result_.stuck_at = path + "/" + p.rule_name;
                return false;
            }
            return true;
        }
        case RuleProgram::Kind::Choice: {
            for (const auto& name : p.choices) {
                const Rule* r = lookup(name);
                if (r && apply_first(*r, path)) return true;
            }
            if (result_.stuck_at.empty()) result_.stuck_at = path + "/{...}";
            return false;
        }
        case RuleProgram::Kind::Seq: {
            for (std::size_t i = 0; i < p.children.size(); ++i)
                if (!exec(p.children[i], path + "/" + std::to_string(i + 1))) return false;
            return true;
        }
        case RuleProgram::Kind::Loop: {
            while (true) {
                graph::LabeledGraph snapshot = result_.graph;
                int before = result_.applications;
                if (!exec(p.children[0], path + "/loop")) {
                    result_.graph = std::move(snapshot);
                    result_.stuck_at.clear();
                    break;
                }
                // a zero-application success would loop forever; stop instead
                if (result_.applications == before) break;
            }
            return true;
        }
        case RuleProgram::Kind::Try: {
            graph::LabeledGraph snapshot = result_.graph;
            if (!exec(p.children[0], path + "/try")) {
                result_.graph = std::move(snapshot);
                result_.stuck_at.clear();
            }
            return true;
        }
        }
        return false;
    }
};

} // namespace detail

/// Runs a rule program over a host graph. Seq fails if any child fails;
/// Call/Choice fail when nothing matches; Loop repeats its body until failure
/// and then succeeds with the last successful graph; Try always succeeds.
/// Execution is deterministic: the first match in canonical order is chosen
/// (for Choice, rules are tried in listed order). `fuel` bounds the total
/// number of rule applications.
inline RunResult run(const RuleProgram& program, const std::vector<Rule>& rules,
                     graph::LabeledGraph host, int fuel = default_fuel) {
    detail::Interpreter interp(rules, std::move(host), fuel);
    return interp.run(program);
}

} // namespace specrw::gp2

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "specrw/graph/labeled_graph.hpp"

namespace specrw::gp2 {

enum class VarType { String, Int, Any };

/// A label position in a pattern: either a literal atom or a typed variable.
struct LabelPattern {
    bool is_var = false;
    graph::Atom literal;
    std::string var;

    static LabelPattern lit(graph::Atom a) {
        LabelPattern p;
        p.literal = std::move(a);
        return p;
    }
    static LabelPattern variable(std::string name) {
        LabelPattern p;
        p.is_var = true;
        p.var = std::move(name);
        return p;
    }
};

enum class MarkPattern { MustBeNone, MustBeRed, AnyMark };

struct PatternNode {
    std::string id;
    LabelPattern label;
    MarkPattern mark = MarkPattern::MustBeNone;
};

struct PatternEdge {
    std::string id;
    std::string src;
    std::string tgt;
    LabelPattern label;
};

struct PatternGraph {
    std::vector<PatternNode> nodes;
    std::vector<PatternEdge> edges;

    const PatternNode* node(const std::string& id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }
    const PatternEdge* edge(const std::string& id) const {
        for (const auto& e : edges)
            if (e.id == id) return &e;
        return nullptr;
    }
};

struct Rule {
    std::string name;
    std::vector<std::pair<std::string, VarType>> params;
    PatternGraph lhs;
    PatternGraph rhs;
    std::set<std::string> interface; // pattern node ids preserved by application

    VarType param_type(const std::string& name) const {
        for (const auto& [n, t] : params)
            if (n == name) return t;
        return VarType::Any;
    }
    bool has_param(const std::string& name) const {
        for (const auto& [n, t] : params)
            if (n == name) return true;
        return false;
    }
};

/// Control program over rules: sequence, one-of choice, as-long-as-possible
/// loop, and try.
struct RuleProgram {
    enum class Kind { Call, Seq, Choice, Loop, Try };

    Kind kind = Kind::Call;
    std::string rule_name;               // Call
    std::vector<std::string> choices;    // Choice
    std::vector<RuleProgram> children;   // Seq (all), Loop/Try (single body)

    static RuleProgram call(std::string name) {
        RuleProgram p;
        p.kind = Kind::Call;
        p.rule_name = std::move(name);
        return p;
    }
    static RuleProgram seq(std::vector<RuleProgram> steps) {
        RuleProgram p;
        p.kind = Kind::Seq;
        p.children = std::move(steps);
        return p;
    }
    static RuleProgram choice(std::vector<std::string> names) {
        RuleProgram p;
        p.kind = Kind::Choice;
        p.choices = std::move(names);
        return p;
    }
    static RuleProgram loop(RuleProgram body) {
        RuleProgram p;
        p.kind = Kind::Loop;
        p.children.push_back(std::move(body));
        return p;
    }
    static RuleProgram try_(RuleProgram body) {
        RuleProgram p;
        p.kind = Kind::Try;
        p.children.push_back(std::move(body));
        return p;
    }
};

/// An injective match of a rule's LHS into a host graph.
struct Match {
    std::map<std::string, int> node_map;          // lhs node id -> host node id
    std::map<std::string, int> edge_map;          // lhs edge id -> host edge id
    std::map<std::string, graph::Atom> assignment; // variable -> atom

    friend bool operator==(const Match&, const Match&) = default;
};

struct RuleFile {
    std::vector<Rule> rules;
    RuleProgram main;

    const Rule* rule(const std::string& name) const {
        for (const auto& r : rules)
            if (r.name == name) return &r;
        return nullptr;
    }
};

} // namespace specrw::gp2

#include <catch2/catch_amalgamated.hpp>

#include "specrw/essence/parser.hpp"
#include "specrw/gp2/engine.hpp"
#include "specrw/gp2/rule_parser.hpp"
#include "specrw/graph/encode.hpp"
#include "specrw/rules/builtin.hpp"

#include "../support/test_data.hpp"

using namespace specrw;
using graph::LabeledGraph;

namespace {

LabeledGraph listing1_host() {
    auto spec = essence::parse_spec(testsupport::listing1(), "listing1");
    REQUIRE(spec.ok());
    return graph::encode(*spec);
}

gp2::RuleFile parse_rules(const std::string& text) {
    auto file = gp2::parse_rule_file(text);
    REQUIRE(file.ok());
    return *file;
}

} // namespace

TEST_CASE("the tagging rule matches the encoded source exactly once") {
    LabeledGraph host = listing1_host();
    gp2::RuleFile file = parse_rules(rules::builtin_rule_files()[1].text);

    auto matches = gp2::find_matches(file.rules[0], host);
    REQUIRE(matches.size() == 1);
    const gp2::Match& m = matches[0];
    CHECK(graph::as_str(m.assignment.at("decisionVariableName")) == "colouring");
    CHECK(graph::as_str(m.assignment.at("specName")) == "listing1");
    CHECK(graph::as_int(m.assignment.at("findPos")) == 7);
    CHECK(m.assignment.count("n") == 0); // unused parameter stays unbound

    SECTION("application changes exactly one node and nothing else") {
        LabeledGraph after = gp2::apply(file.rules[0], m, host);
        REQUIRE(after.nodes().size() == host.nodes().size());
        REQUIRE(after.edges() == host.edges()); // bit-identical edges
        int changed = 0;
        for (const auto& [id, n] : host.nodes()) {
            const auto& n2 = after.node(id);
            if (!(n == n2)) {
                ++changed;
                CHECK(n.label == n2.label);
                CHECK(graph::as_str(n.label) == "relation");
                CHECK(n2.mark == graph::Mark::Red);
            }
        }
        CHECK(changed == 1);
    }
}

TEST_CASE("empty-LHS rule has exactly one empty match everywhere") {
    gp2::RuleFile file = parse_rules("Main = r\nr()[|]=>[|] interface = {}");
    LabeledGraph host = listing1_host();
    auto matches = gp2::find_matches(file.rules[0], host);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].node_map.empty());
    LabeledGraph after = gp2::apply(file.rules[0], matches[0], host);
    CHECK(after == host);

    LabeledGraph empty;
    CHECK(gp2::find_matches(file.rules[0], empty).size() == 1);
}

TEST_CASE("non-empty LHS against the empty host yields no matches") {
    gp2::RuleFile file = parse_rules("Main = r\nr()[ (a, \"x\") | ]=>[ (a, \"x\") | ] interface = { a }");
    LabeledGraph empty;
    CHECK(gp2::find_matches(file.rules[0], empty).empty());
}

TEST_CASE("matching is injective") {
    // two pattern nodes with the same label cannot share a host node
    gp2::RuleFile file = parse_rules(
        "Main = r\n"
        "r()[ (a, \"x\") (b, \"x\") | ]=>[ (a, \"x\") (b, \"x\") | ] interface = { a, b }");
    LabeledGraph host;
    host.add_node(graph::str_atom("x"));
    CHECK(gp2::find_matches(file.rules[0], host).empty());
    host.add_node(graph::str_atom("x"));
    CHECK(gp2::find_matches(file.rules[0], host).size() == 2); // both correspondences
}

TEST_CASE("dangling condition forbids deleting attached nodes") {
    // delete-leaf rule: parent kept, child deleted
    gp2::RuleFile file = parse_rules(
        "Main = r\n"
        "r(x, y, p : any)[ (a, x) (b, y) | (e, a, b, p) ]=>[ (a, x) | ] interface = { a }");
    LabeledGraph host;
    int n0 = host.add_node(graph::str_atom("p"));
    int n1 = host.add_node(graph::str_atom("c"));
    int n2 = host.add_node(graph::str_atom("g"));
    host.add_edge(n0, n1, graph::int_atom(1));
    host.add_edge(n1, n2, graph::int_atom(1));

    auto matches = gp2::find_matches(file.rules[0], host);
    // (n0,n1) is blocked: n1 has an outgoing edge outside the match image;
    // (n1,n2) deletes the leaf n2
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].node_map.at("a") == n1);
    CHECK(matches[0].node_map.at("b") == n2);

    LabeledGraph after = gp2::apply(file.rules[0], matches[0], host);
    CHECK(after.nodes().size() == 2);
    CHECK(after.edges().size() == 1);
    CHECK_FALSE(after.check_invariants().has_value());
}

TEST_CASE("canonical match order is by sorted host node ids") {
    gp2::RuleFile file = parse_rules(
        "Main = r\nr(x : any)[ (a, x) | ]=>[ (a, x) | ] interface = { a }");
    LabeledGraph host;
    host.add_node(graph::str_atom("m"));
    host.add_node(graph::str_atom("k"));
    host.add_node(graph::int_atom(5));
    auto matches = gp2::find_matches(file.rules[0], host);
    REQUIRE(matches.size() == 3);
    CHECK(matches[0].node_map.at("a") == 0);
    CHECK(matches[1].node_map.at("a") == 1);
    CHECK(matches[2].node_map.at("a") == 2);
}

TEST_CASE("run: program semantics") {
    std::string rules_text =
        "Main = shrink!\n"
        "shrink(x, y, p : any)[ (a, x # red) (b, y # red) | (e, a, b, p) ]=>"
        "[ (a, x # red) | ] interface = { a }\n";

    SECTION("loop over a red chain of three keeps one red node") {
        gp2::RuleFile file = parse_rules(rules_text);
        LabeledGraph host;
        int a = host.add_node(graph::str_atom("a"), graph::Mark::Red);
        int b = host.add_node(graph::str_atom("b"), graph::Mark::Red);
        int c = host.add_node(graph::str_atom("c"), graph::Mark::Red);
        host.add_edge(a, b, graph::int_atom(1));
        host.add_edge(b, c, graph::int_atom(1));

        auto r = gp2::run(file.main, file.rules, host);
        REQUIRE(r.ok());
        CHECK(r.applications == 2);
        CHECK(r.graph.nodes().size() == 1);
        CHECK(r.graph.red_count() == 1);
    }
    SECTION("seq of an unmatchable rule is stuck") {
        gp2::RuleFile file = parse_rules(
            "Main = ghost\nghost()[ (a, \"nope\") | ]=>[ (a, \"nope\") | ] interface = { a }");
        LabeledGraph host;
        host.add_node(graph::str_atom("x"));
        auto r = gp2::run(file.main, file.rules, host);
        CHECK(r.status == gp2::RunResult::Status::Stuck);
        CHECK(r.stuck_at.find("ghost") != std::string::npos);
    }
    SECTION("try of an unmatchable rule leaves the host unchanged") {
        gp2::RuleFile file = parse_rules(
            "Main = try(ghost)\nghost()[ (a, \"nope\") | ]=>[ (a, \"nope\") | ] interface = { a }");
        LabeledGraph host;
        host.add_node(graph::str_atom("x"));
        auto r = gp2::run(file.main, file.rules, host);
        REQUIRE(r.ok());
        CHECK(r.graph == host);
        CHECK(r.applications == 0);
    }
    SECTION("choice applies the first listed rule that matches") {
        gp2::RuleFile file = parse_rules(
            "Main = {first, second}\n"
            "first()[ (a, \"nope\") | ]=>[ (a, \"nope\") | ] interface = { a }\n"
            "second(x : any)[ (a, x) | ]=>[ (a, \"hit\") | ] interface = { a }\n");
        LabeledGraph host;
        host.add_node(graph::str_atom("x"));
        auto r = gp2::run(file.main, file.rules, host);
        REQUIRE(r.ok());
        CHECK(graph::as_str(r.graph.node(0).label) == "hit");
    }
    SECTION("fuel exhaustion reports instead of spinning") {
        // touch relabels a node to itself: always applicable
        gp2::RuleFile file = parse_rules(
            "Main = touch!\ntouch(x : any)[ (a, x) | ]=>[ (a, x) | ] interface = { a }");
        LabeledGraph host;
        host.add_node(graph::str_atom("x"));
        auto r = gp2::run(file.main, file.rules, host, 25);
        CHECK(r.status == gp2::RunResult::Status::FuelExhausted);
        CHECK(r.applications == 25);
    }
}

TEST_CASE("frame property: rewriting is local") {
    // relabel rule touching one node
    gp2::RuleFile file = parse_rules(
        "Main = r\nr()[ (a, \"target\") | ]=>[ (a, \"done\") | ] interface = { a }");
    LabeledGraph host = listing1_host();
    int target = host.add_node(graph::str_atom("target"));
    auto matches = gp2::find_matches(file.rules[0], host);
    REQUIRE(matches.size() == 1);
    LabeledGraph after = gp2::apply(file.rules[0], matches[0], host);
    for (const auto& [id, n] : host.nodes())
        if (id != target) CHECK(after.node(id) == n);
    CHECK(after.edges() == host.edges());
    CHECK(graph::as_str(after.node(target).label) == "done");
}

#include <catch2/catch_amalgamated.hpp>

#include "specrw/essence/equality.hpp"
#include "specrw/essence/parser.hpp"
#include "specrw/graph/encode.hpp"
#include "specrw/graph/host_format.hpp"

#include "../support/test_data.hpp"

using namespace specrw;
using graph::LabeledGraph;

namespace {

essence::Specification parse_ok(const std::string& text, const std::string& name = "spec") {
    auto r = essence::parse_spec(text, name);
    REQUIRE(r.ok());
    return *r;
}

// follows the positional edge with the given label from `from`
int child_at(const LabeledGraph& g, int from, long long pos) {
    for (int eid : g.out_edges(from)) {
        const auto& e = g.edge(eid);
        if (graph::is_int(e.label) && graph::as_int(e.label) == pos) return e.tgt;
    }
    FAIL("no child at position " << pos << " under node " << from);
    return -1;
}

std::string kind_of(const LabeledGraph& g, int node) {
    for (int eid : g.out_edges(node)) {
        const auto& e = g.edge(eid);
        if (graph::is_str(e.label) && graph::as_str(e.label) == "kind")
            return graph::as_str(g.node(e.tgt).label);
    }
    return "";
}

} // namespace

TEST_CASE("encoding exposes the find path the tag rule matches") {
    essence::Specification spec = parse_ok(testsupport::listing1(), "listing1");
    LabeledGraph g = graph::encode(spec);

    int root = 0; // pre-order: the root is created first
    CHECK(graph::as_str(g.node(root).label) == "listing1");
    CHECK(kind_of(g, root) == "spec");

    // the find declaration is the 7th declaration
    int find = child_at(g, root, 7);
    CHECK(graph::as_str(g.node(find).label) == "find");
    CHECK(kind_of(g, find) == "find");
    int name = child_at(g, find, 1);
    CHECK(graph::as_str(g.node(name).label) == "colouring");
    int relation = child_at(g, name, 1);
    CHECK(graph::as_str(g.node(relation).label) == "relation");
    CHECK(kind_of(g, relation) == "relation");
    // components first, attributes after
    CHECK(graph::as_str(g.node(child_at(g, relation, 1)).label) == "vertices");
    CHECK(graph::as_str(g.node(child_at(g, relation, 2)).label) == "colours");
    CHECK(graph::as_str(g.node(child_at(g, relation, 3)).label) == "size");

    // constraints follow the declarations
    CHECK(kind_of(g, child_at(g, root, 8)) == "forAll");
    CHECK(kind_of(g, child_at(g, root, 9)) == "forAll");

    CHECK(g.red_count() == 0);
    CHECK_FALSE(g.check_invariants().has_value());
}

TEST_CASE("empty specification encodes to root plus kind leaf") {
    LabeledGraph g = graph::encode(essence::Specification{});
    CHECK(g.nodes().size() == 2);
    CHECK(g.edges().size() == 1);
    auto decoded = graph::decode(g);
    REQUIRE(decoded.ok());
    CHECK(decoded->declarations.empty());
    CHECK(decoded->constraints.empty());
}

TEST_CASE("decode inverts encode on the golden corpus") {
    for (std::string text : {testsupport::listing1(), testsupport::listing3(),
                             testsupport::listing4(), std::string("find x : int(1..3)")}) {
        essence::Specification spec = parse_ok(text);
        auto decoded = graph::decode(graph::encode(spec));
        REQUIRE(decoded.ok());
        CHECK(essence::struct_eq(spec, *decoded));
    }
}

TEST_CASE("decode validates graph shape") {
    essence::Specification spec = parse_ok("find x : int(1..3)");
    LabeledGraph g = graph::encode(spec);

    SECTION("dangling mark") {
        LabeledGraph bad = g;
        bad.set_mark(0, graph::Mark::Red);
        auto r = graph::decode(bad);
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().rule.find("mark") != std::string::npos);
    }
    SECTION("unknown kind") {
        LabeledGraph bad = g;
        // relabel some kind leaf to an unknown kind
        for (const auto& [id, e] : bad.edges()) {
            if (graph::is_str(e.label) && graph::as_str(e.label) == "kind") {
                bad.set_label(e.tgt, graph::str_atom("mystery"));
                break;
            }
        }
        auto r = graph::decode(bad);
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().rule.find("unknown kind") != std::string::npos);
    }
    SECTION("missing child position") {
        LabeledGraph bad = g;
        // shift the find's root edge from position 1 to 2
        for (const auto& [id, e] : bad.edges()) {
            if (graph::is_int(e.label) && e.src == 0) {
                bad.set_edge_label(id, graph::int_atom(2));
                break;
            }
        }
        auto r = graph::decode(bad);
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().rule.find("missing child position") != std::string::npos);
    }
    SECTION("cycle / second parent") {
        LabeledGraph bad = g;
        // point a second positional edge at the find node
        int find = -1;
        for (const auto& [id, n] : bad.nodes())
            if (graph::is_str(n.label) && graph::as_str(n.label) == "find") find = id;
        REQUIRE(find >= 0);
        bad.add_edge(find, 0, graph::int_atom(2)); // creates a cycle through the root
        auto r = graph::decode(bad);
        REQUIRE_FALSE(r.ok());
    }
    SECTION("node without kind edge") {
        LabeledGraph bad = g;
        bad.add_node(graph::str_atom("stray"));
        auto r = graph::decode(bad);
        REQUIRE_FALSE(r.ok());
    }
}

TEST_CASE("host graph text round trips") {
    essence::Specification spec = parse_ok(testsupport::listing1(), "listing1");
    LabeledGraph g = graph::encode(spec);

    std::string text = graph::write_host_graph(g);
    auto back = graph::read_host_graph(text);
    REQUIRE(back.ok());
    CHECK(*back == g); // ids preserved by the reader
    CHECK(graph::write_host_graph(*back) == text);

    SECTION("empty graph") {
        LabeledGraph empty;
        std::string t = graph::write_host_graph(empty);
        auto e = graph::read_host_graph(t);
        REQUIRE(e.ok());
        CHECK(e->nodes().empty());
        auto bare = graph::read_host_graph("[ | ]");
        REQUIRE(bare.ok());
        CHECK(bare->nodes().empty());
    }
    SECTION("marks and escapes") {
        LabeledGraph h;
        int a = h.add_node(graph::str_atom("say \"hi\"\\"), graph::Mark::Red);
        int b = h.add_node(graph::int_atom(-3));
        h.add_edge(a, b, graph::str_atom("kind"));
        auto back2 = graph::read_host_graph(graph::write_host_graph(h));
        REQUIRE(back2.ok());
        CHECK(*back2 == h);
    }
    SECTION("parse errors carry positions") {
        auto bad = graph::read_host_graph("[ (0, \"a\") | (0, 0, 1, 1) ]");
        REQUIRE_FALSE(bad.ok()); // edge references a missing node
        auto bad2 = graph::read_host_graph("[ (0, ) | ]");
        REQUIRE_FALSE(bad2.ok());
        CHECK(bad2.error().line >= 1);
    }
}

TEST_CASE("example host text from the rule syntax parses") {
    auto g = graph::read_host_graph(R"([ (0, "spec") (1, "find") | (0, 0, 1, 1) ])");
    REQUIRE(g.ok());
    CHECK(g->nodes().size() == 2);
    CHECK(g->edges().size() == 1);
}

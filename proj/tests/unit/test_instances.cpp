#include <catch2/catch_amalgamated.hpp>

#include "specrw/essence/parser.hpp"
#include "specrw/eval/evaluator.hpp"
#include "specrw/instances/generator.hpp"

#include "../support/test_data.hpp"

using namespace specrw;

TEST_CASE("grid cardinality follows the configuration product") {
    SECTION("the full evaluation grid shape") {
        inst::GridConfig cfg;
        cfg.n_values = {10, 20, 30, 40};
        for (long long d = 20; d <= 80; d += 5) cfg.edge_density_percents.push_back(d);
        cfg.cpn_values = {2, 3, 4, 5};
        cfg.colours_multipliers = {4, 5, 6};
        cfg.seed = 1;
        auto instances = inst::generate_grid(cfg);
        REQUIRE(instances.ok());
        CHECK(instances->size() == 4u * 13u * 4u * 3u); // 624
    }
    SECTION("desk grid") {
        inst::GridConfig cfg;
        cfg.n_values = {2, 3, 4};
        cfg.edge_density_percents = {50};
        cfg.cpn_values = {1, 2};
        cfg.colours_multipliers = {2};
        cfg.seed = 7;
        auto instances = inst::generate_grid(cfg);
        REQUIRE(instances.ok());
        REQUIRE(instances->size() == 6);
        CHECK(instances->at(0).id == "n2_d50_cpn1_m2");
        CHECK(instances->at(0).find("numberColours")->num == 2);
        CHECK(instances->at(5).find("numberColours")->num == 4);
    }
    SECTION("determinism in the seed") {
        inst::GridConfig cfg;
        cfg.n_values = {4};
        cfg.edge_density_percents = {50};
        cfg.cpn_values = {1};
        cfg.colours_multipliers = {2};
        cfg.seed = 99;
        auto a = inst::generate_grid(cfg);
        auto b = inst::generate_grid(cfg);
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        for (std::size_t i = 0; i < a->size(); ++i)
            CHECK(a->at(i).bindings == b->at(i).bindings);
        cfg.seed = 100;
        auto c = inst::generate_grid(cfg);
        REQUIRE(c.ok());
        bool same = true;
        for (std::size_t i = 0; i < a->size(); ++i)
            same = same && a->at(i).bindings == c->at(i).bindings;
        CHECK_FALSE(same); // n=4 at 50% has 8 of 12 slots; seeds should differ
    }
    SECTION("configuration validation") {
        inst::GridConfig cfg;
        CHECK_FALSE(inst::generate_grid(cfg).ok());
        cfg.n_values = {2};
        cfg.edge_density_percents = {0};
        cfg.cpn_values = {1};
        cfg.colours_multipliers = {2};
        CHECK_FALSE(inst::generate_grid(cfg).ok());
        cfg.edge_density_percents = {101};
        CHECK_FALSE(inst::generate_grid(cfg).ok());
        cfg.edge_density_percents = {50};
        cfg.cpn_values = {0};
        CHECK_FALSE(inst::generate_grid(cfg).ok());
    }
}

TEST_CASE("edge sampling hits the density target") {
    SECTION("directed counts are exact") {
        for (long long n : {2, 3, 4, 6}) {
            for (long long d : {10, 25, 50, 75, 100}) {
                auto edges = inst::sample_edges(n, d, 5, /*directed=*/true);
                long long expected = std::min(n * n * d / 100, n * (n - 1));
                CHECK(static_cast<long long>(edges.size()) == expected);
                for (const auto& [u, v] : edges) CHECK(u != v);
            }
        }
    }
    SECTION("undirected counts round down to even and stay symmetric") {
        for (long long n : {2, 3, 4, 6}) {
            for (long long d : {10, 25, 50, 75, 100}) {
                auto edges = inst::sample_edges(n, d, 5, /*directed=*/false);
                long long target = std::min(n * n * d / 100, n * (n - 1));
                CHECK(static_cast<long long>(edges.size()) == target - target % 2);
                for (const auto& [u, v] : edges)
                    CHECK(std::find(edges.begin(), edges.end(), std::make_pair(v, u)) !=
                          edges.end());
            }
        }
    }
}

TEST_CASE("generated instances inhabit the declared domains") {
    auto spec = essence::parse_spec(testsupport::listing1());
    REQUIRE(spec.ok());
    inst::GridConfig cfg;
    cfg.n_values = {2, 3, 4};
    cfg.edge_density_percents = {25, 75};
    cfg.cpn_values = {1, 2};
    cfg.colours_multipliers = {2};
    cfg.seed = 3;
    auto instances = inst::generate_grid(cfg);
    REQUIRE(instances.ok());
    for (const auto& i : *instances) {
        INFO(i.id);
        CHECK_NOTHROW(eval::build_env(*spec, i)); // build_env re-checks inhabitance
    }
}

TEST_CASE("edge lists load with symmetric closure by default") {
    SECTION("basic with header") {
        auto g = inst::read_edge_list("n 4\n0 1\n2 3\n");
        REQUIRE(g.ok());
        CHECK(g->n == 4);
        CHECK(g->edges.size() == 4); // both orientations
    }
    SECTION("directed keeps lines as given") {
        auto g = inst::read_edge_list("0 1\n2 3\n", /*directed=*/true);
        REQUIRE(g.ok());
        CHECK(g->n == 4); // 1 + max id
        CHECK(g->edges.size() == 2);
    }
    SECTION("duplicates are dropped") {
        auto g = inst::read_edge_list("0 1\n1 0\n0 1\n");
        REQUIRE(g.ok());
        CHECK(g->edges.size() == 2);
    }
    SECTION("empty file") {
        auto g = inst::read_edge_list("");
        REQUIRE(g.ok());
        CHECK(g->n == 0);
        CHECK(g->edges.empty());
    }
    SECTION("self-loops are rejected") {
        auto g = inst::read_edge_list("0 0\n");
        REQUIRE_FALSE(g.ok());
        CHECK(g.error().kind == inst::EdgeListError::Kind::SelfLoop);
    }
    SECTION("parse errors name the line") {
        auto g = inst::read_edge_list("0 1\nx y\n");
        REQUIRE_FALSE(g.ok());
        CHECK(g.error().line == 2);
    }
}

TEST_CASE("the dodecahedral graph ships as an edge list") {
    auto g = inst::read_edge_list(testsupport::read_file(testsupport::data_dir() +
                                                         "/dodecahedral.edges"));
    REQUIRE(g.ok());
    CHECK(g->n == 20);
    CHECK(g->edges.size() == 60); // 30 undirected edges, both orientations

    std::map<long long, int> degree;
    for (const auto& [u, v] : g->edges) degree[u]++;
    for (const auto& [v, d] : degree) CHECK(d == 3);

    eval::Instance inst = inst::edge_list_to_param(*g, 15, 5, "dodecahedral");
    CHECK(inst.find("n")->num == 20);
    CHECK(inst.find("edges")->elems.size() == 60);
    CHECK(inst.find("coloursPerNode")->num == 5);
}

#include <catch2/catch_amalgamated.hpp>

#include "specrw/essence/equality.hpp"
#include "specrw/essence/parser.hpp"
#include "specrw/essence/printer.hpp"

#include "../support/test_data.hpp"

using namespace specrw::essence;

namespace {

Specification parse_ok(const std::string& text, const std::string& name = "spec") {
    auto r = parse_spec(text, name);
    INFO((r.ok() ? std::string() : r.error().to_string()));
    REQUIRE(r.ok());
    return *r;
}

} // namespace

TEST_CASE("parse k-fold colouring specification") {
    Specification spec = parse_ok(testsupport::listing1(), "listing1");

    int givens = 0, lettings = 0, finds = 0;
    for (const auto& d : spec.declarations) {
        switch (d.kind) {
        case Declaration::Kind::Given: ++givens; break;
        case Declaration::Kind::LettingDomain:
        case Declaration::Kind::LettingValue: ++lettings; break;
        case Declaration::Kind::Find: ++finds; break;
        }
    }
    CHECK(givens == 4);
    CHECK(lettings == 2);
    CHECK(finds == 1);
    CHECK(spec.constraints.size() == 2);

    const Declaration* find = spec.find_decl("colouring");
    REQUIRE(find != nullptr);
    CHECK(find->kind == Declaration::Kind::Find);
    REQUIRE(find->domain.has_value());
    CHECK(find->domain->kind == Domain::Kind::Relation);
    REQUIRE(find->domain->attrs.size() == 1);
    CHECK(find->domain->attrs[0].name == "size");
    CHECK(find->domain->components[0].name == "vertices");
    CHECK(find->domain->components[1].name == "colours");

    // first constraint: forAll (u,v) in edges . forAll ... -> !(... in ...)
    const Expr& c0 = spec.constraints[0].expr;
    REQUIRE(c0.kind == Expr::Kind::ForAll);
    CHECK(c0.binders == std::vector<std::string>{"u", "v"});
    CHECK_FALSE(c0.source->over_domain);
    REQUIRE(c0.children[0].kind == Expr::Kind::ForAll);
    REQUIRE(c0.children[0].children[0].kind == Expr::Kind::BinOp);
    CHECK(c0.children[0].children[0].name == "->");

    // second constraint: forAll u : vertices . coloursPerNode = (sum ...)
    const Expr& c1 = spec.constraints[1].expr;
    REQUIRE(c1.kind == Expr::Kind::ForAll);
    CHECK(c1.source->over_domain);
    const Expr& eq = c1.children[0];
    REQUIRE(eq.kind == Expr::Kind::BinOp);
    CHECK(eq.name == "=");
    CHECK(eq.children[0].kind == Expr::Kind::Ident);
    CHECK(eq.children[1].kind == Expr::Kind::Sum);
}

TEST_CASE("parse empty specification") {
    Specification spec = parse_ok("");
    CHECK(spec.declarations.empty());
    CHECK(spec.constraints.empty());
    CHECK(print_spec(spec).empty());
}

TEST_CASE("parse minimal find specification") {
    Specification spec = parse_ok("find x : int(1..3)\nsuch that x = 2");
    REQUIRE(spec.declarations.size() == 1);
    CHECK(spec.declarations[0].kind == Declaration::Kind::Find);
    REQUIRE(spec.constraints.size() == 1);
}

TEST_CASE("combined given declaration expands to one declaration per name") {
    Specification spec = parse_ok("given n : int\ngiven a, b : int(1..n)");
    REQUIRE(spec.declarations.size() == 3);
    CHECK(spec.declarations[1].name == "a");
    CHECK(spec.declarations[2].name == "b");
    CHECK(eq_domain(*spec.declarations[1].domain, *spec.declarations[2].domain));
}

TEST_CASE("parse errors carry position and expectations") {
    auto r = parse_spec("given n :");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == SpecError::Kind::Parse);
    CHECK(r.error().line == 1);
    CHECK_FALSE(r.error().expected.empty());

    auto r2 = parse_spec("letting x be domain multiset of int");
    REQUIRE_FALSE(r2.ok());

    auto r3 = parse_spec("find m : relation of ( int * int * int )");
    REQUIRE_FALSE(r3.ok());
}

TEST_CASE("scope errors: use before declaration and duplicates") {
    auto r = parse_spec("letting vertices be domain int(0..n-1)\ngiven n : int");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == SpecError::Kind::Scope);

    auto r2 = parse_spec("given n : int\ngiven n : int");
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.error().kind == SpecError::Kind::Scope);

    // quantifier binders are in scope inside the body only
    auto r3 = parse_spec("given s : int\nsuch that (forAll q : int(1..s) . q = 1) /\\ q = 1");
    REQUIRE_FALSE(r3.ok());
    CHECK(r3.error().kind == SpecError::Kind::Scope);
}

TEST_CASE("round trip: golden corpus reaches a print fixpoint") {
    for (std::string text : {testsupport::listing1(), testsupport::listing3(), testsupport::listing4()}) {
        Specification once = parse_ok(text);
        std::string printed = print_spec(once);
        Specification twice = parse_ok(printed);
        CHECK(struct_eq(once, twice));
        CHECK(print_spec(twice) == printed); // printer fixpoint, byte-identical
    }
}

TEST_CASE("printer keeps comments with their items") {
    Specification spec = parse_ok(testsupport::listing1());
    std::string printed = print_spec(spec);
    CHECK(printed.find("$ endpoints of edges do not share colours") != std::string::npos);
    CHECK(printed.find("$ enforce number of colours per node") != std::string::npos);
    // comment precedes its constraint
    CHECK(printed.find("$ endpoints") < printed.find("forAll (u,v) in edges"));
}

TEST_CASE("struct_eq semantics") {
    Specification l1a = parse_ok(testsupport::listing1());
    Specification l1b = parse_ok(testsupport::listing1());
    Specification l3 = parse_ok(testsupport::listing3());
    CHECK(struct_eq(l1a, l1b));
    CHECK_FALSE(struct_eq(l1a, l3));

    std::string renamed = testsupport::listing3();
    auto replace_all = [](std::string s, const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
        return s;
    };
    renamed = replace_all(renamed, "(u,v)", "(a,b)");
    renamed = replace_all(renamed, "colouring(v)", "colouring(b)");
    renamed = replace_all(renamed, "colouring(u)", "colouring(a)");
    Specification l3r = parse_ok(renamed);
    CHECK_FALSE(struct_eq(l3, l3r));
    CHECK(struct_eq(l3, l3r, /*alpha_binders=*/true));

    // alpha flag does not excuse free-name differences
    std::string other = replace_all(testsupport::listing3(), "coloursSet", "cs");
    CHECK_FALSE(struct_eq(l3, parse_ok(other), true));
}

TEST_CASE("expression precedence round trips") {
    auto echo = [&](const std::string& expr_text) {
        std::string text = "given a : int\ngiven b : int\ngiven c : int\nsuch that " + expr_text;
        Specification s1 = parse_ok(text);
        Specification s2 = parse_ok(print_spec(s1));
        CHECK(struct_eq(s1, s2));
        return print_expr(s1.constraints[0].expr);
    };
    CHECK(echo("a+b*c = c") == "a+b*c = c");
    CHECK(echo("(a+b)*c = c") == "(a+b)*c = c");
    CHECK(echo("a-b-c = 0") == "a-b-c = 0");
    CHECK(echo("a-(b-c) = 0") == "a-(b-c) = 0");
    CHECK(echo("a = b -> b = c -> a = c") == "a = b -> b = c -> a = c");
    CHECK(echo("(a = b -> b = c) -> a = c") == "(a = b -> b = c) -> a = c");
    CHECK(echo("!(a = b)") == "!(a = b)");
    CHECK(echo("a = 1 /\\ b = 2") == "a = 1 /\\ b = 2");
    CHECK(echo("toInt(a = b)+1 = 2") == "toInt(a = b)+1 = 2");
}

TEST_CASE("quantifier printing matches the source idiom") {
    Specification spec = parse_ok(testsupport::listing1());
    std::string counting = print_expr(spec.constraints[1].expr);
    CHECK(counting ==
          "forAll u : vertices . coloursPerNode = "
          "(sum colourAssignment in colouring . toInt(colourAssignment[1] = u))");
}

#include <catch2/catch_amalgamated.hpp>

#include "specrw/gp2/rule_parser.hpp"
#include "specrw/rules/builtin.hpp"

using namespace specrw;
using gp2::RuleParseError;

namespace {

// Listing-style tagging rule, exactly as shipped.
const std::string tag_rule_text = rules::builtin_rule_files()[1].text;

} // namespace

TEST_CASE("the shipped tagging rule file parses verbatim") {
    auto file = gp2::parse_rule_file(tag_rule_text);
    REQUIRE(file.ok());
    REQUIRE(file->rules.size() == 1);

    const gp2::Rule& rule = file->rules[0];
    CHECK(rule.name == "tagRelationDecisionVariable");
    REQUIRE(rule.params.size() == 4);
    CHECK(rule.params[0] == std::pair<std::string, gp2::VarType>{"specName", gp2::VarType::String});
    CHECK(rule.params[1].first == "decisionVariableName");
    CHECK(rule.params[2] == std::pair<std::string, gp2::VarType>{"findPos", gp2::VarType::Int});
    // the fourth parameter is declared but unused; accepted
    CHECK(rule.params[3].first == "n");

    CHECK(rule.lhs.nodes.size() == 4);
    CHECK(rule.lhs.edges.size() == 3);
    CHECK(rule.rhs.nodes.size() == 4);
    CHECK(rule.interface == std::set<std::string>{"n0", "n1", "n2", "n3"});

    // only n3's mark differs between the sides
    CHECK(rule.lhs.node("n3")->mark == gp2::MarkPattern::MustBeNone);
    CHECK(rule.rhs.node("n3")->mark == gp2::MarkPattern::MustBeRed);
    CHECK(rule.lhs.node("n1")->label.is_var == false);
    CHECK(graph::as_str(rule.lhs.node("n1")->label.literal) == "find");
    CHECK(rule.lhs.node("n2")->label.is_var);

    CHECK(file->main.kind == gp2::RuleProgram::Kind::Call);
    CHECK(file->main.rule_name == "tagRelationDecisionVariable");
}

TEST_CASE("identity rule: empty sides") {
    auto file = gp2::parse_rule_file("Main = r\nr()[|]=>[|] interface = {}");
    REQUIRE(file.ok());
    CHECK(file->rules[0].lhs.nodes.empty());
    CHECK(file->rules[0].rhs.nodes.empty());
    CHECK(file->rules[0].interface.empty());
}

TEST_CASE("program control syntax") {
    auto file = gp2::parse_rule_file(
        "Main = a; try(b); {a, b}; (a; b)!\n"
        "a()[|]=>[|] interface = {}\n"
        "b()[|]=>[|] interface = {}\n");
    REQUIRE(file.ok());
    REQUIRE(file->main.kind == gp2::RuleProgram::Kind::Seq);
    REQUIRE(file->main.children.size() == 4);
    CHECK(file->main.children[0].kind == gp2::RuleProgram::Kind::Call);
    CHECK(file->main.children[1].kind == gp2::RuleProgram::Kind::Try);
    CHECK(file->main.children[2].kind == gp2::RuleProgram::Kind::Choice);
    CHECK(file->main.children[3].kind == gp2::RuleProgram::Kind::Loop);
    CHECK(file->main.children[3].children[0].kind == gp2::RuleProgram::Kind::Seq);
}

TEST_CASE("rule file rejections") {
    SECTION("RHS variable absent from LHS") {
        auto r = gp2::parse_rule_file(
            "Main = r\n"
            "r(x : string)[ (a, \"k\") | ]=>[ (a, x) | ] interface = { a }");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::UndeclaredVariable);
    }
    SECTION("label variable that is not a parameter") {
        auto r = gp2::parse_rule_file("Main = r\nr()[ (a, x) | ]=>[ (a, x) | ] interface = { a }");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::UndeclaredVariable);
    }
    SECTION("interface node missing from a side") {
        auto r = gp2::parse_rule_file(
            "Main = r\nr()[ (a, 1) | ]=>[ | ] interface = { a }");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::InterfaceMismatch);
    }
    SECTION("node on both sides but not in the interface") {
        auto r = gp2::parse_rule_file(
            "Main = r\nr()[ (a, 1) | ]=>[ (a, 1) | ] interface = { }");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::InterfaceMismatch);
    }
    SECTION("shared edge id with different endpoints") {
        auto r = gp2::parse_rule_file(
            "Main = r\n"
            "r()[ (a, 1) (b, 2) | (e, a, b, 1) ]=>[ (a, 1) (b, 2) | (e, b, a, 1) ] "
            "interface = { a, b }");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::InterfaceMismatch);
    }
    SECTION("unknown program rule name") {
        auto r = gp2::parse_rule_file("Main = ghost\nr()[|]=>[|] interface = {}");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().kind == RuleParseError::Kind::UnresolvedRule);
    }
    SECTION("syntax error carries a position") {
        auto r = gp2::parse_rule_file("Main = r\nr()[ (a 1) | ]=>[|] interface = {}");
        REQUIRE_FALSE(r.ok());
        CHECK(r.error().line == 2);
    }
    SECTION("RHS mark any is rejected") {
        auto r = gp2::parse_rule_file(
            "Main = r\nr()[ (a, 1) | ]=>[ (a, 1 # any) | ] interface = { a }");
        REQUIRE_FALSE(r.ok());
    }
    SECTION("missing Main") {
        auto r = gp2::parse_rule_file("r()[|]=>[|] interface = {}");
        REQUIRE_FALSE(r.ok());
    }
}

TEST_CASE("every shipped rule file parses") {
    for (const auto& [name, text] : rules::builtin_rule_files()) {
        INFO(name);
        auto file = gp2::parse_rule_file(text);
        CHECK(file.ok());
    }
}

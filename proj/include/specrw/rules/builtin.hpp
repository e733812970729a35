#pragma once

#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/essence/ast.hpp"
#include "specrw/essence/equality.hpp"
#include "specrw/essence/scope.hpp"
#include "specrw/gp2/engine.hpp"
#include "specrw/gp2/rule_parser.hpp"
#include "specrw/graph/encode.hpp"

namespace specrw::rules {

struct StageFile {
    std::string name;
    std::string text;
};

namespace detail {

// Verbatim rule from the shipped library's tagging stage. Matches a find
// whose declared type is a relation and flags the type node.
inline constexpr const char* tag_relation_decision_variable_text =
    R"GP2(Main = tagRelationDecisionVariable

tagRelationDecisionVariable(specName,decisionVariableName:string;findPos,n:int)
\\ left-hand side of the rule
[
    (n0, specName) (n1, "find") (n2, decisionVariableName) (n3, "relation")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1)
]
=>
\\ right-hand side of the rule
[
    (n0, specName) (n1, "find") (n2, decisionVariableName) (n3, "relation"# red)
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1)
]
interface = {  n0,n1, n2, n3 }
)GP2";

inline constexpr const char* normalize_counting_text =
    R"GP2(Main = try(normalizeCommutedCounting!)

\\ rewrite <sum ...> = <name> into <name> = <sum ...> so the tagging stage
\\ only needs to recognise one orientation of the counting idiom
normalizeCommutedCounting(k : any)
[
    (m0, "=") (m1, "sum") (m2, k)
    (q0, "binop") (q1, "sum") (q2, "ident")
|
    (e0, m0, m1, 1) (e1, m0, m2, 2)
    (g0, m0, q0, "kind") (g1, m1, q1, "kind") (g2, m2, q2, "kind")
]
=>
[
    (m0, "=") (m1, "sum") (m2, k)
    (q0, "binop") (q1, "sum") (q2, "ident")
|
    (e2, m0, m2, 1) (e3, m0, m1, 2)
    (g0, m0, q0, "kind") (g1, m1, q1, "kind") (g2, m2, q2, "kind")
]
interface = { m0, m1, m2, q0, q1, q2 }
)GP2";

// Tags the head of the counting constraint and the inner quantification of
// the adjacency constraint. Kind branches are matched explicitly so symbol
// labels cannot be confused with identifiers of the same spelling.
inline constexpr const char* tag_constraints_text =
    R"GP2(Main = tagCountingConstraint; tagInnerQuantification

\\ forAll <u> : <dom> . <k> = sum <t> in <dv> . toInt(<t>[1] = <u>)
\\ where <dv> is the tagged decision variable and <dom> its first component
tagCountingConstraint(specName, dv, k, dom, u, t : string; findPos, cPos : int)
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n4, dom)
    (c0, "forAll") (c1, u) (c2, ":") (c3, dom) (c4, "=") (c5, k)
    (c6, "sum") (c7, t) (c8, "in") (c9, dv) (c10, "toInt") (c11, "=")
    (c12, "[]") (c13, t) (c14, 1) (c15, u)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef")
    (kc0, "forAll") (kc1, "ident") (kc2, "quantDomain") (kc3, "domainRef")
    (kc4, "binop") (kc5, "ident") (kc6, "sum") (kc7, "ident") (kc8, "quantIn")
    (kc9, "ident") (kc10, "toInt") (kc11, "binop") (kc12, "tupleIndex")
    (kc13, "ident") (kc14, "intLit") (kc15, "ident")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n4, 1)
    (f1, n0, c0, cPos)
    (f2, c0, c1, 1) (f3, c0, c2, 2) (f4, c2, c3, 1) (f5, c0, c4, 3)
    (f6, c4, c5, 1) (f7, c4, c6, 2)
    (f8, c6, c7, 1) (f9, c6, c8, 2) (f10, c8, c9, 1) (f11, c6, c10, 3)
    (f12, c10, c11, 1)
    (f13, c11, c12, 1) (f14, c12, c13, 1) (f15, c12, c14, 2) (f16, c11, c15, 2)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (g3, n3, kn3, "kind") (g4, n4, kn4, "kind")
    (h0, c0, kc0, "kind") (h1, c1, kc1, "kind") (h2, c2, kc2, "kind")
    (h3, c3, kc3, "kind") (h4, c4, kc4, "kind") (h5, c5, kc5, "kind")
    (h6, c6, kc6, "kind") (h7, c7, kc7, "kind") (h8, c8, kc8, "kind")
    (h9, c9, kc9, "kind") (h10, c10, kc10, "kind") (h11, c11, kc11, "kind")
    (h12, c12, kc12, "kind") (h13, c13, kc13, "kind") (h14, c14, kc14, "kind")
    (h15, c15, kc15, "kind")
]
=>
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n4, dom)
    (c0, "forAll" # red) (c1, u) (c2, ":") (c3, dom) (c4, "=") (c5, k)
    (c6, "sum") (c7, t) (c8, "in") (c9, dv) (c10, "toInt") (c11, "=")
    (c12, "[]") (c13, t) (c14, 1) (c15, u)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef")
    (kc0, "forAll") (kc1, "ident") (kc2, "quantDomain") (kc3, "domainRef")
    (kc4, "binop") (kc5, "ident") (kc6, "sum") (kc7, "ident") (kc8, "quantIn")
    (kc9, "ident") (kc10, "toInt") (kc11, "binop") (kc12, "tupleIndex")
    (kc13, "ident") (kc14, "intLit") (kc15, "ident")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n4, 1)
    (f1, n0, c0, cPos)
    (f2, c0, c1, 1) (f3, c0, c2, 2) (f4, c2, c3, 1) (f5, c0, c4, 3)
    (f6, c4, c5, 1) (f7, c4, c6, 2)
    (f8, c6, c7, 1) (f9, c6, c8, 2) (f10, c8, c9, 1) (f11, c6, c10, 3)
    (f12, c10, c11, 1)
    (f13, c11, c12, 1) (f14, c12, c13, 1) (f15, c12, c14, 2) (f16, c11, c15, 2)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (g3, n3, kn3, "kind") (g4, n4, kn4, "kind")
    (h0, c0, kc0, "kind") (h1, c1, kc1, "kind") (h2, c2, kc2, "kind")
    (h3, c3, kc3, "kind") (h4, c4, kc4, "kind") (h5, c5, kc5, "kind")
    (h6, c6, kc6, "kind") (h7, c7, kc7, "kind") (h8, c8, kc8, "kind")
    (h9, c9, kc9, "kind") (h10, c10, kc10, "kind") (h11, c11, kc11, "kind")
    (h12, c12, kc12, "kind") (h13, c13, kc13, "kind") (h14, c14, kc14, "kind")
    (h15, c15, kc15, "kind")
]
interface = { n0, n1, n2, n3, n4, c0, c1, c2, c3, c4, c5, c6, c7, c8, c9,
              c10, c11, c12, c13, c14, c15,
              kn0, kn1, kn2, kn3, kn4, kc0, kc1, kc2, kc3, kc4, kc5, kc6,
              kc7, kc8, kc9, kc10, kc11, kc12, kc13, kc14, kc15 }

\\ forAll (<u>,<v>) in <ed> . forAll <t> in <dv> .
\\   (<t>[1] = <u>) -> !((<v>,<t>[2]) in <dv>)
\\ guarded by: given <ed> : relation of ( <dom> * <dom> ), the same <dom>
\\ as the decision relation's first component
tagInnerQuantification(specName, dv, ed, dom, u, v, t : string; findPos, aPos, gPos : int)
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n4, dom)
    (a0, "forAll") (a1, u) (a2, v) (a3, "in") (a4, ed)
    (a5, "forAll") (a6, t) (a7, "in") (a8, dv)
    (a9, "->") (a10, "=") (a11, "[]") (a12, t) (a13, 1) (a14, u)
    (a15, "!") (a16, "in") (a17, "") (a18, v) (a19, "[]") (a20, t) (a21, 2)
    (a22, dv)
    (g0, "given") (g1, ed) (g2, "relation") (g3, dom) (g4, dom)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef")
    (ka0, "forAll") (ka1, "ident") (ka2, "ident") (ka3, "quantIn") (ka4, "ident")
    (ka5, "forAll") (ka6, "ident") (ka7, "quantIn") (ka8, "ident")
    (ka9, "binop") (ka10, "binop") (ka11, "tupleIndex") (ka12, "ident")
    (ka13, "intLit") (ka14, "ident")
    (ka15, "not") (ka16, "binop") (ka17, "tupleLit") (ka18, "ident")
    (ka19, "tupleIndex") (ka20, "ident") (ka21, "intLit") (ka22, "ident")
    (kg0, "given") (kg1, "ident") (kg2, "relation") (kg3, "domainRef") (kg4, "domainRef")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n4, 1)
    (p1, n0, a0, aPos)
    (p2, a0, a1, 1) (p3, a0, a2, 2) (p4, a0, a3, 3) (p5, a3, a4, 1)
    (p6, a0, a5, 4)
    (p7, a5, a6, 1) (p8, a5, a7, 2) (p9, a7, a8, 1) (p10, a5, a9, 3)
    (p11, a9, a10, 1) (p12, a10, a11, 1) (p13, a11, a12, 1) (p14, a11, a13, 2)
    (p15, a10, a14, 2)
    (p16, a9, a15, 2) (p17, a15, a16, 1) (p18, a16, a17, 1) (p19, a17, a18, 1)
    (p20, a17, a19, 2) (p21, a19, a20, 1) (p22, a19, a21, 2) (p23, a16, a22, 2)
    (r1, n0, g0, gPos) (r2, g0, g1, 1) (r3, g1, g2, 1) (r4, g2, g3, 1) (r5, g2, g4, 2)
    (w0, n0, kn0, "kind") (w1, n1, kn1, "kind") (w2, n2, kn2, "kind")
    (w3, n3, kn3, "kind") (w4, n4, kn4, "kind")
    (x0, a0, ka0, "kind") (x1, a1, ka1, "kind") (x2, a2, ka2, "kind")
    (x3, a3, ka3, "kind") (x4, a4, ka4, "kind") (x5, a5, ka5, "kind")
    (x6, a6, ka6, "kind") (x7, a7, ka7, "kind") (x8, a8, ka8, "kind")
    (x9, a9, ka9, "kind") (x10, a10, ka10, "kind") (x11, a11, ka11, "kind")
    (x12, a12, ka12, "kind") (x13, a13, ka13, "kind") (x14, a14, ka14, "kind")
    (x15, a15, ka15, "kind") (x16, a16, ka16, "kind") (x17, a17, ka17, "kind")
    (x18, a18, ka18, "kind") (x19, a19, ka19, "kind") (x20, a20, ka20, "kind")
    (x21, a21, ka21, "kind") (x22, a22, ka22, "kind")
    (y0, g0, kg0, "kind") (y1, g1, kg1, "kind") (y2, g2, kg2, "kind")
    (y3, g3, kg3, "kind") (y4, g4, kg4, "kind")
]
=>
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n4, dom)
    (a0, "forAll") (a1, u) (a2, v) (a3, "in") (a4, ed)
    (a5, "forAll" # red) (a6, t) (a7, "in") (a8, dv)
    (a9, "->") (a10, "=") (a11, "[]") (a12, t) (a13, 1) (a14, u)
    (a15, "!") (a16, "in") (a17, "") (a18, v) (a19, "[]") (a20, t) (a21, 2)
    (a22, dv)
    (g0, "given") (g1, ed) (g2, "relation") (g3, dom) (g4, dom)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef")
    (ka0, "forAll") (ka1, "ident") (ka2, "ident") (ka3, "quantIn") (ka4, "ident")
    (ka5, "forAll") (ka6, "ident") (ka7, "quantIn") (ka8, "ident")
    (ka9, "binop") (ka10, "binop") (ka11, "tupleIndex") (ka12, "ident")
    (ka13, "intLit") (ka14, "ident")
    (ka15, "not") (ka16, "binop") (ka17, "tupleLit") (ka18, "ident")
    (ka19, "tupleIndex") (ka20, "ident") (ka21, "intLit") (ka22, "ident")
    (kg0, "given") (kg1, "ident") (kg2, "relation") (kg3, "domainRef") (kg4, "domainRef")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n4, 1)
    (p1, n0, a0, aPos)
    (p2, a0, a1, 1) (p3, a0, a2, 2) (p4, a0, a3, 3) (p5, a3, a4, 1)
    (p6, a0, a5, 4)
    (p7, a5, a6, 1) (p8, a5, a7, 2) (p9, a7, a8, 1) (p10, a5, a9, 3)
    (p11, a9, a10, 1) (p12, a10, a11, 1) (p13, a11, a12, 1) (p14, a11, a13, 2)
    (p15, a10, a14, 2)
    (p16, a9, a15, 2) (p17, a15, a16, 1) (p18, a16, a17, 1) (p19, a17, a18, 1)
    (p20, a17, a19, 2) (p21, a19, a20, 1) (p22, a19, a21, 2) (p23, a16, a22, 2)
    (r1, n0, g0, gPos) (r2, g0, g1, 1) (r3, g1, g2, 1) (r4, g2, g3, 1) (r5, g2, g4, 2)
    (w0, n0, kn0, "kind") (w1, n1, kn1, "kind") (w2, n2, kn2, "kind")
    (w3, n3, kn3, "kind") (w4, n4, kn4, "kind")
    (x0, a0, ka0, "kind") (x1, a1, ka1, "kind") (x2, a2, ka2, "kind")
    (x3, a3, ka3, "kind") (x4, a4, ka4, "kind") (x5, a5, ka5, "kind")
    (x6, a6, ka6, "kind") (x7, a7, ka7, "kind") (x8, a8, ka8, "kind")
    (x9, a9, ka9, "kind") (x10, a10, ka10, "kind") (x11, a11, ka11, "kind")
    (x12, a12, ka12, "kind") (x13, a13, ka13, "kind") (x14, a14, ka14, "kind")
    (x15, a15, ka15, "kind") (x16, a16, ka16, "kind") (x17, a17, ka17, "kind")
    (x18, a18, ka18, "kind") (x19, a19, ka19, "kind") (x20, a20, ka20, "kind")
    (x21, a21, ka21, "kind") (x22, a22, ka22, "kind")
    (y0, g0, kg0, "kind") (y1, g1, kg1, "kind") (y2, g2, kg2, "kind")
    (y3, g3, kg3, "kind") (y4, g4, kg4, "kind")
]
interface = { n0, n1, n2, n3, n4,
              a0, a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12, a13,
              a14, a15, a16, a17, a18, a19, a20, a21, a22,
              g0, g1, g2, g3, g4,
              kn0, kn1, kn2, kn3, kn4,
              ka0, ka1, ka2, ka3, ka4, ka5, ka6, ka7, ka8, ka9, ka10, ka11,
              ka12, ka13, ka14, ka15, ka16, ka17, ka18, ka19, ka20, ka21, ka22,
              kg0, kg1, kg2, kg3, kg4 }
)GP2";

// The glue stage runs while the tagged subtrees are still intact, because
// their labels parameterize the replacements. Each rule swings one parent
// edge: the tagged subtree is left floating (still rooted at its red node)
// for the propagate/shrink/cleanup stages to consume.
inline constexpr const char* glue_subtrees_text =
    R"GP2(Main = glueAuxiliaryDomain; glueFunctionFind; glueIntersectionConstraint

\\ insert `letting coloursSet be domain set (size <k>) of <elemdom>` at the
\\ find's old slot and move the find to the counting constraint's slot; the
\\ counting constraint is detached. The new letting's name node keeps a red
\\ mark as a handoff to glueFunctionFind, which clears it.
glueAuxiliaryDomain(specName, dv, k, elemdom : string; findPos, cPos : int)
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n5, elemdom)
    (c0, "forAll" # red) (c4, "=") (c5, k)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn5, "domainRef")
    (kc0, "forAll") (kc4, "binop") (kc5, "ident")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n5, 2)
    (f1, n0, c0, cPos) (f5, c0, c4, 3) (f6, c4, c5, 1)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (g3, n3, kn3, "kind") (g5, n5, kn5, "kind")
    (h0, c0, kc0, "kind") (h4, c4, kc4, "kind") (h5, c5, kc5, "kind")
]
=>
[
    (n0, specName) (n1, "find") (n2, dv) (n3, "relation" # red) (n5, elemdom)
    (c0, "forAll" # red) (c4, "=") (c5, k)
    (kn0, "spec") (kn1, "find") (kn2, "ident") (kn3, "relation") (kn5, "domainRef")
    (kc0, "forAll") (kc4, "binop") (kc5, "ident")
    (z0, "letting") (z1, "coloursSet" # red) (z2, "set") (z3, elemdom)
    (z4, "size") (z5, k)
    (kz0, "lettingDomain") (kz1, "ident") (kz2, "setOf") (kz3, "domainRef")
    (kz4, "attr") (kz5, "ident")
|
    (v1, n0, z0, findPos) (v2, n0, n1, cPos)
    (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n5, 2)
    (f5, c0, c4, 3) (f6, c4, c5, 1)
    (v3, z0, z1, 1) (v4, z1, z2, 1) (v5, z2, z3, 1) (v6, z2, z4, 2) (v7, z4, z5, 1)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (g3, n3, kn3, "kind") (g5, n5, kn5, "kind")
    (h0, c0, kc0, "kind") (h4, c4, kc4, "kind") (h5, c5, kc5, "kind")
    (u0, z0, kz0, "kind") (u1, z1, kz1, "kind") (u2, z2, kz2, "kind")
    (u3, z3, kz3, "kind") (u4, z4, kz4, "kind") (u5, z5, kz5, "kind")
]
interface = { n0, n1, n2, n3, n5, c0, c4, c5,
              kn0, kn1, kn2, kn3, kn5, kc0, kc4, kc5 }

\\ replace the find's relation type with `function (total) <fromdom> --> aux`;
\\ the relation subtree is detached and the handoff mark is cleared
glueFunctionFind(dv, fromdom, aux : string)
[
    (n1, "find") (n2, dv) (n3, "relation" # red) (n4, fromdom)
    (z1, aux # red)
    (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef") (kz1, "ident")
|
    (e2, n1, n2, 1) (e3, n2, n3, 1) (e4, n3, n4, 1)
    (g1, n1, kn1, "kind") (g2, n2, kn2, "kind") (g3, n3, kn3, "kind")
    (g4, n4, kn4, "kind") (u1, z1, kz1, "kind")
]
=>
[
    (n1, "find") (n2, dv) (n3, "relation" # red) (n4, fromdom)
    (z1, aux)
    (kn1, "find") (kn2, "ident") (kn3, "relation") (kn4, "domainRef") (kz1, "ident")
    (y0, "function") (y1, fromdom) (y2, aux) (y3, "total")
    (ky0, "functionOf") (ky1, "domainRef") (ky2, "domainRef") (ky3, "attr")
|
    (e2, n1, n2, 1) (e4, n3, n4, 1)
    (v1, n2, y0, 1) (v2, y0, y1, 1) (v3, y0, y2, 2) (v4, y0, y3, 3)
    (g1, n1, kn1, "kind") (g2, n2, kn2, "kind") (g3, n3, kn3, "kind")
    (g4, n4, kn4, "kind") (u1, z1, kz1, "kind")
    (w0, y0, ky0, "kind") (w1, y1, ky1, "kind") (w2, y2, ky2, "kind")
    (w3, y3, ky3, "kind")
]
interface = { n1, n2, n3, n4, z1, kn1, kn2, kn3, kn4, kz1 }

\\ replace the tagged inner quantification with
\\ `<dv>(<v>) intersect <dv>(<u>) = {}`; the old body is detached
glueIntersectionConstraint(specName, dv, u, v : string; findPos, aPos : int)
[
    (n0, specName) (n1, "find") (n2, dv)
    (a0, "forAll") (a1, u) (a2, v) (a5, "forAll" # red)
    (kn0, "spec") (kn1, "find") (kn2, "ident")
    (ka0, "forAll") (ka1, "ident") (ka2, "ident") (ka5, "forAll")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1)
    (p1, n0, a0, aPos) (p2, a0, a1, 1) (p3, a0, a2, 2) (p6, a0, a5, 4)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (x0, a0, ka0, "kind") (x1, a1, ka1, "kind") (x2, a2, ka2, "kind")
    (x5, a5, ka5, "kind")
]
=>
[
    (n0, specName) (n1, "find") (n2, dv)
    (a0, "forAll") (a1, u) (a2, v) (a5, "forAll" # red)
    (kn0, "spec") (kn1, "find") (kn2, "ident")
    (ka0, "forAll") (ka1, "ident") (ka2, "ident") (ka5, "forAll")
    (z0, "=") (z1, "intersect") (z2, "") (z3, dv) (z4, v)
    (z5, "") (z6, dv) (z7, u) (z8, "{}")
    (kz0, "binop") (kz1, "binop") (kz2, "apply") (kz3, "ident") (kz4, "ident")
    (kz5, "apply") (kz6, "ident") (kz7, "ident") (kz8, "emptySet")
|
    (e1, n0, n1, findPos) (e2, n1, n2, 1)
    (p1, n0, a0, aPos) (p2, a0, a1, 1) (p3, a0, a2, 2)
    (v1, a0, z0, 4)
    (v2, z0, z1, 1) (v3, z0, z8, 2)
    (v4, z1, z2, 1) (v5, z1, z5, 2)
    (v6, z2, z3, 1) (v7, z2, z4, 2)
    (v8, z5, z6, 1) (v9, z5, z7, 2)
    (g0, n0, kn0, "kind") (g1, n1, kn1, "kind") (g2, n2, kn2, "kind")
    (x0, a0, ka0, "kind") (x1, a1, ka1, "kind") (x2, a2, ka2, "kind")
    (x5, a5, ka5, "kind")
    (u0, z0, kz0, "kind") (u1, z1, kz1, "kind") (u2, z2, kz2, "kind")
    (u3, z3, kz3, "kind") (u4, z4, kz4, "kind") (u5, z5, kz5, "kind")
    (u6, z6, kz6, "kind") (u7, z7, kz7, "kind") (u8, z8, kz8, "kind")
]
interface = { n0, n1, n2, a0, a1, a2, a5, kn0, kn1, kn2, ka0, ka1, ka2, ka5 }
)GP2";

inline constexpr const char* propagate_tags_text =
    R"GP2(Main = propagateTag!

\\ push the red mark down each tagged subtree
propagateTag(x, y, p : any)
[
    (m0, x # red) (m1, y)
|
    (e0, m0, m1, p)
]
=>
[
    (m0, x # red) (m1, y # red)
|
    (e0, m0, m1, p)
]
interface = { m0, m1 }
)GP2";

inline constexpr const char* shrink_tagged_text =
    R"GP2(Main = shrinkTaggedPair!

\\ delete the deeper of two adjacent tagged nodes plus the connecting edge;
\\ the dangling condition forces leaf-first deletion
shrinkTaggedPair(x, y, p : any)
[
    (m0, x # red) (m1, y # red)
|
    (e0, m0, m1, p)
]
=>
[
    (m0, x # red)
|
]
interface = { m0 }
)GP2";

inline constexpr const char* cleanup_tags_text =
    R"GP2(Main = cleanupTag!

\\ remove the remaining (now isolated) tagged nodes
cleanupTag(x : any)
[
    (m0, x # red)
|
]
=>
[
|
]
interface = { }
)GP2";

} // namespace detail

/// The shipped rule library, one file per pipeline stage, in execution order.
inline std::vector<StageFile> builtin_rule_files() {
    return {
        {"normalizeCounting", detail::normalize_counting_text},
        {"tagRelationDecisionVariable", detail::tag_relation_decision_variable_text},
        {"tagConstraints", detail::tag_constraints_text},
        {"glueSubtrees", detail::glue_subtrees_text},
        {"propagateTags", detail::propagate_tags_text},
        {"shrinkTagged", detail::shrink_tagged_text},
        {"cleanupTags", detail::cleanup_tags_text},
    };
}

struct StageReport {
    std::string stage;
    std::vector<gp2::AppliedRule> applied;
};

struct ReformulationResult {
    bool applicable = false;
    essence::Specification rewritten;
    graph::LabeledGraph rewritten_graph; // host graph after the last stage
    std::vector<StageReport> report;
    std::string aux_domain_name;
    int rule_applications = 0;
};

struct ReformulateError {
    std::string stage;
    std::string message;

    std::string to_string() const {
        return stage.empty() ? message : "stage '" + stage + "': " + message;
    }
};

struct ReformulateOptions {
    int fuel = gp2::default_fuel;
    // When set, replaces the builtin pipeline. A stage whose name starts with
    // "tag" (or the first stage otherwise) acts as the applicability guard:
    // getting stuck there means NotApplicable rather than an engine error.
    std::vector<StageFile> stages;
};

namespace detail {

inline bool is_guard_stage(const std::string& name, std::size_t index) {
    return name.rfind("tag", 0) == 0 || index == 0;
}

inline std::string unique_name(const std::string& base, const essence::Specification& spec,
                               const std::string& self) {
    auto in_use = [&](const std::string& n) {
        int count = 0;
        for (const auto& d : spec.declarations)
            if (d.name == n) ++count;
        return count > (n == self ? 1 : 0);
    };
    if (!in_use(base)) return base;
    for (int suffix = 2;; ++suffix) {
        std::string candidate = base + std::to_string(suffix);
        if (!in_use(candidate)) return candidate;
    }
}

} // namespace detail

/// Runs the staged reformulation pipeline on a specification. When the
/// tagging stage finds no match the input is not reformulable and is returned
/// unchanged with `applicable == false` and an empty report. Engine failures
/// in later stages are errors. The auxiliary set domain introduced by the
/// glue stage is renamed to `<element-domain>Set` (numeric suffix on
/// collision) before the result is returned.
inline Result<ReformulationResult, ReformulateError>
reformulate(const essence::Specification& spec, const ReformulateOptions& options = {}) {
    std::vector<StageFile> stages = options.stages.empty() ? builtin_rule_files() : options.stages;

    // index of the declaration whose slot the auxiliary letting inherits
    std::size_t find_index = spec.declarations.size();
    for (std::size_t i = 0; i < spec.declarations.size(); ++i) {
        const auto& d = spec.declarations[i];
        if (d.kind == essence::Declaration::Kind::Find && d.domain &&
            d.domain->kind == essence::Domain::Kind::Relation) {
            find_index = i;
            break;
        }
    }

    graph::LabeledGraph host = graph::encode(spec);
    ReformulationResult result;

    int fuel_left = options.fuel;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        auto parsed = gp2::parse_rule_file(stages[i].text);
        if (!parsed.ok())
            return ReformulateError{stages[i].name, parsed.error().to_string()};
        gp2::RunResult r = gp2::run(parsed->main, parsed->rules, std::move(host), fuel_left);
        if (r.status == gp2::RunResult::Status::Stuck) {
            if (detail::is_guard_stage(stages[i].name, i)) {
                result.applicable = false;
                result.rewritten = spec;
                result.report.clear();
                result.rule_applications = 0;
                return result;
            }
            return ReformulateError{stages[i].name, "stuck at " + r.stuck_at};
        }
        if (r.status == gp2::RunResult::Status::FuelExhausted)
            return ReformulateError{stages[i].name, "fuel exhausted (non-terminating loop?)"};
        result.report.push_back({stages[i].name, r.log});
        result.rule_applications += r.applications;
        fuel_left -= r.applications;
        host = std::move(r.graph);
    }

    if (host.red_count() != 0)
        return ReformulateError{"", "pipeline left marked nodes behind"};

    auto decoded = graph::decode(host);
    if (!decoded.ok())
        return ReformulateError{"", "rewritten graph does not decode: " + decoded.error().to_string()};
    result.rewritten = std::move(*decoded);
    result.rewritten_graph = std::move(host);
    result.applicable = true;

    // rename the placeholder aux letting to <element-domain>Set, uniquified
    if (find_index < result.rewritten.declarations.size()) {
        essence::Declaration& aux = result.rewritten.declarations[find_index];
        if (aux.kind != essence::Declaration::Kind::LettingDomain || !aux.domain ||
            aux.domain->kind != essence::Domain::Kind::SetOf ||
            aux.domain->components[0].kind != essence::Domain::Kind::Ref)
            return ReformulateError{"", "unexpected auxiliary declaration shape after rewrite"};
        std::string desired = aux.domain->components[0].name + "Set";
        desired = detail::unique_name(desired, result.rewritten, aux.name);
        if (desired != aux.name) {
            essence::Declaration& find_decl = result.rewritten.declarations.back();
            if (find_decl.kind == essence::Declaration::Kind::Find && find_decl.domain &&
                find_decl.domain->kind == essence::Domain::Kind::FunctionOf &&
                find_decl.domain->components[1].kind == essence::Domain::Kind::Ref &&
                find_decl.domain->components[1].name == aux.name) {
                find_decl.domain->components[1].name = desired;
            }
            aux.name = desired;
        }
        result.aux_domain_name = aux.name;
    }

    if (auto issue = essence::scope_check(result.rewritten))
        return ReformulateError{"", "rewritten specification is ill-scoped: " + issue->message};

    return result;
}

} // namespace specrw::rules

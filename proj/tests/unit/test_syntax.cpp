#include <doctest.h>

#include "../generators.hpp"
#include "fixtures.hpp"
#include "tydp/syntax.hpp"

using namespace tydp;

namespace {

Pattern P(const char* s) { return parse_pattern(s); }
Type T(const char* s) { return parse_type(s); }

} // namespace

TEST_CASE("patterns parse into the expected constructors") {
    Pattern p = P("node(a,b)");
    REQUIRE(p.is_node());
    CHECK(p.left() == Pattern::var("a"));
    CHECK(p.right() == Pattern::var("b"));
    CHECK(P("_").is_wildcard());
    CHECK(P("bot").is_bottom());
    CHECK(P("node(leaf,_)").str() == "node(leaf,_)");
    CHECK(P("node(node(leaf,leaf),bot)").node_count() == 2);
    CHECK(P("node(node(leaf,leaf),bot)").depth() == 2);
    CHECK(P("node(a,leaf)").is_minimal());
    CHECK_FALSE(P("node(a,bot)").is_minimal());
    CHECK_FALSE(P("node(a,_)").is_minimal());
    CHECK(P("node(leaf,bot)").is_closed());
}

TEST_CASE("symbol declaration") {
    auto sys = parse_system("symbol i : forall a. B(a) -> B(a) recursive 1;");
    REQUIRE(sys.symbols.size() == 1);
    CHECK(sys.symbols[0].name == "i");
    CHECK(sys.symbols[0].recursive == 1);
    CHECK(quantifier_count(sys.symbols[0].type) == 1);
    CHECK(sys.symbols[0].type.str() == "forall a. B(a) -> B(a)");
}

TEST_CASE("arity problems are left to validation") {
    auto sys = parse_system("symbol f : B(leaf) recursive 0;\nsymbol g : forall a. B(a) -> B(leaf) recursive 1;\n"
                            "rule g[leaf] Leaf -> f Leaf Leaf;");
    REQUIRE(sys.rules.size() == 1);
    CHECK(sys.rules[0].head == "g");
    CHECK(sys.rules[0].pattern_args.size() == 1);
    CHECK(sys.rules[0].args.size() == 1);
}

TEST_CASE("rule identifiers resolve to symbols unless bound") {
    auto sys = parse_system("symbol f : forall a. B(a) -> B(a) recursive 1;\n"
                            "rule f[a] x -> (\\f:B(a). f) x;");
    const Term& rhs = sys.rules[0].rhs;
    REQUIRE(rhs.kind() == Term::Kind::App);
    CHECK(rhs.fun().body().kind() == Term::Kind::Var);
    auto fv = free_vars(rhs);
    CHECK(fv.term_vars == std::set<std::string>{"x"});
}

TEST_CASE("parse errors carry a position and the expected tokens") {
    try {
        parse_system("symbol f : B(leaf)\nrecursive ;");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.pos().line == 2);
        CHECK(e.pos().column == 11);
        CHECK(e.expected() == std::vector<std::string>{"natural number"});
    }
    CHECK_THROWS_AS(parse_system("rule Leaf -> Leaf;"), ParseError);
    CHECK_THROWS_AS(parse_system("symbol f : B(leaf) recursive 0"), ParseError);
    CHECK_THROWS_AS(parse_system("symbol f : B(leaf) recursive 0; rule f x [a] -> Leaf;"), ParseError);
    CHECK_THROWS_AS(parse_pattern("node(leaf)"), ParseError);
    CHECK_THROWS_AS(parse_type("B(leaf) ->"), ParseError);
    CHECK_THROWS_AS(parse_system("symbol $ : B(leaf) recursive 0;"), ParseError);
    CHECK_THROWS_AS(parse_system("symbol f : B(leaf) recursive 99999999999999;"), ParseError);
}

TEST_CASE("erased terms reject annotations") {
    RewriteSystem empty;
    CHECK_THROWS_AS(parse_erased_term("f[leaf]", empty), ParseError);
    CHECK_THROWS_AS(parse_erased_term("/\\a. x", empty), ParseError);
    CHECK_THROWS_AS(parse_erased_term("\\x:B(leaf). x", empty), ParseError);
    CHECK(parse_erased_term("\\x. x Leaf", empty).str() == "\\x. x Leaf");
}

TEST_CASE("erase") {
    auto sys = parse_system("symbol f : forall a. B(a) -> B(a) recursive 1;");
    CHECK(erase(parse_term("/\\a. f[a]", sys)) == ErasedTerm::symbol("f"));
    CHECK(erase(parse_term("Node[leaf,leaf] Leaf Leaf", sys)) ==
          ErasedTerm::tree(ErasedTerm::leaf_con(), ErasedTerm::leaf_con()));
    CHECK(erase(parse_term("\\x:B(leaf). x", sys)) == ErasedTerm::lam("x", ErasedTerm::var("x")));
}

TEST_CASE("substitution into types avoids capture") {
    CHECK(subst_pattern(T("B(a) -> B(a)"), "a", Pattern::leaf()) == T("B(leaf) -> B(leaf)"));
    CHECK(subst_pattern(T("B(node(a,b))"), "a", Pattern::leaf()) == T("B(node(leaf,b))"));

    Type t = subst_pattern(T("forall b. B(a)"), "a", P("node(b,b)"));
    REQUIRE(t.is_forall());
    CHECK(t.binder() != "b");
    CHECK(t.body().pattern() == P("node(b,b)"));
    CHECK(t.free_vars() == std::set<std::string>{"b"});
}

TEST_CASE("free variables") {
    RewriteSystem empty;
    auto fv = free_vars(parse_term("\\x:B(a). x", empty));
    CHECK(fv.term_vars.empty());
    CHECK(fv.pattern_vars == std::set<std::string>{"a"});
    CHECK(T("forall a. B(node(a,b))").free_vars() == std::set<std::string>{"b"});
    CHECK(free_vars(parse_term("Node", empty)).term_vars.empty());
    CHECK(free_vars(parse_term("Node", empty)).pattern_vars.empty());
}

TEST_CASE("type equality is alpha-equivalence") {
    CHECK(T("forall a. B(a)") == T("forall b. B(b)"));
    CHECK_FALSE(T("forall a b. B(node(a,b))") == T("forall a b. B(node(b,a))"));
    CHECK(T("forall a. forall a. B(a)") == T("forall a b. B(b)"));
}

TEST_CASE("printer parenthesizes where the grammar needs it") {
    auto sys = parse_system("symbol f : forall a. B(a) -> B(a) recursive 1;");
    for (const char* src : {"f[leaf] (f[leaf] Leaf)", "(\\x:B(leaf). x) Leaf", "(f Leaf)[leaf]", "Node (Node Leaf Leaf) Leaf",
                            "\\x:(B(leaf) -> B(leaf)) -> B(leaf). x (\\y:B(leaf). y)"}) {
        Term t = parse_term(src, sys);
        CHECK(parse_term(t.str(), sys) == t);
    }
    CHECK(T("(B(a) -> B(b)) -> forall c. B(c)").str() == "(B(a) -> B(b)) -> forall c. B(c)");
}

TEST_CASE("fixture round-trip") {
    for (const char* name : {"app.trs", "fgih.trs", "nonminimal.trs"}) {
        CAPTURE(name);
        auto sys = fixtures::system(name);
        std::string printed = print_system(sys);
        auto again = parse_system(printed);
        CHECK(systems_equal(sys, again));
        CHECK(print_system(again) == printed);
    }
    CHECK(print_system(RewriteSystem{}).empty());
}

TEST_CASE("generated systems round-trip") {
    gen::Gen g(7);
    for (int i = 0; i < 200; ++i) {
        auto sys = g.system();
        std::string printed = print_system(sys);
        CAPTURE(printed);
        auto again = parse_system(printed);
        REQUIRE(systems_equal(sys, again));
    }
}

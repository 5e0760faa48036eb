#include <doctest.h>

#include "../generators.hpp"
#include "fixtures.hpp"
#include "tydp/rewrite.hpp"

using namespace tydp;

namespace {

struct Loaded {
    RewriteSystem sys;
    RuleSet rules;

    explicit Loaded(const std::string& file) : sys(fixtures::system(file)), rules(sys) {}
    ErasedTerm term(const char* s) const { return parse_erased_term(s, sys); }
};

} // namespace

TEST_CASE("lhs matching") {
    Loaded app("app.trs");
    const ErasedRule* g_node = app.rules.for_head("g").at(0);
    auto m = match_lhs(g_node->lhs, app.term("g (Node Leaf Leaf)"));
    REQUIRE(m);
    CHECK(m->size() == 2);
    CHECK(m->at("x") == ErasedTerm::leaf_con());
    CHECK(m->at("y") == ErasedTerm::leaf_con());

    const ErasedRule* f = app.rules.for_head("f").at(0);
    auto mf = match_lhs(f->lhs, app.term("f"));
    REQUIRE(mf);
    CHECK(mf->empty());

    const ErasedRule* g_leaf = app.rules.for_head("g").at(1);
    CHECK_FALSE(match_lhs(g_leaf->lhs, app.term("g (Node Leaf Leaf)")));
}

TEST_CASE("nonlinear left-hand sides need equal subterms") {
    RewriteSystem sys = parse_system("symbol e : forall a b. B(a) -> B(b) -> B(leaf) recursive 2;");
    ErasedTerm lhs = parse_erased_term("e x x", sys);
    CHECK(match_lhs(lhs, parse_erased_term("e Leaf Leaf", sys)));
    CHECK_FALSE(match_lhs(lhs, parse_erased_term("e Leaf (Node Leaf Leaf)", sys)));
    CHECK(match_lhs(lhs, parse_erased_term("e (\\u. u) (\\v. v)", sys)));
}

TEST_CASE("single steps") {
    Loaded app("app.trs");
    CHECK(step(app.term("(\\x. \\y. x y) g"), app.rules) == std::vector<ErasedTerm>{app.term("\\y. g y")});
    CHECK(step(app.term("f"), app.rules) == std::vector<ErasedTerm>{app.term("app g (Node Leaf Leaf)")});
    CHECK(step(app.term("Leaf"), app.rules).empty());
    // Reduction also happens under binders and in argument positions.
    CHECK(step(app.term("\\z. f"), app.rules).size() == 1);
    CHECK(step(app.term("Node f f"), app.rules).size() == 2);
}

TEST_CASE("beta reduction avoids capture") {
    RewriteSystem empty;
    RuleSet none(empty);
    auto r = step(parse_erased_term("(\\x. \\y. x) y", empty), none);
    REQUIRE(r.size() == 1);
    REQUIRE(r[0].is_lam());
    CHECK(r[0].body() == ErasedTerm::var("y"));
    CHECK(r[0].body().name() == "y");
    CHECK(r[0].name() != "y");
}

TEST_CASE("normalization") {
    Loaded app("app.trs");
    auto f = normalize(app.term("f"), app.rules, {.fuel = 1000});
    CHECK(f.ok());
    CHECK(f.normal_forms == std::vector<ErasedTerm>{ErasedTerm::leaf_con()});

    Loaded fgih("fgih.trs");
    auto i = normalize(fgih.term("i (Node Leaf Leaf)"), fgih.rules, {.fuel = 1000});
    CHECK(i.ok());
    CHECK(i.normal_forms == std::vector<ErasedTerm>{fgih.term("Node Leaf Leaf")});

    Loaded nm("nonminimal.trs");
    auto loop = normalize(nm.term("f Leaf Leaf"), nm.rules, {.fuel = 50});
    CHECK(loop.exhausted);
    CHECK(loop.cycle_detected);
    REQUIRE(loop.cycle.size() >= 2);
    CHECK(loop.cycle.front() == loop.cycle.back());
}

TEST_CASE("fuel limits the number of expanded states") {
    RewriteSystem sys = parse_system("symbol w : forall a. B(a) -> B(_) recursive 1;\n"
                                     "rule w[a] x -> w[node(a,a)] (Node[a,a] x x);");
    RuleSet rules(sys);
    auto r = normalize(parse_erased_term("w Leaf", sys), rules, {.fuel = 25});
    CHECK(r.exhausted);
    CHECK_FALSE(r.cycle_detected);
    CHECK(r.states == 25);
    CHECK_FALSE(r.frontier.empty());
}

TEST_CASE("nondeterministic systems yield every normal form") {
    RewriteSystem sys = parse_system("symbol c : B(_) recursive 0;\nrule c -> Leaf;\nrule c -> Node[leaf,leaf] Leaf Leaf;");
    RuleSet rules(sys);
    auto r = normalize(parse_erased_term("Node c c", sys), rules);
    CHECK(r.ok());
    CHECK(r.normal_forms.size() == 4);
    auto rev = normalize(parse_erased_term("Node c c", sys), rules, {.fuel = 10000, .reverse_order = true});
    CHECK(rev.normal_forms == r.normal_forms);
}

TEST_CASE("values and neutral terms") {
    RewriteSystem empty;
    CHECK(is_value(parse_erased_term("Node Leaf Leaf", empty)));
    CHECK_FALSE(is_value(parse_erased_term("Node Leaf", empty)));
    CHECK(is_neutral(parse_erased_term("Node Leaf", empty)));
    CHECK(is_neutral(parse_erased_term("x Leaf", empty)));
    CHECK(is_value(parse_erased_term("\\x. x", empty)));
    CHECK_FALSE(is_neutral(parse_erased_term("Leaf", empty)));
}

TEST_CASE("generated normal forms have no reducts") {
    Loaded app("app.trs");
    gen::Gen g(3);
    for (int k = 0; k < 300; ++k) {
        auto v = g.normal_form(3);
        CAPTURE(v.str());
        CHECK(step(v, app.rules).empty());
    }
}

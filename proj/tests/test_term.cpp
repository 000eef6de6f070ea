#include <doctest.h>

#include <random>

#include "bccsp/semantics.hpp"
#include "bccsp/term_gen.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

TEST_CASE("parse respects precedence") {
    Term t = T("a.x || b.y + c.0");
    Term expect = Term::sum(Term::par(Term::prefix("a", Term::var("x")), Term::prefix("b", Term::var("y"))),
                            Term::prefix("c", Term::nil()));
    CHECK(t == expect);
    CHECK(T("0") == Term::nil());
    CHECK(T("x + y + z") == Term::sum(Term::sum(Term::var("x"), Term::var("y")), Term::var("z")));
    CHECK(T("x || y || z") == Term::par(Term::par(Term::var("x"), Term::var("y")), Term::var("z")));
    CHECK(T("a.(x + y)") == Term::prefix("a", Term::sum(Term::var("x"), Term::var("y"))));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(T("a.x +"), ParseError);
    CHECK_THROWS_AS(T("d.0"), ParseError);
    CHECK_THROWS_AS(T("tau.0"), ParseError);
    CHECK_THROWS_AS(T("(a.0"), ParseError);
    try {
        T("a.0 + + b.0");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
    CHECK(parse("a'.0 || a.0 + tau.0", sync_ab()).is_sum());
}

TEST_CASE("render") {
    CHECK(render(Term::prefix("a", Term::nil())) == "a.0");
    CHECK(render(T("a.0 + b.0")) == "a.0 + b.0");
    CHECK(render(Term::par(Term::var("x"), Term::nil())) == "x || 0");
    CHECK(render(T("x + (y + z)")) == "x + (y + z)");
    CHECK(render(T("(x || y) || z")) == "x || y || z");
    CHECK(render(T("x || (y || z)")) == "x || (y || z)");
    CHECK(render(T("(x + y) || z")) == "(x + y) || z");
    CHECK(render(T("a.(b.0 + c.0)"), true) == "a.(b + c)");
    CHECK(B("a.(b + c)") == T("a.(b.0 + c.0)"));
}

TEST_CASE("round trip over generated terms") {
    std::mt19937_64 rng(7);
    GenOptions opts;
    opts.max_size = 20;
    auto acts = symbols_of(abc());
    for (int i = 0; i < 1000; ++i) {
        Term t = random_term(rng, acts, opts);
        REQUIRE(parse(render(t), abc()) == t);
        REQUIRE(parse(render(t, true), abc(), ParseOptions{true}) == t);
    }
}

TEST_CASE("metrics") {
    Term p3 = T(p_n(3));
    Term t = Term::par(T("a.0"), p3);
    CHECK(depth(t) == 5);
    for (int n = 1; n <= 6; ++n) CHECK(norm(Term::par(T("a.0"), T(p_n(n)))) == 3);
    CHECK(depth(Term::var("x")) == 0);
    CHECK(norm(Term::var("x")) == 0);
    CHECK(metrics(T("a.0 + x")).size == 4);
    CHECK(metrics(T("a.0 + x")).norm == 0);
    CHECK(metrics(T("a.b.0 + c.0")).norm == 1);
}

TEST_CASE("substitute") {
    CHECK(substitute(Term::var("x"), {{"x", T("a.0")}}) == T("a.0"));
    CHECK(substitute(T("a.x + y"), {{"x", Term::nil()}}) == T("a.0 + y"));
    CHECK(substitute(T("x || x"), {{"x", T("a.0")}}) == T("a.0 || a.0"));
    CHECK(vars(T("a.x + y || x")) == std::set<std::string>{"x", "y"});
}

TEST_CASE("summands") {
    CHECK(summands(T("(a.0 + 0) + b.0")) == std::vector<Term>{T("a.0"), T("b.0")});
    CHECK(summands(T("a.0 || b.0")) == std::vector<Term>{T("a.0 || b.0")});
    CHECK(summands(T("0")).empty());
    CHECK(summands(T("0 + (0 + 0)")).empty());
    CHECK(summands(T("b.0 + a.0")) == std::vector<Term>{T("a.0"), T("b.0")});
    CHECK(summands_in_order(T("b.0 + a.0")) == std::vector<Term>{T("b.0"), T("a.0")});
}

TEST_CASE("vars at distance") {
    const auto m = TransitionMode::Interleaving;
    CHECK(vars_at_distance(T("a.x"), 1, abc(), m) == std::set<std::string>{"x"});
    CHECK(vars_at_distance(T("a.x"), 2, abc(), m).empty());
    CHECK(vars_at_distance(T("a.x + b.(y || c.z)"), 1, abc(), m) == std::set<std::string>{"x", "y", "z"});
    CHECK(vars_at_distance(T("x"), 0, abc(), m) == std::set<std::string>{"x"});
    CHECK(vars_at_distance(T("a.x || b.y"), 1, abc(), m) == std::set<std::string>{"x", "y"});
}

TEST_CASE("strip_nil") {
    CHECK(strip_nil(T("0 + a.0")) == T("a.0"));
    CHECK(strip_nil(T("x || (0 + 0)")) == T("x"));
    CHECK(strip_nil(T("(a.0 || 0) + (0 || 0)")) == T("a.0"));
    CHECK(strip_nil(T("0 || 0")) == T("0"));
    CHECK(strip_nil(T("a.(x + 0)")) == T("a.x"));
    CHECK(is_nil_term(T("0 + (0 || 0)")));
    CHECK_FALSE(is_nil_term(T("0 + x")));
}

TEST_CASE("strip_nil properties on generated terms") {
    std::mt19937_64 rng(11);
    GenOptions opts;
    opts.max_size = 16;
    opts.nil_weight = 3.0;
    auto acts = symbols_of(ab());
    for (int i = 0; i < 2000; ++i) {
        Term t = random_term(rng, acts, opts);
        Term s = strip_nil(t);
        REQUIRE(is_clean(s));
        REQUIRE(strip_nil(s) == s);
        Substitution sigma;
        for (const auto& v : vars(t))
            if (rng() & 1) sigma[v] = Term::nil();
        REQUIRE(strip_nil(substitute(s, sigma)) == strip_nil(substitute(t, sigma)));
    }
}

TEST_CASE("paths") {
    Term t = T("a.(x + y) || b.0");
    CHECK(subterm(t, {0, 0, 1}) == Term::var("y"));
    CHECK(replace_at(t, {0, 0, 1}, T("c.0")) == T("a.(x + c.0) || b.0"));
    CHECK(replace_at(t, {}, T("0")) == T("0"));
}

TEST_CASE("closed term enumeration counts") {
    auto acts = symbols_of(ab());
    std::vector<std::size_t> expect{1, 2, 6, 20, 72, 272, 1064};
    for (std::uint32_t s = 1; s <= 7; ++s) CHECK(closed_terms_of_size(acts, s).size() == expect[s - 1]);
    CHECK(closed_terms_up_to(acts, 7).size() == 1437);
}

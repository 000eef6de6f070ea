#include <doctest.h>

#include <random>

#include "bccsp/finite_models.hpp"
#include "bccsp/term_gen.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

TEST_CASE("table fixtures") {
    const auto& m6 = table6_model();
    const auto& m7 = table7_model();
    m6.validate();
    m7.validate();
    CHECK(eval(m6, T("a.x", ab()), {{"x", 0}}) == 2);
    CHECK(eval(m6, T("x || y", ab()), {{"x", 1}, {"y", 3}}) == 1);
    for (Element e = 0; e < 3; ++e) CHECK(eval(m7, T("b.x", ab()), {{"x", e}}) == 0);
    CHECK(holds(m6, parse_equation("x + 0 = x", ab())));
    CHECK_THROWS_AS(eval(m6, T("x + y", ab()), {{"x", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(eval(m6, T("c.0", abc()), {}), std::invalid_argument);
    CHECK(&fixture_model("table6") == &m6);
    CHECK_THROWS(fixture_model("table8"));

    FiniteModel bad = m7;
    bad.plus[1][1] = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("known counter-valuations") {
    auto el2 = named_goal("EL2", ab());
    auto fails = failing_valuations(table6_model(), el2);
    Valuation want{{"x", 0}, {"y", 0}, {"z", 1}, {"w", 1}};
    CHECK(std::find(fails.begin(), fails.end(), want) != fails.end());
    CHECK(counter_valuation(table6_model(), el2) == fails.front());

    auto rsp2 = named_goal("RSP2", ab());
    fails = failing_valuations(table7_model(), rsp2);
    Valuation want7{{"x", 0}, {"y", 0}, {"z", 0}, {"w", 1}};
    CHECK(std::find(fails.begin(), fails.end(), want7) != fails.end());
}

TEST_CASE("independence reports") {
    auto check = [](const FiniteModel& m, const std::string& sys, const std::string& goal) {
        auto r = independence_report(m, build_system(sys, ab()), named_goal(goal, ab()));
        for (const auto& a : r.axioms) {
            INFO(sys << " " << a.id);
            CHECK(a.failures == 0);
        }
        CHECK(r.ok());
    };
    check(table6_model(), "E_CS", "EL2");
    check(table6_model(), "E_CT", "EL2");
    check(table7_model(), "E_RT", "RSP2");
    check(table7_model(), "E_CT", "CSP2");
    auto r = independence_report(table7_model(), build_system("E_RT", ab()), named_goal("EL2[a,b|a,b]", ab()));
    CHECK_FALSE(r.goal_refuted);
}

TEST_CASE("eval is compositional") {
    std::mt19937_64 rng(5);
    auto acts = symbols_of(ab());
    GenOptions opts;
    opts.max_size = 9;
    opts.var_names = {"x", "y"};
    const auto& m = table6_model();
    for (int i = 0; i < 500; ++i) {
        Term t = random_term(rng, acts, opts);
        Substitution s{{"x", random_term(rng, acts, opts)}, {"y", random_term(rng, acts, opts)}};
        Valuation v{{"x", static_cast<Element>(rng() % 5)}, {"y", static_cast<Element>(rng() % 5)}};
        Valuation v2{{"x", eval(m, s["x"], v)}, {"y", eval(m, s["y"], v)}};
        CHECK(eval(m, substitute(t, s), v) == eval(m, t, v2));
    }
}

TEST_CASE("model search") {
    auto rt = build_system("E_RT", ab());
    auto r = search_model(ab(), 3, rt.equations, named_goal("RSP2", ab()));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(independence_report(*r.model, rt, named_goal("RSP2", ab())).ok());

    Alphabet a1 = Alphabet::interleaving({"a"});
    auto idem = parse_equation("x + x = x", a1);
    auto none = search_model_up_to(a1, 2, {idem}, idem);
    CHECK(none.status == SearchStatus::NoModel);

    auto tiny = search_model(ab(), 3, build_system("E_RS", ab()).equations, named_goal("EL2", ab()), 1);
    CHECK(tiny.status == SearchStatus::BudgetExhausted);
}

TEST_CASE("model search with six-variable axioms") {
    // CSP1 instances only join the search once a complete table violates them.
    auto cs = build_system("E_CS", ab());
    auto goal = named_goal("EL2", ab());
    CHECK(search_model(ab(), 3, cs.equations, goal).status == SearchStatus::NoModel);
    auto ct = build_system("E_CT", ab());
    auto r = search_model(ab(), 3, ct.equations, named_goal("CSP2", ab()));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(independence_report(*r.model, ct, named_goal("CSP2", ab())).ok());
}

#include <doctest.h>

#include "bccsp/observations.hpp"
#include "bccsp/semantics.hpp"
#include "bccsp/term_gen.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

namespace {

const auto IL = TransitionMode::Interleaving;

Trace tr(const std::string& s) {
    Trace t;
    for (char c : s) t.push_back(intern_action(std::string(1, c)));
    return t;
}

TraceSet trs(std::initializer_list<const char*> xs) {
    TraceSet out;
    for (auto x : xs) out.insert(tr(x));
    return out;
}

}  // namespace

TEST_CASE("transitions") {
    auto ts = transitions(T("a.0 || b.0"), abc(), IL);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0].action == intern_action("a"));
    CHECK(ts[0].target == T("0 || b.0"));
    CHECK(ts[1].target == T("a.0 || 0"));
    CHECK(transitions(T("x + 0"), abc(), IL).empty());

    auto sy = transitions(parse("a.0 || a'.0", sync_ab()), sync_ab(), TransitionMode::CcsSync);
    bool tau_step = false;
    for (const auto& s : sy)
        if (action_name(s.action) == "tau" && s.target == parse("0 || 0", sync_ab())) tau_step = true;
    CHECK(tau_step);
    CHECK(sy.size() == 3);
    CHECK(transitions(parse("tau.0 || tau.0", sync_ab()), sync_ab(), TransitionMode::CcsSync).size() == 2);
    CHECK_THROWS_AS(transitions(T("a.0"), abc(), TransitionMode::CcsSync), AlphabetError);
}

TEST_CASE("initials") {
    CHECK(abc().render_set(initials(T("a.0 + b.c.0"), abc(), IL)) == "{a,b}");
    CHECK(initials(T("0"), abc(), IL) == 0);
    for (int n = 1; n <= 5; ++n) CHECK(abc().render_set(initials(T(p_n(n)), abc(), IL)) == "{b}");
}

TEST_CASE("build_lts") {
    auto l = build_lts(T("a.0"), abc(), IL);
    CHECK(l.size() == 2);
    CHECK(l.transitions.size() == 1);
    auto l2 = build_lts(T("a.0 || b.0"), abc(), IL);
    CHECK(l2.size() == 4);
    CHECK(l2.transitions.size() == 4);
    // p_2 = b.a.0 + b.b.a.0 reaches b.a.0 twice (once directly, once after b),
    // so structural identity gives four states: p_2, a.0, b.a.0 and 0.
    auto l3 = build_lts(T(p_n(2)), abc(), IL);
    CHECK(l3.size() == 4);
    CHECK(l3.transitions.size() == 4);
    CHECK_THROWS_AS(build_lts(T("a.x"), abc(), IL), OpenTermError);
}

TEST_CASE("traces") {
    CHECK(traces(T(p_n(2)), abc(), IL) == trs({"", "b", "ba", "bb", "bba"}));
    CHECK(completed_traces(T(p_n(2)), abc(), IL) == trs({"ba", "bba"}));
    CHECK(completed_traces(T("0"), abc(), IL) == trs({""}));
    CHECK(traces(T("a.0 || b.0"), abc(), IL) == trs({"", "a", "b", "ab", "ba"}));
}

TEST_CASE("trace properties on small terms") {
    auto acts = symbols_of(ab());
    auto terms = closed_terms_up_to(acts, 6);
    for (const auto& p : terms) {
        auto t = traces(p, ab(), IL);
        auto ct = completed_traces(p, ab(), IL);
        REQUIRE(!ct.empty());
        std::size_t lo = 1000, hi = 0;
        for (const auto& c : ct) {
            REQUIRE(t.count(c));
            lo = std::min(lo, c.size());
            hi = std::max(hi, c.size());
        }
        REQUIRE(hi == depth(p));
        // The inductive norm reads a 0 summand as a 0-length option, so compare on stripped terms.
        REQUIRE(lo == norm(strip_nil(p)));
    }
    for (std::size_t i = 0; i < terms.size(); i += 7)
        for (std::size_t j = 0; j < terms.size(); j += 5)
            if (completed_traces(terms[i], ab(), IL) == completed_traces(terms[j], ab(), IL))
                REQUIRE(traces(terms[i], ab(), IL) == traces(terms[j], ab(), IL));
}

TEST_CASE("substitution is compatible with transitions") {
    std::mt19937_64 rng(3);
    GenOptions opts;
    opts.max_size = 10;
    auto acts = symbols_of(ab());
    for (int i = 0; i < 300; ++i) {
        Term t = random_term(rng, acts, opts);
        Substitution s;
        for (const auto& v : vars(t)) s[v] = T(rng() & 1 ? "a.0" : "b.0 + a.b.0");
        auto after = transitions(substitute(t, s), ab(), IL);
        for (const auto& st : transitions(t, ab(), IL)) {
            Term target = substitute(st.target, s);
            bool found = false;
            for (const auto& u : after) found = found || (u.action == st.action && u.target == target);
            REQUIRE(found);
        }
    }
}

TEST_CASE("ready and failure pairs") {
    auto r = ready_pairs(T("a.0"), abc(), IL);
    CHECK(render_observations(r, abc()) == std::vector<std::string>{"(eps, {a})", "(a, {})"});
    auto f = failure_pairs(T("a.b.0 + a.c.0"), abc(), IL);
    ActionSet b = 1u << 1, c = 1u << 2;
    CHECK(f.pairs.count({tr("a"), b}));
    CHECK(f.pairs.count({tr("a"), c}));
    CHECK_FALSE(failure_pairs(T("a.(b.0 + c.0)"), abc(), IL).pairs.count({tr("a"), b}));
}

TEST_CASE("ready and failure traces") {
    auto rt = ready_traces(T("a.0"), abc(), IL);
    CHECK(render_observations(rt, abc()) == std::vector<std::string>{"{a}", "{a} a {}"});
    CHECK(ready_traces(T("a.b.0 + a.c.0"), abc(), IL) != ready_traces(T("a.(b.0 + c.0)"), abc(), IL));
    auto ft = failure_traces(T("0"), abc(), IL);
    CHECK(ft.size() == 8);
    for (const auto& [t, xs] : ft.decorated) CHECK(t.empty());
}

TEST_CASE("possible futures") {
    auto pf = possible_futures(T("b.a.0"), abc(), IL);
    std::set<std::pair<Trace, TraceSet>> expect{
        {tr(""), trs({"", "b", "ba"})}, {tr("b"), trs({"", "a"})}, {tr("ba"), trs({""})}};
    CHECK(pf.futures == expect);
    CHECK(possible_futures(T("0"), abc(), IL).futures == std::set<std::pair<Trace, TraceSet>>{{tr(""), trs({""})}});
    int with_a = 0;
    for (const auto& [t, x] : possible_futures(T("a.b.0 + a.c.0"), abc(), IL).futures) with_a += t == tr("a");
    CHECK(with_a == 2);
}

TEST_CASE("observation properties") {
    auto terms = closed_terms_up_to(symbols_of(ab()), 5);
    for (const auto& p : terms) {
        auto f = failure_pairs(p, ab(), IL);
        for (const auto& [t, x] : f.pairs)
            for (ActionSet y = x;; y = (y - 1) & x) {
                REQUIRE(f.pairs.count({t, y}));
                if (y == 0) break;
            }
        auto tset = traces(p, ab(), IL);
        for (const auto& [t, x] : possible_futures(p, ab(), IL).futures) {
            REQUIRE(tset.count(t));
            REQUIRE(x.count(Trace{}));
        }
    }
    for (std::size_t i = 0; i < terms.size(); i += 3)
        for (std::size_t j = 0; j < terms.size(); j += 4)
            if (ready_pairs(terms[i], ab(), IL) == ready_pairs(terms[j], ab(), IL))
                REQUIRE(failure_pairs(terms[i], ab(), IL) == failure_pairs(terms[j], ab(), IL));
}

#include <doctest.h>

#include "bccsp/derivations.hpp"
#include "bccsp/proof.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

namespace {

ProofStep axiom_step(const std::string& id, Substitution s) {
    ProofStep st;
    st.rule = Rule::Axiom;
    st.axiom = id;
    st.subst = std::move(s);
    return st;
}

}  // namespace

TEST_CASE("single steps") {
    auto sys = build_system("E_T", ab());
    ProofScript ps;
    ps.goal_lhs = T("a.0 + a.b.0", ab());
    ps.goal_rhs = T("a.(0 + b.0)", ab());
    ps.steps.push_back(axiom_step("T[a]", {{"x", T("0", ab())}, {"y", T("b.0", ab())}}));
    CHECK(check_proof(ps, sys).accepted);

    ProofScript bad;
    bad.goal_lhs = T("a.x + a.y", ab());
    bad.goal_rhs = T("a.(x + y)", ab());
    bad.steps.push_back(axiom_step("A3", {{"x", T("a.x", ab())}}));
    bad.steps.back().lhs = bad.goal_lhs;
    auto r = check_proof(bad, sys);
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 0);
}

TEST_CASE("rules") {
    auto sys = build_system("E1", ab());
    ProofBuilder b(sys);
    std::size_t a1 = b.axiom("A1", {{"x", T("a.0", ab())}, {"y", T("b.0", ab())}});
    std::size_t s = b.sym(a1);
    std::size_t t = b.trans(a1, s);
    CHECK(b.conclusion(t).first == b.conclusion(t).second);
    std::size_t cp = b.cong_prefix(intern_action("a"), a1);
    CHECK(render(b.conclusion(cp).second) == "a.(b.0 + a.0)");
    std::size_t p0 = b.axiom("P0", {});
    std::size_t sub = b.subst(p0, {{"x", T("a.0", ab())}});
    CHECK(render(b.conclusion(sub).first) == "a.0 || 0");
    std::size_t cs = b.cong_sum(sub, b.refl(T("b.0", ab())));
    CHECK(render(b.conclusion(cs).first) == "a.0 || 0 + b.0");
    std::size_t cpar = b.cong_par(a1, sub);
    CHECK(render(b.conclusion(cpar).second) == "(b.0 + a.0) || a.0");
    CHECK_THROWS_AS(b.trans(a1, a1), InternalError);
    Term ctx = T("a.(x + 0) || b.0", ab());
    std::size_t in = b.axiom_at("A0", {{"x", T("x", ab())}}, ctx, {0, 0});
    CHECK(render(b.conclusion(in).second) == "a.x || b.0");
    CHECK_THROWS_AS(b.axiom_at("A0", {{"x", T("y", ab())}}, ctx, {0, 0}), InternalError);
    std::size_t lifted = b.lift(b.subst(p0, {{"x", T("x", ab())}}), T("c.0 + (x || 0)", abc()), {1});
    CHECK(render(b.conclusion(lifted).second) == "c.0 + x");
    auto ps = b.script_for(cpar);
    CHECK(ps.steps.size() == 4);
    CHECK(check_proof(ps, sys).accepted);
}

TEST_CASE("unknown axioms and bad premises are rejected") {
    auto sys = build_system("E_T", ab());
    ProofScript ps;
    ps.goal_lhs = T("x", ab());
    ps.goal_rhs = T("x", ab());
    ps.steps.push_back(axiom_step("CS[a,a]", {}));
    CHECK_FALSE(check_proof(ps, sys).accepted);
    ProofStep s;
    s.rule = Rule::Sym;
    s.premises = {3};
    ps.steps = {s};
    auto r = check_proof(ps, sys);
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.find("precede") != std::string::npos);
}

TEST_CASE("AC normalisation with proof") {
    auto sys = build_system("E1", abc());
    ProofBuilder b(sys);
    Term t = T("(c.0 + (a.0 + 0)) + (b.0 + a.0) || 0", abc());
    Chain c(&b, t);
    c.ac_to(T("a.0 + (b.0 + c.0)", abc()));
    std::size_t p = c.proof();
    CHECK(b.conclusion(p).first == t);
    CHECK(b.conclusion(p).second == T("a.0 + (b.0 + c.0)", abc()));
    CHECK(check_proof(b.script_for(p), sys).accepted);
    CHECK(ac_normal_form(T("y || x + 0", ab())) == ac_normal_form(T("x || y", ab())));
    CHECK_THROWS_AS(c.ac_to(T("a.0", abc())), InternalError);
    Chain dry(nullptr, t);
    dry.ac_to(T("c.0 + b.0 + a.0", abc()));
    CHECK(dry.current() == T("c.0 + b.0 + a.0", abc()));
}

TEST_CASE("derivations of schema instances") {
    for (bool sync : {false, true}) {
        const Alphabet& al = sync ? sync_ab() : ab();
        const auto mode = sync ? TransitionMode::CcsSync : TransitionMode::Interleaving;
        auto cases = derivation_cases(al, sync);
        CHECK(!cases.empty());
        std::map<std::string, AxiomSystem> systems;
        bool ft_rt_done = false;
        for (std::size_t k = 0; k < cases.size(); k += sync ? 53 : 1) {
            const auto& [sys, id] = cases[k];
            // With five actions each of these expands into hundreds of thousands of steps.
            if (sync && sys == "Ec_FT") {
                if (ft_rt_done) continue;
                ft_rt_done = true;
            }
            INFO(sys, " ", id);
            auto it = systems.find(sys);
            if (it == systems.end()) it = systems.emplace(sys, build_system(sys, al, mode)).first;
            auto ps = derivation_script(sys, id, al, mode);
            Equation target = schema_instance(id, al, mode);
            CHECK(ps.goal_lhs == target.lhs);
            CHECK(ps.goal_rhs == target.rhs);
            auto r = check_proof(ps, it->second);
            CHECK_MESSAGE(r.accepted, r.reason);
        }
    }
}

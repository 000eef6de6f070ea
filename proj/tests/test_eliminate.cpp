#include <doctest.h>

#include <random>

#include "bccsp/eliminate.hpp"
#include "bccsp/equivalences.hpp"
#include "bccsp/term_gen.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

namespace {

const std::vector<std::string> kSystems = {"E_RS", "E_CS", "E_S", "E_RT", "E_FT", "E_R", "E_F", "E_CT", "E_T"};

std::string schema_of(const std::string& id) { return id.substr(0, id.find('[')); }

void check_measures(const EliminationResult& r) {
    for (const auto& c : r.cases)
        if (c.parent) CHECK(c.measure < *c.parent);
}

}  // namespace

TEST_CASE("small examples") {
    auto r = eliminate(T("a.0 || 0", ab()), "E_RS", ab(), TransitionMode::Interleaving);
    CHECK(render(r.result) == "a.0");
    REQUIRE(r.cases.size() == 1);
    CHECK(r.cases[0].first_rewrite == "P0");

    r = eliminate(T("a.0 || b.0", ab()), "E_T", ab(), TransitionMode::Interleaving);
    CHECK(render(r.result) == "a.b.0 + b.a.0");
    CHECK(r.cases[0].first_rewrite == "EL1[a,b]");

    r = eliminate(T("a.0 || b.0", ab()), "E_RS", ab(), TransitionMode::Interleaving);
    CHECK(render(r.result) == "a.b.0 + b.a.0");
    CHECK(r.cases[0].first_rewrite == "EL2[a|b]");

    r = eliminate(T("0 || 0", ab()), "E_CT", ab(), TransitionMode::Interleaving);
    CHECK(render(r.result) == "0");
}

TEST_CASE("a.0 || p_2 under E_RS") {
    Term p = T("a.0 || " + p_n(2), ab());
    auto r = eliminate(p, "E_RS", ab(), TransitionMode::Interleaving, true);
    CHECK(r.result.par_free());
    CHECK(r.cases[0].first_rewrite == "EL2[a|b]");
    Checker c(ab(), TransitionMode::Interleaving);
    CHECK(c.equivalent(c.node(p), c.node(r.result), Relation::of(RelKind::RS)));
    REQUIRE(r.proof);
    auto sys = build_system("E_RS", ab());
    auto chk = check_proof(*r.proof, sys);
    CHECK(chk.accepted);
    CHECK(r.proof->goal_lhs == p);
    CHECK(r.proof->goal_rhs == r.result);
    check_measures(r);
}

TEST_CASE("case fidelity") {
    auto first = [](const std::string& t, const std::string& sys) {
        return eliminate(T(t, ab()), sys, ab(), TransitionMode::Interleaving).cases.at(0).first_rewrite;
    };
    CHECK(first("(a.0 + a.b.0) || (b.0 + b.a.0)", "E_RS") == "RSP1[a,b]");
    CHECK(first("(a.0 + b.0) || (b.0 + b.a.0)", "E_RS") == "RSP2[a,b|b]");
    CHECK(first("(a.0 + a.b.0) || (a.0 + b.0)", "E_RS") == "P1");
    CHECK(first("(a.0 + b.0) || (a.0 + b.0)", "E_RS") == "EL2[a,b|a,b]");
    CHECK(first("(a.0 + b.0) || (a.0 + b.0)", "E_CS") == "CSP1[a,b,a,b]");
    CHECK(first("a.0 || (a.0 + b.0)", "E_S") == "CSP2[a,a,b]");
    CHECK(first("(a.0 + b.0) || a.0", "E_CS") == "P1");
    CHECK(first("(a.0 + a.b.0) || b.0", "E_FT") == "FP[a]");
    CHECK(first("a.0 || (b.0 + b.b.0)", "E_RT") == "P1");
    CHECK(first("(a.0 + b.0) || b.0", "E_RT") == "EL2[a,b|b]");
    CHECK(first("(a.0 + b.0) || b.0", "E_T") == "CTP[a,b]");
    CHECK(first("a.0 || (a.0 + b.0)", "E_CT") == "P1");
    CHECK(first("0 || a.0", "E_T") == "P1");

    const std::map<std::string, std::set<std::string>> allowed = {
        {"RS", {"RSP1", "RSP2", "EL2", "P0", "P1"}},
        {"CS", {"CSP1", "CSP2", "EL1", "P0", "P1"}},
        {"RT", {"FP", "EL2", "P0", "P1"}},
        {"CT", {"CTP", "EL1", "P0", "P1"}},
    };
    auto terms = closed_terms_up_to(symbols_of(ab()), 6);
    for (const auto& sys : kSystems) {
        const auto& ok = allowed.at(elimination_route(sys));
        for (const auto& t : terms) {
            auto r = eliminate(t, sys, ab(), TransitionMode::Interleaving);
            for (const auto& c : r.cases) CHECK(ok.count(schema_of(c.first_rewrite)));
        }
    }
}

TEST_CASE("exhaustive elimination on small terms") {
    auto terms = closed_terms_up_to(symbols_of(ab()), 6);
    for (const auto& name : kSystems) {
        auto sys = build_system(name, ab());
        Checker c(ab(), TransitionMode::Interleaving);
        Relation rel = sys.relation();
        for (const auto& t : terms) {
            auto r = eliminate(t, sys);
            CHECK(r.result.par_free());
            CHECK(c.equivalent(c.node(t), c.node(r.result), rel));
            check_measures(r);
        }
    }
}

TEST_CASE("elimination proofs check") {
    std::mt19937_64 rng(11);
    GenOptions opts;
    opts.max_size = 8;
    opts.allow_vars = false;
    auto acts = symbols_of(ab());
    for (const auto& name : kSystems) {
        auto sys = build_system(name, ab());
        for (int i = 0; i < 40; ++i) {
            Term t = random_term(rng, acts, opts);
            auto r = eliminate(t, sys, true);
            REQUIRE(r.proof);
            auto chk = check_proof(*r.proof, sys);
            INFO(name << " " << render(t));
            CHECK(chk.accepted);
            CHECK(r.proof->goal_rhs == r.result);
            auto dry = eliminate(t, sys);
            CHECK(dry.result == r.result);
        }
    }
}

TEST_CASE("synchronising elimination") {
    const auto& al = sync_ab();
    auto terms = closed_terms_up_to(symbols_of(al, true), 4);
    for (const auto& fam : {"RS", "CS", "S", "RT", "FT", "R", "F", "CT", "T"}) {
        auto sys = build_system(std::string("Ec_") + fam, al, TransitionMode::CcsSync);
        Checker c(al, TransitionMode::CcsSync);
        Relation rel = sys.relation();
        std::size_t k = 0;
        for (const auto& t : terms) {
            bool proof = (k++ % 97) == 0;
            auto r = eliminate(t, sys, proof);
            CHECK(r.result.par_free());
            CHECK(c.equivalent(c.node(t), c.node(r.result), rel));
            check_measures(r);
            if (proof) CHECK(check_proof(*r.proof, sys).accepted);
        }
    }
    auto r = eliminate(T("a.0 || a'.0", al), "Ec_T", al, TransitionMode::CcsSync);
    CHECK(r.cases[0].first_rewrite == "ELC1tau[a,a']");
    CHECK(render(r.result) == "a.a'.0 + a'.a.0 + tau.0");
}

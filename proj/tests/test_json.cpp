#include <doctest.h>

#include "bccsp/derivations.hpp"
#include "bccsp/json_io.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

TEST_CASE("alphabet and lts") {
    auto j = to_json(sync_ab());
    CHECK(j["sync"] == true);
    CHECK(alphabet_from_json(j) == sync_ab());
    auto l = to_json(build_lts(T("a.0 || b.0", ab()), ab(), TransitionMode::Interleaving));
    CHECK(l["root"] == "a.0 || b.0");
    CHECK(l["states"].size() == 4);
    CHECK(l["transitions"].size() == 4);
    CHECK(l["transitions"][0].size() == 3);
}

TEST_CASE("observations") {
    auto o = to_json(possible_futures(T("b.a.0", ab()), ab(), TransitionMode::Interleaving), ab());
    CHECK(o["kind"] == "PF");
    CHECK(o["elements"].size() == 3);
    auto r = to_json(ready_pairs(T("a.0", ab()), ab(), TransitionMode::Interleaving), ab());
    CHECK(r.dump() == R"({"elements":[{"set":["a"],"trace":[]},{"set":[],"trace":["a"]}],"kind":"R"})");
}

TEST_CASE("models round trip") {
    for (const auto* m : {&table6_model(), &table7_model()}) CHECK(model_from_json(to_json(*m)) == *m);
    auto j = to_json(table7_model());
    j["plus"][0][0] = 7;
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);
}

TEST_CASE("proof scripts round trip") {
    auto sys = build_system("E_S", ab());
    ProofScript ps = derivation_script("E_S", "CSP2[a,a,b]", ab(), TransitionMode::Interleaving);
    Json j = to_json(ps);
    ProofScript back = proof_from_json(Json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(check_proof(back, sys).accepted);
}

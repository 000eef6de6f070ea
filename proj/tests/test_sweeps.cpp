#include <doctest.h>

#include "bccsp/sweeps.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

TEST_CASE("spectrum sweep, serial and parallel agree") {
    auto s = spectrum_sweep_serial(ab(), 5);
    auto p = spectrum_sweep_parallel(ab(), 5, 3, 2);
    CHECK(s == p);
    CHECK(s.terms == 101);
    CHECK(s.violations == 0);
    CHECK(s.node_pairs > 0);
}

TEST_CASE("elimination sweep, serial and parallel agree") {
    std::vector<std::string> sys = {"E_RS", "E_CS", "E_S", "E_RT", "E_FT", "E_R", "E_F", "E_CT", "E_T"};
    auto s = elimination_sweep_serial(sys, ab(), TransitionMode::Interleaving, 6, 50);
    auto p = elimination_sweep_parallel(sys, ab(), TransitionMode::Interleaving, 6, 50, 2);
    CHECK(s == p);
    CHECK(s.ok());
    CHECK(s.proofs_checked > 0);
}

TEST_CASE("soundness sweep, serial and parallel agree") {
    std::vector<std::string> sys = {"E_RS", "E_CT"};
    auto s = soundness_sweep_serial(sys, ab(), TransitionMode::Interleaving, 7);
    auto p = soundness_sweep_parallel(sys, ab(), TransitionMode::Interleaving, 7, 2);
    REQUIRE(s.entries.size() == p.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) CHECK(s.entries[i] == p.entries[i]);
    CHECK(s.refutations() == 0);
}

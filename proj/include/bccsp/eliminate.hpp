#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bccsp/proof.hpp"

namespace bccsp {

// One application of the parallel-elimination case analysis.
struct EliminationCase {
    std::string first_rewrite;  // axiom or lemma instance id, e.g. "RSP2[a|b]" or "P1"
    std::uint32_t measure = 0;  // size(p) + size(q) of the 0-stripped operands
    std::optional<std::uint32_t> parent;  // measure of the case that produced this one
};

struct EliminationResult {
    Term result;
    std::optional<ProofScript> proof;
    std::vector<EliminationCase> cases;
};

// "RS", "CS", "RT" or "CT": the case analysis used for a system.
std::string elimination_route(const std::string& system);

EliminationResult eliminate(const Term& p, const AxiomSystem& system, bool emit_proof = false);
EliminationResult eliminate(const Term& p, const std::string& system, const Alphabet& alphabet, TransitionMode mode,
                            bool emit_proof = false);

}  // namespace bccsp

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bccsp/proof.hpp"

namespace bccsp {

enum class WitnessKind { Interleaving, Sync };

std::string to_string(WitnessKind k);
WitnessKind parse_witness_kind(const std::string& s);

struct WitnessFamily {
    WitnessKind kind = WitnessKind::Interleaving;
    unsigned n = 1;
    Alphabet alphabet = Alphabet::interleaving({"a", "b"});
    Term p;       // p_N, or q_N in the synchronising case
    Term target;  // a || p
    Equation e;   // e_N
    TransitionMode mode() const {
        return kind == WitnessKind::Sync ? TransitionMode::CcsSync : TransitionMode::Interleaving;
    }
};

// Interleaving families use the first two visible actions as a and b; the
// synchronising family uses the first visible action and tau. Singleton
// alphabets are rejected for the interleaving family.
WitnessFamily make_family(WitnessKind kind, unsigned n, const Alphabet& alphabet);
WitnessFamily make_family(WitnessKind kind, unsigned n);

// b^i a with b^0 a = a.0.
Term iterate_prefix(Symbol b, unsigned i, Symbol a);

bool has_summand_equiv(Checker& c, const Term& p, const Term& target, const Relation& rel);
bool has_summand_equiv(const Term& p, const Term& target, const Relation& rel, const Alphabet& alphabet,
                       TransitionMode mode);

struct EvidenceRow {
    unsigned n = 0;
    bool bisimilar = false;
    bool lhs_has_witness = false;
    bool rhs_has_witness = false;
    std::uint32_t norm = 0;
    std::uint32_t depth = 0;
    bool characterisation = false;
    std::size_t characterisation_cases = 0;
    bool tau_steps = false;  // both sides have tau transitions (synchronising case only)
};

struct EvidenceReport {
    WitnessKind kind = WitnessKind::Interleaving;
    unsigned n_max = 0;
    std::vector<EvidenceRow> rows;  // up to and including the first failing N
    bool passed = false;
    std::optional<unsigned> failed_n;
    std::string failed_check;
};

EvidenceReport negative_evidence_report(WitnessKind kind, unsigned n_max);
EvidenceReport negative_evidence_report(WitnessKind kind, unsigned n_max, const Alphabet& alphabet);

// Walks the closed conclusions of a proof, 0-stripped; wherever both sides are
// PF-equivalent to the target, the summand property must agree on them.
struct SummandWalk {
    bool holds = true;
    std::size_t steps = 0;
    std::size_t checked = 0;
    std::optional<std::size_t> failed_step;
};

SummandWalk check_summand_property(const ProofScript& script, const AxiomSystem& system, const Term& target);

}  // namespace bccsp

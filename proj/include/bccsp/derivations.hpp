#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bccsp/proof.hpp"

namespace bccsp {

// The system family whose schemas define the instance id, e.g. "CS" for "CSP1[a,b,a,b]".
std::string defining_family(const std::string& instance_id);

// The instance as stated in its defining system.
Equation schema_instance(const std::string& instance_id, const Alphabet& alphabet, TransitionMode mode);

// True if derive_instance knows how to prove instances of `schema` in the given family.
bool derivable(const std::string& family, const std::string& schema);

// Proves the instance inside the builder's system; returns the step whose
// conclusion is exactly target.lhs = target.rhs.
std::size_t derive_instance(ProofBuilder& b, const Equation& target);

// A stand-alone script for one instance, e.g. ("E_S", "CSP1[a,b,a,b]").
ProofScript derivation_script(const std::string& system, const std::string& instance_id, const Alphabet& alphabet,
                              TransitionMode mode);

// Every (system, instance id) pair with a derivation over the alphabet.
std::vector<std::pair<std::string, std::string>> derivation_cases(const Alphabet& alphabet, bool sync);

}  // namespace bccsp

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bccsp/equivalences.hpp"

namespace bccsp {

struct Equation {
    std::string id;
    Term lhs;
    Term rhs;
    // Name of the schema this equation instantiates (e.g. "EL2"); empty for ad hoc equations.
    std::string schema;
};

std::string render(const Equation& e);

struct AxiomSystem {
    std::string name;
    Alphabet alphabet = Alphabet::interleaving({"a", "b"});
    TransitionMode mode = TransitionMode::Interleaving;
    std::vector<Equation> equations;

    const Equation* find(const std::string& id) const;
    std::size_t count(const std::string& schema) const;
    // The relation the system is meant to axiomatise (B for E0 and E1).
    Relation relation() const;
    void add(Equation e);

private:
    std::map<std::string, std::size_t> index_;
};

// E0, E1, E_RS, E_CS, E_S, E_RT, E_FT, E_R, E_F, E_CT, E_T and the
// synchronising variants Ec_RS, ..., Ec_T (also accepted as E^c_X).
std::vector<std::string> system_names(bool sync);
AxiomSystem build_system(const std::string& name, const Alphabet& alphabet, TransitionMode mode);
AxiomSystem build_system(const std::string& name, const Alphabet& alphabet);
// "RS" for "E_RS" and "Ec_RS"; empty for E0/E1.
std::string system_family(const std::string& name);
bool is_sync_system(const std::string& name);

struct SoundResult {
    bool sound = true;  // true means: no refutation within the scheme
    std::optional<Refutation> witness;
    std::size_t tried = 0;
};

SoundResult check_sound(const Equation& e, const Relation& rel, const Alphabet& alphabet, TransitionMode mode,
                        const SubstitutionScheme& scheme);
SoundResult check_sound(Checker& c, const Equation& e, const Relation& rel, const SubstitutionScheme& scheme);

// Closure under 0-substitutions followed by 0 stripping.
AxiomSystem saturate(const AxiomSystem& system);

// Reads "lhs = rhs" (also "~=" or "≈" as the separator).
Equation parse_equation(std::string_view text, const Alphabet& alphabet, ParseOptions opts = {});

// First-order matching of `pattern` against `t`, extending `sigma`.
bool match(const Term& pattern, const Term& t, Substitution& sigma);

}  // namespace bccsp

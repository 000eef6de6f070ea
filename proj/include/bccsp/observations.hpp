#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bccsp/semantics.hpp"

namespace bccsp {

enum class ObsKind { F, R, FT, RT, PF };

std::string to_string(ObsKind k);

// Explicit extensional observations of a closed term. Action sets are
// bitmasks over the alphabet's local action indices.
struct ObservationSet {
    ObsKind kind = ObsKind::F;
    // F and R: (trace, refused set) or (trace, ready set)
    std::set<std::pair<Trace, ActionSet>> pairs;
    // FT and RT: the trace a1..an together with the sets X0..Xn
    std::set<std::pair<Trace, std::vector<ActionSet>>> decorated;
    // PF: (trace, trace set of the reached state)
    std::set<std::pair<Trace, TraceSet>> futures;

    std::size_t size() const;
    bool operator==(const ObservationSet& o) const {
        return kind == o.kind && pairs == o.pairs && decorated == o.decorated && futures == o.futures;
    }
    bool operator!=(const ObservationSet& o) const { return !(*this == o); }
};

ObservationSet failure_pairs(const Term& p, const Alphabet& alphabet, TransitionMode mode);
ObservationSet ready_pairs(const Term& p, const Alphabet& alphabet, TransitionMode mode);
ObservationSet failure_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode);
ObservationSet ready_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode);
ObservationSet possible_futures(const Term& p, const Alphabet& alphabet, TransitionMode mode);
ObservationSet observe(ObsKind kind, const Term& p, const Alphabet& alphabet, TransitionMode mode);

std::vector<std::string> render_observations(const ObservationSet& o, const Alphabet& alphabet);

}  // namespace bccsp

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "bccsp/term.hpp"

namespace bccsp {

enum class TransitionMode { Interleaving, CcsSync };

inline TransitionMode default_mode(const Alphabet& a) {
    return a.sync_mode() ? TransitionMode::CcsSync : TransitionMode::Interleaving;
}

struct Step {
    Symbol action;
    Term target;
};

// One-step derivatives, deduplicated and sorted. Variables and 0 are inert.
std::vector<Step> transitions(const Term& t, const Alphabet& alphabet, TransitionMode mode);
ActionSet initials(const Term& t, const Alphabet& alphabet, TransitionMode mode);

struct Lts {
    std::vector<Term> states;  // states[root] is the root
    std::size_t root = 0;
    // (source, action, target), sorted
    std::vector<std::tuple<std::size_t, Symbol, std::size_t>> transitions;
    std::vector<std::vector<std::pair<Symbol, std::size_t>>> successors;
    std::unordered_map<Term, std::size_t, TermHash> index;

    std::size_t size() const { return states.size(); }
};

Lts build_lts(const Term& p, const Alphabet& alphabet, TransitionMode mode);
// LTS over the union of the reachable states of several roots.
Lts build_joint_lts(const std::vector<Term>& roots, const Alphabet& alphabet, TransitionMode mode);

using Trace = std::vector<Symbol>;
using TraceSet = std::set<Trace>;

TraceSet traces(const Term& p, const Alphabet& alphabet, TransitionMode mode);
TraceSet completed_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode);

std::set<std::string> vars_at_distance(const Term& t, std::size_t k, const Alphabet& alphabet, TransitionMode mode);

std::string render_trace(const Trace& t);

std::string lts_to_dot(const Lts& lts);

void require_closed(const Term& t);

}  // namespace bccsp

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bccsp/axioms.hpp"

namespace bccsp {

using Element = std::uint8_t;
using Valuation = std::map<std::string, Element>;

struct FiniteModel {
    std::size_t carrier = 0;
    Element zero = 0;
    std::map<std::string, std::vector<Element>> prefix;  // keyed by action name
    std::vector<std::vector<Element>> plus;
    std::vector<std::vector<Element>> par;

    // Throws std::invalid_argument when a table has the wrong shape or an entry is out of range.
    void validate() const;
    bool operator==(const FiniteModel& o) const {
        return carrier == o.carrier && zero == o.zero && prefix == o.prefix && plus == o.plus && par == o.par;
    }
};

// The five-element model for E_CS and E_CT and the three-element model for
// E_RT and E_CT, both over {a, b}.
const FiniteModel& table6_model();
const FiniteModel& table7_model();
// "table6" or "table7".
const FiniteModel& fixture_model(const std::string& name);

Element eval(const FiniteModel& m, const Term& t, const Valuation& v);
bool holds(const FiniteModel& m, const Equation& e);
// Valuations are enumerated over the variables in name order, the first one varying slowest.
std::optional<Valuation> counter_valuation(const FiniteModel& m, const Equation& e);
std::vector<Valuation> failing_valuations(const FiniteModel& m, const Equation& e, std::size_t limit = SIZE_MAX);
std::size_t count_failing(const FiniteModel& m, const Equation& e);

// "EL2": (ax + by) || (az + bw) = a(x || (az + bw)) + b(y || (az + bw)) + a((ax + by) || z) + b((ax + by) || w)
// "RSP2" and "CSP2": ax || (ay + az + w) = a(x || (ay + az + w)) + ax || (ay + w) + ax || (az + w)
// Anything else is read as an axiom instance id ("CSP2[a,b,b]") or as an equation "lhs = rhs".
Equation named_goal(const std::string& name, const Alphabet& alphabet);

struct AxiomCheck {
    std::string id;
    std::size_t valuations = 0;
    std::size_t failures = 0;
    std::optional<Valuation> counterexample;
};

struct IndependenceReport {
    std::vector<AxiomCheck> axioms;
    AxiomCheck goal;
    bool all_axioms_hold = true;
    bool goal_refuted = false;
    bool ok() const { return all_axioms_hold && goal_refuted; }
};

IndependenceReport independence_report(const FiniteModel& m, const AxiomSystem& system, const Equation& goal);

enum class SearchStatus { Found, NoModel, BudgetExhausted };

struct SearchResult {
    SearchStatus status = SearchStatus::NoModel;
    std::optional<FiniteModel> model;
    std::uint64_t nodes = 0;
};

std::string to_string(SearchStatus s);

// Backtracking search for a model of `axioms` with exactly `carrier` elements in
// which `goal` fails. The budget caps the number of decisions.
SearchResult search_model(const Alphabet& alphabet, std::size_t carrier, const std::vector<Equation>& axioms,
                          const Equation& goal, std::uint64_t budget = 50'000'000);
// Tries carriers 1, 2, ..., max_carrier in turn.
SearchResult search_model_up_to(const Alphabet& alphabet, std::size_t max_carrier, const std::vector<Equation>& axioms,
                                const Equation& goal, std::uint64_t budget = 50'000'000);

}  // namespace bccsp

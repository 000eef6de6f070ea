#pragma once

#include <json.hpp>
#include <string>

#include "bccsp/finite_models.hpp"
#include "bccsp/observations.hpp"
#include "bccsp/proof.hpp"

namespace bccsp {

using Json = nlohmann::json;

// {"actions": ["a", "b"], "sync": false}; only the base names are stored.
Json to_json(const Alphabet& alphabet);
Alphabet alphabet_from_json(const Json& j);

// {"root": "...", "states": ["..."], "transitions": [["from", "action", "to"]]}
Json to_json(const Lts& lts);

Json to_json(const ObservationSet& o, const Alphabet& alphabet);

// {"carrier": n, "zero": i, "prefix": {"a": [...]}, "plus": [[...]], "par": [[...]]}
Json to_json(const FiniteModel& m);
FiniteModel model_from_json(const Json& j);

Json to_json(const Equation& e);
Json to_json(const Valuation& v);

// See docs/proof-scripts.md for the layout.
Json to_json(const ProofScript& ps);
ProofScript proof_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace bccsp

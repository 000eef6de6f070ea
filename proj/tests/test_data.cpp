#include <doctest.h>

#include <filesystem>

#include "bccsp/derivations.hpp"
#include "bccsp/json_io.hpp"
#include "helpers.hpp"

using namespace bccsp;
using namespace testing_support;

namespace {

std::string data(const std::string& rel) { return std::string(BCCSP_DATA_DIR) + "/" + rel; }

const std::vector<std::pair<std::string, std::string>> kProofs = {
    {"E_S", "CS[a,b]"},     {"E_S", "CSP1[a,b,a,b]"}, {"E_S", "CSP2[a,a,b]"}, {"E_F", "FT[a]"},
    {"E_F", "RS[a,b]"},     {"E_T", "CT[a,a,b]"},     {"E_T", "CTP[a,b]"},    {"E_R", "RT[a;a,b]"},
};

std::string proof_file(const std::string& system, const std::string& id) {
    return data("proofs/" + system + "_" + id.substr(0, id.find('[')) + ".json");
}

}  // namespace

TEST_CASE("model files match the built-in tables") {
    CHECK(model_from_json(read_json_file(data("models/table6.json"))) == table6_model());
    CHECK(model_from_json(read_json_file(data("models/table7.json"))) == table7_model());
}

TEST_CASE("proof files are accepted and match the generated derivations") {
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(data("proofs"))) files += entry.path().extension() == ".json";
    CHECK(files == kProofs.size());
    for (const auto& [system, id] : kProofs) {
        CAPTURE(id);
        ProofScript ps = proof_from_json(read_json_file(proof_file(system, id)));
        CHECK(ps.system == system);
        Equation target = schema_instance(id, ab(), TransitionMode::Interleaving);
        CHECK(ps.goal_lhs == target.lhs);
        CHECK(ps.goal_rhs == target.rhs);
        CHECK(check_proof(ps, build_system(system, ab())).accepted);
        CHECK(to_json(ps) == to_json(derivation_script(system, id, ab(), TransitionMode::Interleaving)));
    }
}

TEST_CASE("a tampered proof file is rejected") {
    Json j = read_json_file(proof_file("E_T", "CTP[a,b]"));
    j["steps"][0]["axiom"] = "EL1[a,b]";
    ProofScript ps = proof_from_json(j);
    CHECK_FALSE(check_proof(ps, build_system("E_T", ab())).accepted);
}

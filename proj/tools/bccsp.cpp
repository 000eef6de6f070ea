#include <CLI11.hpp>
#include <omp.h>

#include <iomanip>
#include <iostream>
#include <regex>
#include <set>

#include "bccsp/derivations.hpp"
#include "bccsp/eliminate.hpp"
#include "bccsp/equivalences.hpp"
#include "bccsp/errors.hpp"
#include "bccsp/finite_models.hpp"
#include "bccsp/json_io.hpp"
#include "bccsp/sweeps.hpp"
#include "bccsp/witness.hpp"

using namespace bccsp;

namespace {

struct Globals {
    std::string alphabet;
    bool sync = false;
    std::string emit = "text";
    int jobs = 0;
    bool json() const { return emit == "json"; }
};

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

// Without --alphabet, closed-term commands use {a, b} plus every other action named in the input.
// In open terms only identifiers in prefix position count as actions.
Alphabet alphabet_for(const Globals& g, const std::vector<std::string>& texts = {}, bool open = false) {
    if (!g.alphabet.empty()) return Alphabet::parse_list(g.alphabet, g.sync);
    std::set<std::string> names{"a", "b"};
    static const std::regex ident("([A-Za-z_][A-Za-z0-9_]*)");
    static const std::regex prefix("([A-Za-z_][A-Za-z0-9_]*)'?\\s*\\.");
    for (const auto& t : texts)
        for (auto it = std::sregex_iterator(t.begin(), t.end(), open ? prefix : ident); it != std::sregex_iterator(); ++it)
            if ((*it)[1] != "tau") names.insert((*it)[1]);
    return g.sync ? Alphabet::sync({names.begin(), names.end()}) : Alphabet::interleaving({names.begin(), names.end()});
}

Term closed_term(const std::string& text, const Alphabet& al) {
    Term t = parse(text, al, ParseOptions{true});
    require_closed(t);
    return t;
}

TransitionMode mode_of(const Alphabet& al) { return default_mode(al); }

std::string valuation_text(const Valuation& v) {
    std::string out;
    for (const auto& [x, e] : v) out += (out.empty() ? "" : ", ") + x + "=" + std::to_string(e);
    return out;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_parse(const Globals& g, const std::string& text, bool abbreviate) {
    Alphabet al = alphabet_for(g, {text});
    Term t = parse(text, al, ParseOptions{true});
    if (g.json())
        print_json({{"term", render(t, abbreviate)}, {"closed", vars(t).empty()}});
    else
        std::cout << render(t, abbreviate) << "\n";
    return 0;
}

int cmd_metrics(const Globals& g, const std::string& text) {
    Alphabet al = alphabet_for(g, {text});
    Term t = parse(text, al, ParseOptions{true});
    Metrics m = metrics(t);
    if (g.json())
        print_json({{"term", render(t)}, {"size", m.size}, {"depth", m.depth}, {"norm", m.norm}});
    else
        std::cout << "size  " << m.size << "\ndepth " << m.depth << "\nnorm  " << m.norm << "\n";
    return 0;
}

int cmd_lts(const Globals& g, const std::string& text, bool dot, const std::string& observe) {
    Alphabet al = alphabet_for(g, {text});
    Term t = closed_term(text, al);
    if (!observe.empty()) {
        ObsKind kind = observe == "F"    ? ObsKind::F
                       : observe == "R"  ? ObsKind::R
                       : observe == "FT" ? ObsKind::FT
                       : observe == "RT" ? ObsKind::RT
                       : observe == "PF" ? ObsKind::PF
                                         : throw std::invalid_argument("unknown observation kind " + observe);
        ObservationSet o = bccsp::observe(kind, t, al, mode_of(al));
        if (g.json())
            print_json(to_json(o, al));
        else
            for (const auto& line : render_observations(o, al)) std::cout << line << "\n";
        return 0;
    }
    Lts lts = build_lts(t, al, mode_of(al));
    if (dot)
        std::cout << lts_to_dot(lts);
    else if (g.json())
        print_json(to_json(lts));
    else
        for (const auto& [from, a, to] : lts.transitions)
            std::cout << render(lts.states[from]) << " --" << action_name(a) << "-> " << render(lts.states[to]) << "\n";
    return 0;
}

int cmd_equiv(const Globals& g, const std::string& rel_name, const std::string& p, const std::string& q) {
    Alphabet al = alphabet_for(g, {p, q});
    Relation rel = Relation::parse(rel_name);
    bool eq = equivalent(closed_term(p, al), closed_term(q, al), rel, al, mode_of(al));
    if (g.json())
        print_json({{"relation", rel.name()}, {"equivalent", eq}});
    else
        std::cout << (eq ? "equivalent" : "not equivalent") << " under " << rel.name() << "\n";
    return eq ? 0 : 1;
}

int cmd_spectrum(const Globals& g, const std::string& p, const std::string& q, unsigned nested_max) {
    Alphabet al = alphabet_for(g, {p, q});
    SpectrumVector v = spectrum_vector(closed_term(p, al), closed_term(q, al), al, mode_of(al), nested_max);
    if (g.json()) {
        Json j = Json::object();
        for (const auto& [rel, eq] : v) j[rel.name()] = eq;
        print_json(j);
    } else {
        for (const auto& [rel, eq] : v) std::cout << std::left << std::setw(4) << rel.name() << (eq ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_eliminate(const Globals& g, const std::string& system, const std::string& text, bool emit_proof) {
    Alphabet al = alphabet_for(g, {text});
    AxiomSystem sys = build_system(system, al, mode_of(al));
    EliminationResult r = eliminate(closed_term(text, al), sys, emit_proof);
    if (g.json()) {
        Json cases = Json::array();
        for (const auto& c : r.cases) {
            Json jc = {{"first_rewrite", c.first_rewrite}, {"measure", c.measure}};
            if (c.parent) jc["parent"] = *c.parent;
            cases.push_back(jc);
        }
        Json j = {{"result", render(r.result)}, {"cases", cases}};
        if (r.proof) j["proof"] = to_json(*r.proof);
        print_json(j);
    } else {
        std::cout << render(r.result) << "\n";
        if (r.proof) std::cout << to_json(*r.proof).dump(2) << "\n";
    }
    return 0;
}

int cmd_axioms_list(const Globals& g, const std::string& system) {
    Alphabet al = alphabet_for(g);
    if (system.empty()) {
        for (const auto& name : system_names(al.sync_mode())) {
            AxiomSystem sys = build_system(name, al, mode_of(al));
            std::cout << std::left << std::setw(7) << name << sys.relation().name() << "  " << sys.equations.size()
                      << " equations\n";
        }
        return 0;
    }
    AxiomSystem sys = build_system(system, al, mode_of(al));
    if (g.json()) {
        Json eqs = Json::array();
        for (const auto& e : sys.equations) eqs.push_back(to_json(e));
        print_json({{"system", sys.name}, {"relation", sys.relation().name()}, {"alphabet", to_json(al)}, {"equations", eqs}});
    } else {
        for (const auto& e : sys.equations) std::cout << std::left << std::setw(16) << e.id << render(e) << "\n";
    }
    return 0;
}

int cmd_axioms_instantiate(const Globals& g, const std::string& name) {
    Alphabet al = alphabet_for(g);
    std::vector<Equation> found;
    if (name.find('[') != std::string::npos) {
        found.push_back(schema_instance(name, al, mode_of(al)));
    } else {
        std::set<std::string> seen;
        for (const auto& sys_name : system_names(al.sync_mode()))
            for (const auto& e : build_system(sys_name, al, mode_of(al)).equations)
                if (e.schema == name && seen.insert(e.id).second) found.push_back(e);
        if (found.empty()) throw std::invalid_argument("no system contains schema " + name);
    }
    if (g.json()) {
        Json eqs = Json::array();
        for (const auto& e : found) eqs.push_back(to_json(e));
        print_json(eqs);
    } else {
        for (const auto& e : found) std::cout << std::left << std::setw(16) << e.id << render(e) << "\n";
    }
    return 0;
}

int cmd_soundness(const Globals& g, std::vector<std::string> systems, const std::string& equation,
                  const std::string& rel_name, std::size_t stride) {
    Alphabet al = alphabet_for(g, {equation}, true);
    if (!equation.empty()) {
        if (rel_name.empty()) throw std::invalid_argument("--rel is required with --equation");
        Equation e = parse_equation(equation, al);
        SoundResult r = check_sound(e, Relation::parse(rel_name), al, mode_of(al), default_scheme(al));
        Json j = {{"equation", render(e)}, {"relation", rel_name}, {"refuted", !r.sound}, {"tried", r.tried}};
        if (r.witness) {
            j["substitution"] = render_substitution(r.witness->sigma);
            j["lhs"] = render(r.witness->lhs);
            j["rhs"] = render(r.witness->rhs);
        }
        if (g.json()) {
            print_json(j);
        } else if (r.witness) {
            std::cout << "refuted by " << render_substitution(r.witness->sigma) << "\n  " << render(r.witness->lhs)
                      << "\n  " << render(r.witness->rhs) << "\n";
        } else {
            std::cout << "no refutation among " << r.tried << " substitutions\n";
        }
        return r.sound ? 0 : 1;
    }
    if (systems.empty()) systems = system_names(al.sync_mode());
    SoundnessSweep sweep = soundness_sweep_parallel(systems, al, mode_of(al), stride, g.jobs);
    if (g.json()) {
        Json entries = Json::array();
        for (const auto& e : sweep.entries)
            entries.push_back({{"system", e.system}, {"equation", e.equation}, {"refuted", e.refuted}, {"witness", e.witness}});
        print_json({{"equations", sweep.entries.size()}, {"refutations", sweep.refutations()}, {"entries", entries}});
    } else {
        for (const auto& e : sweep.entries)
            if (e.refuted) std::cout << e.system << "  " << e.equation << "  refuted by " << e.witness << "\n";
        std::cout << sweep.entries.size() << " equations, " << sweep.refutations() << " refuted\n";
    }
    return sweep.refutations() == 0 ? 0 : 1;
}

int cmd_prove_check(const Globals& g, const std::string& file) {
    ProofScript ps = proof_from_json(read_json_file(file));
    AxiomSystem sys = build_system(ps.system, ps.alphabet, default_mode(ps.alphabet));
    ProofCheck c = check_proof(ps, sys);
    if (g.json()) {
        Json j = {{"accepted", c.accepted}, {"steps", ps.steps.size()}};
        if (!c.accepted) j["failed_step"] = c.failed_step, j["reason"] = c.reason;
        print_json(j);
    } else if (c.accepted) {
        std::cout << "accepted: " << render(ps.goal_lhs) << " = " << render(ps.goal_rhs) << " in " << ps.system << " ("
                  << ps.steps.size() << " steps)\n";
    } else {
        std::cout << "rejected at step " << c.failed_step << ": " << c.reason << "\n";
    }
    return c.accepted ? 0 : 1;
}

int cmd_derive(const Globals& g, const std::string& system, const std::string& instance, const std::string& out) {
    Alphabet al = alphabet_for(g);
    Json j = to_json(derivation_script(system, instance, al, mode_of(al)));
    if (out.empty())
        print_json(j);
    else
        write_json_file(out, j);
    return 0;
}

FiniteModel load_model(const std::string& fixture, const std::string& file) {
    if (!file.empty()) return model_from_json(read_json_file(file));
    if (fixture.empty()) throw std::invalid_argument("one of --fixture or --model is required");
    return fixture_model(fixture);
}

int cmd_model_check(const Globals& g, const std::string& fixture, const std::string& file, const std::string& axioms,
                    const std::string& goal_name) {
    Alphabet al = alphabet_for(g);
    FiniteModel m = load_model(fixture, file);
    AxiomSystem sys = build_system(axioms, al, mode_of(al));
    Equation goal = named_goal(goal_name, al);
    IndependenceReport r = independence_report(m, sys, goal);
    if (g.json()) {
        Json failing = Json::array();
        for (const auto& a : r.axioms)
            if (a.failures) failing.push_back({{"id", a.id}, {"counterexample", to_json(*a.counterexample)}});
        Json j = {{"axioms", r.axioms.size()}, {"all_axioms_hold", r.all_axioms_hold}, {"failing_axioms", failing},
                  {"goal", to_json(goal)}, {"goal_refuted", r.goal_refuted}, {"goal_failures", r.goal.failures}};
        Json vals = Json::array();
        for (const auto& v : failing_valuations(m, goal, 16)) vals.push_back(to_json(v));
        j["failing_valuations"] = vals;
        print_json(j);
    } else {
        std::cout << r.axioms.size() << " axioms of " << axioms << ": "
                  << (r.all_axioms_hold ? "all hold" : "some fail") << "\n";
        for (const auto& a : r.axioms)
            if (a.failures) std::cout << "  " << a.id << " fails at " << valuation_text(*a.counterexample) << "\n";
        std::cout << "goal " << render(goal) << "\n";
        if (r.goal_refuted) {
            std::cout << "refuted: " << r.goal.failures << " of " << r.goal.valuations << " valuations fail\n";
            for (const auto& v : failing_valuations(m, goal, 16)) std::cout << "  " << valuation_text(v) << "\n";
        } else
            std::cout << "holds in the model\n";
    }
    return r.ok() ? 0 : 1;
}

int cmd_model_search(const Globals& g, const std::string& axioms, const std::string& goal_name, std::size_t carrier,
                     std::uint64_t budget, bool up_to) {
    Alphabet al = alphabet_for(g);
    AxiomSystem sys = build_system(axioms, al, mode_of(al));
    Equation goal = named_goal(goal_name, al);
    SearchResult r = up_to ? search_model_up_to(al, carrier, sys.equations, goal, budget)
                           : search_model(al, carrier, sys.equations, goal, budget);
    if (g.json()) {
        Json j = {{"status", to_string(r.status)}, {"nodes", r.nodes}};
        if (r.model) j["model"] = to_json(*r.model);
        print_json(j);
    } else {
        std::cout << to_string(r.status) << " after " << r.nodes << " decisions\n";
        if (r.model) std::cout << to_json(*r.model).dump() << "\n";
    }
    return r.status == SearchStatus::Found ? 0 : 1;
}

int cmd_witness(const Globals& g, const std::string& kind, unsigned max_n) {
    WitnessKind k = parse_witness_kind(kind);
    EvidenceReport r = g.alphabet.empty() ? negative_evidence_report(k, max_n)
                                          : negative_evidence_report(k, max_n, alphabet_for(g));
    if (g.json()) {
        Json rows = Json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"n", row.n}, {"bisimilar", row.bisimilar}, {"lhs_has_witness", row.lhs_has_witness},
                            {"rhs_has_witness", row.rhs_has_witness}, {"norm", row.norm}, {"depth", row.depth},
                            {"characterisation", row.characterisation}, {"tau_steps", row.tau_steps}});
        Json j = {{"kind", to_string(r.kind)}, {"n_max", r.n_max}, {"passed", r.passed}, {"rows", rows}};
        if (r.failed_n) j["failed_n"] = *r.failed_n, j["failed_check"] = r.failed_check;
        print_json(j);
    } else {
        std::cout << " N  bisim  lhs  rhs  norm  depth  charact.\n";
        for (const auto& row : r.rows)
            std::cout << std::setw(2) << row.n << "  " << std::setw(5) << row.bisimilar << "  " << std::setw(3)
                      << row.lhs_has_witness << "  " << std::setw(3) << row.rhs_has_witness << "  " << std::setw(4)
                      << row.norm << "  " << std::setw(5) << row.depth << "  " << row.characterisation << "\n";
        if (r.passed)
            std::cout << "all checks pass\n";
        else
            std::cout << "failed at N=" << *r.failed_n << ": " << r.failed_check << "\n";
    }
    return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for BCCSP with parallel composition"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--alphabet", g.alphabet, "Comma separated action names");
    app.add_flag("--sync", g.sync, "CCS synchronisation");
    app.add_option("--emit", g.emit, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", g.jobs, "Worker threads (0 = all)");

    std::function<int()> run;
    std::string t1, t2, rel, system, file, fixture, goal, kind, observe, out, instance;
    std::vector<std::string> systems;
    bool flag = false, up_to = false;
    std::size_t carrier = 5, stride = 1;
    std::uint64_t budget = 50'000'000;
    unsigned n = 3, max_n = 6;

    auto* parse_cmd = app.add_subcommand("parse", "Parse and print a term canonically");
    parse_cmd->add_option("term", t1)->required();
    parse_cmd->add_flag("--abbreviate", flag, "Drop trailing .0");
    parse_cmd->callback([&] { run = [&] { return cmd_parse(g, t1, flag); }; });

    auto* lts_cmd = app.add_subcommand("lts", "Print the transition system of a closed term");
    lts_cmd->add_option("term", t1)->required();
    lts_cmd->add_flag("--dot", flag, "Graphviz output");
    lts_cmd->add_option("--observe", observe, "Print the F, R, FT, RT or PF observations instead");
    lts_cmd->callback([&] { run = [&] { return cmd_lts(g, t1, flag, observe); }; });

    auto* metrics_cmd = app.add_subcommand("metrics", "Size, depth and norm of a term");
    metrics_cmd->add_option("term", t1)->required();
    metrics_cmd->callback([&] { run = [&] { return cmd_metrics(g, t1); }; });

    auto* equiv_cmd = app.add_subcommand("equiv", "Decide an equivalence between two closed terms");
    equiv_cmd->add_option("relation", rel)->required();
    equiv_cmd->add_option("p", t1)->required();
    equiv_cmd->add_option("q", t2)->required();
    equiv_cmd->callback([&] { run = [&] { return cmd_equiv(g, rel, t1, t2); }; });

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Decide every relation of the spectrum");
    spectrum_cmd->add_option("p", t1)->required();
    spectrum_cmd->add_option("q", t2)->required();
    spectrum_cmd->add_option("--nested-max", n)->check(CLI::Range(1, 4));
    spectrum_cmd->callback([&] { run = [&] { return cmd_spectrum(g, t1, t2, n); }; });

    auto* elim_cmd = app.add_subcommand("eliminate", "Rewrite a closed term into a parallel-free one");
    elim_cmd->add_option("--system", system)->required();
    elim_cmd->add_flag("--emit-proof", flag);
    elim_cmd->add_option("term", t1)->required();
    elim_cmd->callback([&] { run = [&] { return cmd_eliminate(g, system, t1, flag); }; });

    auto* axioms_cmd = app.add_subcommand("axioms", "Axiom systems");
    axioms_cmd->require_subcommand(1);
    auto* list_cmd = axioms_cmd->add_subcommand("list", "List systems, or the equations of one");
    list_cmd->add_option("--system", system);
    list_cmd->callback([&] { run = [&] { return cmd_axioms_list(g, system); }; });
    auto* inst_cmd = axioms_cmd->add_subcommand("instantiate", "Instances of a schema, or one instance by id");
    inst_cmd->add_option("schema", instance)->required();
    inst_cmd->callback([&] { run = [&] { return cmd_axioms_instantiate(g, instance); }; });
    auto* derive_cmd = axioms_cmd->add_subcommand("derive", "Proof script deriving an instance in a system");
    derive_cmd->add_option("--system", system)->required();
    derive_cmd->add_option("instance", instance)->required();
    derive_cmd->add_option("-o,--output", out);
    derive_cmd->callback([&] { run = [&] { return cmd_derive(g, system, instance, out); }; });

    auto add_soundness = [&](CLI::App* cmd) {
        cmd->add_option("--system", systems, "Systems to sweep (default: all)");
        cmd->add_option("--equation", t1, "Check a single equation instead");
        cmd->add_option("--rel", rel, "Relation for --equation");
        cmd->add_option("--stride", stride, "Check every n-th equation only");
        cmd->callback([&] { run = [&] { return cmd_soundness(g, systems, t1, rel, stride); }; });
    };
    add_soundness(axioms_cmd->add_subcommand("soundness", "Search for substitutions refuting axioms"));
    add_soundness(app.add_subcommand("soundness", "Search for substitutions refuting axioms"));

    auto add_prove_check = [&](CLI::App* cmd) {
        cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
        cmd->callback([&] { run = [&] { return cmd_prove_check(g, file); }; });
    };
    add_prove_check(axioms_cmd->add_subcommand("prove-check", "Check a JSON proof script"));
    add_prove_check(app.add_subcommand("prove-check", "Check a JSON proof script"));

    auto* model_cmd = app.add_subcommand("model", "Finite models");
    model_cmd->require_subcommand(1);
    auto* check_cmd = model_cmd->add_subcommand("check", "Check that a model separates a goal from a system");
    check_cmd->add_option("--fixture", fixture, "table6 or table7");
    check_cmd->add_option("--model", file, "Model JSON file")->check(CLI::ExistingFile);
    check_cmd->add_option("--axioms", system)->required();
    check_cmd->add_option("--goal", goal)->required();
    check_cmd->callback([&] { run = [&] { return cmd_model_check(g, fixture, file, system, goal); }; });
    auto* search_cmd = model_cmd->add_subcommand("search", "Search for a separating model");
    search_cmd->add_option("--axioms", system)->required();
    search_cmd->add_option("--goal", goal)->required();
    search_cmd->add_option("--carrier", carrier);
    search_cmd->add_option("--budget", budget, "Maximum number of decisions");
    search_cmd->add_flag("--up-to", up_to, "Try every carrier size up to --carrier");
    search_cmd->callback([&] { run = [&] { return cmd_model_search(g, system, goal, carrier, budget, up_to); }; });

    auto* witness_cmd = app.add_subcommand("witness", "Negative evidence report for the witness families");
    kind = "interleaving";
    witness_cmd->add_option("--kind", kind);
    witness_cmd->add_option("--max-n", max_n);
    witness_cmd->callback([&] { run = [&] { return cmd_witness(g, kind, max_n); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (g.jobs > 0) omp_set_num_threads(g.jobs);
    try {
        return run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

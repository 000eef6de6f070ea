#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "bccsp/derivations.hpp"
#include "bccsp/equivalences.hpp"
#include "bccsp/finite_models.hpp"
#include "bccsp/json_io.hpp"
#include "bccsp/sweeps.hpp"
#include "bccsp/term_gen.hpp"
#include "bccsp/witness.hpp"

using namespace bccsp;

namespace {

const TransitionMode IL = TransitionMode::Interleaving;

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.ok && dt <= limit_s;
    if (o.ok && !pass) o.detail += "; over the time limit";
    failures += !pass;
    std::printf("criterion %2d %s  %s: %s (%.2f s, limit %.0f s)\n", id, pass ? "PASS" : "FAIL", title, o.detail.c_str(), dt,
                limit_s);
    std::fflush(stdout);
}

std::string str(std::size_t n) { return std::to_string(n); }

bool contains(const std::vector<Valuation>& vs, const Valuation& v) {
    for (const auto& w : vs)
        if (w == v) return true;
    return false;
}

}  // namespace

int main() {
    const Alphabet ab = Alphabet::interleaving({"a", "b"});
    const Alphabet abc = Alphabet::interleaving({"a", "b", "c"});
    const auto systems = system_names(false);

    criterion(1, "instantiation counts", 1, [&] {
        auto rs = build_system("E_RS", ab);
        auto cs = build_system("E_CS", ab);
        bool ok = rs.count("EL2") == 16 && rs.count("RSP2") == 8 && cs.count("CS") == 4 && cs.count("CSP1") == 16 &&
                  cs.count("CSP2") == 8;
        return Outcome{ok, "E_RS EL2=" + str(rs.count("EL2")) + " RSP2=" + str(rs.count("RSP2")) + ", E_CS CS=" +
                               str(cs.count("CS")) + " CSP1=" + str(cs.count("CSP1")) + " CSP2=" + str(cs.count("CSP2"))};
    });

    criterion(2, "axiom soundness sweep", 300, [&] {
        auto sweep = soundness_sweep_parallel(systems, ab, IL);
        std::string detail = str(sweep.entries.size()) + " equations, " + str(sweep.refutations()) + " refuted";
        for (const auto& e : sweep.entries)
            if (e.refuted) detail += "; " + e.system + " " + e.equation;
        return Outcome{sweep.refutations() == 0 && !sweep.entries.empty(), detail};
    });

    criterion(3, "known unsoundness", 30, [&] {
        const Relation rs = Relation::of(RelKind::RS);
        Checker c(abc, IL);
        auto scheme = default_scheme(abc);
        auto sp2 = build_system("E_S", abc);
        SoundResult r1 = check_sound(c, *sp2.find("SP2[a]"), rs, scheme);
        // The closed instance with x = 0, y = b, z = c.
        Term p1 = parse("a.0 || (b.0 + c.0)", abc);
        Term q1 = parse("a.0 || b.0 + a.0 || c.0 + a.0 || (b.0 + c.0)", abc);
        bool closed1 = !equivalent(p1, q1, rs, abc, IL) && equivalent(p1, q1, Relation::of(RelKind::CS), abc, IL);
        Substitution s1{{"x", Term::nil()}, {"y", parse("b.0", abc)}, {"z", parse("c.0", abc)}};
        const Equation& e1 = *sp2.find("SP2[a]");
        bool inst1 = !equivalent(substitute(e1.lhs, s1), substitute(e1.rhs, s1), rs, abc, IL) &&
                     equivalent(substitute(e1.lhs, s1), p1, rs, abc, IL);

        Equation one_sided = parse_equation("(a.x + a.y + u) || z = (a.x + u) || z + (a.y + u) || z", abc);
        SoundResult r2 = check_sound(c, one_sided, rs, scheme);
        Substitution s2{{"x", Term::nil()}, {"y", parse("a.0", abc)}, {"u", parse("b.0", abc)}, {"z", parse("c.0", abc)}};
        Term p2 = parse("(a.0 + a.a.0 + b.0) || c.0", abc);
        bool inst2 = substitute(one_sided.lhs, s2) == p2 &&
                     !equivalent(p2, substitute(one_sided.rhs, s2), rs, abc, IL);
        bool ok = !r1.sound && !r2.sound && closed1 && inst1 && inst2;
        std::string detail = "SP2 refuted by " + (r1.witness ? render_substitution(r1.witness->sigma) : "nothing") +
                             ", one-sided RSP1 refuted by " +
                             (r2.witness ? render_substitution(r2.witness->sigma) : "nothing") +
                             (closed1 && inst1 && inst2 ? ", closed witnesses confirmed" : ", closed witnesses NOT confirmed");
        return Outcome{ok, detail};
    });

    criterion(4, "elimination totality and correctness", 600, [&] {
        // Every 121st run emits a proof, giving about 100 proofs over the nine systems.
        auto sweep = elimination_sweep_parallel(systems, ab, IL, 7, 121);
        bool ok = sweep.ok() && sweep.proofs_checked >= 100;
        return Outcome{ok, str(sweep.runs) + " runs, " + str(sweep.not_par_free) + " not parallel-free, " +
                               str(sweep.not_equivalent) + " not equivalent, " + str(sweep.proofs_checked) +
                               " proofs checked, " + str(sweep.proofs_rejected) + " rejected"};
    });

    criterion(5, "spectrum consistency", 600, [&] {
        auto sweep = spectrum_sweep_parallel(ab, 5, 3);
        return Outcome{sweep.violations == 0 && sweep.terms > 0,
                       str(sweep.terms) + " terms, " + str(sweep.node_pairs) + " distinct pairs, " +
                           str(sweep.violations) + " violations"};
    });

    criterion(6, "counter-model reproduction", 60, [&] {
        const FiniteModel& m6 = table6_model();
        const FiniteModel& m7 = table7_model();
        auto el2 = named_goal("EL2", ab);
        auto rsp2 = named_goal("RSP2", ab);
        auto csp2 = named_goal("CSP2", ab);
        bool ok = independence_report(m6, build_system("E_CS", ab), el2).ok() &&
                  independence_report(m6, build_system("E_CT", ab), el2).ok() &&
                  independence_report(m7, build_system("E_RT", ab), rsp2).ok() &&
                  independence_report(m7, build_system("E_CT", ab), csp2).ok();
        bool v6 = contains(failing_valuations(m6, el2), {{"x", 0}, {"y", 0}, {"z", 1}, {"w", 1}});
        bool v7 = contains(failing_valuations(m7, rsp2), {{"x", 0}, {"y", 0}, {"z", 0}, {"w", 1}}) &&
                  contains(failing_valuations(m7, csp2), {{"x", 0}, {"y", 0}, {"z", 0}, {"w", 1}});
        return Outcome{ok && v6 && v7, std::string("independence ") + (ok ? "holds" : "fails") +
                                           ", table 6 valuation " + (v6 ? "fails EL2" : "missing") +
                                           ", table 7 valuation " + (v7 ? "fails RSP2/CSP2" : "missing")};
    });

    criterion(7, "model search", 600, [&] {
        auto rt = build_system("E_RT", ab);
        auto cs = build_system("E_CS", ab);
        auto r1 = search_model(ab, 3, rt.equations, named_goal("RSP2", ab));
        auto r2 = search_model(ab, 5, cs.equations, named_goal("EL2", ab));
        bool ok1 = r1.model && independence_report(*r1.model, rt, named_goal("RSP2", ab)).ok();
        bool ok2 = r2.model && independence_report(*r2.model, cs, named_goal("EL2", ab)).ok();
        return Outcome{ok1 && ok2, "E_RT/RSP2 at 3: " + to_string(r1.status) + " after " + str(r1.nodes) +
                                       " decisions, E_CS/EL2 at 5: " + to_string(r2.status) + " after " +
                                       str(r2.nodes) + " decisions" + (ok1 && ok2 ? ", both verified" : "")};
    });

    criterion(8, "negative-result evidence", 120, [&] {
        auto il = negative_evidence_report(WitnessKind::Interleaving, 6);
        auto sy = negative_evidence_report(WitnessKind::Sync, 4);
        bool values = true;
        for (const auto* r : {&il, &sy})
            for (const auto& row : r->rows) values = values && row.norm == 3 && row.depth == row.n + 2;
        bool ok = il.passed && sy.passed && il.rows.size() == 6 && sy.rows.size() == 4 && values;
        std::string detail = std::string("interleaving N<=6 ") + (il.passed ? "passed" : "failed: " + il.failed_check) +
                             ", sync N<=4 " + (sy.passed ? "passed" : "failed: " + sy.failed_check) +
                             (values ? ", norm 3 and depth N+2 throughout" : ", norm/depth mismatch");
        return Outcome{ok, detail};
    });

    criterion(9, "derivability fixtures", 1, [&] {
        const std::vector<std::pair<std::string, std::string>> cases = {
            {"E_S", "CS"}, {"E_S", "CSP1"}, {"E_S", "CSP2"}, {"E_F", "FT"},
            {"E_F", "RS"}, {"E_T", "CT"},   {"E_T", "CTP"},
        };
        std::size_t accepted = 0;
        std::string detail;
        for (const auto& [system, schema] : cases) {
            ProofScript ps = proof_from_json(read_json_file(std::string(BCCSP_DATA_DIR) + "/proofs/" + system + "_" + schema + ".json"));
            AxiomSystem sys = build_system(system, ps.alphabet, IL);
            ProofCheck c = check_proof(ps, sys);
            if (c.accepted && ps.system == system) ++accepted;
            else detail += "; " + system + " " + schema + " rejected: " + c.reason;
        }
        return Outcome{accepted == cases.size(), str(accepted) + "/" + str(cases.size()) + " scripts accepted" + detail};
    });

    criterion(10, "0-stripping properties and saturation", 60, [&] {
        std::mt19937_64 rng(2024);
        GenOptions opts;
        opts.max_size = 16;
        opts.nil_weight = 3.0;
        auto acts = symbols_of(ab);
        std::size_t bad = 0;
        for (int i = 0; i < 10000; ++i) {
            Term t = random_term(rng, acts, opts);
            Term s = strip_nil(t);
            Substitution sigma;
            for (const auto& v : vars(t))
                if (rng() & 1) sigma[v] = Term::nil();
            bool ok = is_clean(s) && strip_nil(s) == s &&
                      strip_nil(substitute(s, sigma)) == strip_nil(substitute(t, sigma));
            bad += !ok;
        }
        auto sat = saturate(build_system("E_S", ab));
        auto twice = saturate(sat);
        std::set<std::pair<Term, Term>> a, b;
        for (const auto& e : sat.equations) a.insert({e.lhs, e.rhs});
        for (const auto& e : twice.equations) b.insert({e.lhs, e.rhs});
        return Outcome{bad == 0 && a == b, str(bad) + " of 10000 terms violate a property, saturation of E_S " +
                                               (a == b ? "idempotent" : "not idempotent") + " (" + str(a.size()) +
                                               " equations)"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

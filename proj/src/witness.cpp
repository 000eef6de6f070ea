#include "bccsp/witness.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace bccsp {

std::string to_string(WitnessKind k) { return k == WitnessKind::Sync ? "sync" : "interleaving"; }

WitnessKind parse_witness_kind(const std::string& s) {
    if (s == "interleaving") return WitnessKind::Interleaving;
    if (s == "sync") return WitnessKind::Sync;
    throw std::invalid_argument("unknown witness kind '" + s + "' (expected interleaving or sync)");
}

Term iterate_prefix(Symbol b, unsigned i, Symbol a) {
    Term t = Term::prefix(a, Term::nil());
    for (unsigned k = 0; k < i; ++k) t = Term::prefix(b, t);
    return t;
}

WitnessFamily make_family(WitnessKind kind, unsigned n, const Alphabet& alphabet) {
    if (n < 1) throw std::invalid_argument("witness index must be at least 1");
    auto visible = alphabet.visible_actions();
    Symbol a, b;
    if (kind == WitnessKind::Interleaving) {
        if (alphabet.sync_mode()) throw AlphabetError("the interleaving family needs an interleaving alphabet");
        // With one action the question is open; no family is known to work there.
        if (visible.size() < 2) throw AlphabetError("the interleaving family needs two distinct actions");
        a = alphabet.symbol(visible[0]);
        b = alphabet.symbol(visible[1]);
    } else {
        if (!alphabet.sync_mode()) throw AlphabetError("the synchronising family needs an alphabet with tau");
        a = alphabet.symbol(visible[0]);
        b = alphabet.symbol(alphabet.tau());
    }
    WitnessFamily f;
    f.kind = kind;
    f.n = n;
    f.alphabet = alphabet;
    std::vector<Term> ps, rhs;
    for (unsigned i = 1; i <= n; ++i) ps.push_back(iterate_prefix(b, i, a));
    f.p = Term::sum_of(ps);
    Term atom = Term::prefix(a, Term::nil());
    f.target = Term::par(atom, f.p);
    rhs.push_back(Term::prefix(a, f.p));
    for (unsigned i = 1; i <= n; ++i) rhs.push_back(Term::prefix(b, Term::par(atom, iterate_prefix(b, i - 1, a))));
    f.e = {(kind == WitnessKind::Sync ? "ec" : "e") + std::to_string(n), f.target, Term::sum_of(rhs), ""};
    return f;
}

WitnessFamily make_family(WitnessKind kind, unsigned n) {
    return make_family(kind, n,
                       kind == WitnessKind::Sync ? Alphabet::sync({"a", "b"}) : Alphabet::interleaving({"a", "b"}));
}

bool has_summand_equiv(Checker& c, const Term& p, const Term& target, const Relation& rel) {
    require_closed(p);
    require_closed(target);
    NodeId t = c.node(target);
    for (const Term& s : summands(strip_nil(p)))
        if (c.equivalent(c.node(s), t, rel)) return true;
    return false;
}

bool has_summand_equiv(const Term& p, const Term& target, const Relation& rel, const Alphabet& alphabet,
                       TransitionMode mode) {
    Checker c(alphabet, mode);
    return has_summand_equiv(c, p, target, rel);
}

namespace {

bool has_tau_step(const Term& p, const Alphabet& al) {
    Lts l = build_lts(p, al, TransitionMode::CcsSync);
    Symbol tau = al.symbol(al.tau());
    for (const auto& [from, a, to] : l.transitions)
        if (a == tau) return true;
    return false;
}

// The characterisation of terms PF-equivalent to p_N, checked on sums of
// subsets of a fixed pool of clean summands.
std::pair<bool, std::size_t> check_characterisation(Checker& c, const WitnessFamily& f) {
    const Relation pf = Relation::of(RelKind::PF);
    Symbol a = f.target.left().action();
    Symbol b = summands(f.p).front().action();
    std::vector<Term> basis;
    for (unsigned i = 1; i <= f.n; ++i) basis.push_back(iterate_prefix(b, i, a));
    std::vector<Term> pool = basis;
    pool.push_back(iterate_prefix(b, f.n + 1, a));
    pool.push_back(Term::prefix(b, Term::nil()));
    pool.push_back(Term::prefix(b, Term::prefix(a, Term::prefix(a, Term::nil()))));
    pool.push_back(Term::prefix(b, Term::sum(Term::prefix(a, Term::nil()), Term::prefix(b, Term::prefix(a, Term::nil())))));
    // A summand that is not syntactically b^i a but is bisimilar to b.a.
    pool.push_back(Term::prefix(b, Term::par(Term::prefix(a, Term::nil()), Term::prefix(a, Term::nil()))));
    pool.push_back(Term::prefix(b, Term::sum(Term::prefix(a, Term::nil()), Term::prefix(a, Term::nil()))));

    NodeId pn = c.node(f.p);
    std::vector<std::vector<bool>> matches(pool.size(), std::vector<bool>(basis.size()));
    for (std::size_t j = 0; j < pool.size(); ++j)
        for (std::size_t i = 0; i < basis.size(); ++i)
            matches[j][i] = c.equivalent(c.node(pool[j]), c.node(basis[i]), pf);

    std::size_t cases = 0;
    const std::size_t limit = std::size_t{1} << pool.size();
    for (std::size_t mask = 1; mask < limit; ++mask) {
        std::vector<Term> parts;
        std::vector<bool> covered(basis.size(), false);
        bool each_matches = true;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (!(mask >> j & 1)) continue;
            parts.push_back(pool[j]);
            bool any = false;
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (matches[j][i]) covered[i] = any = true;
            each_matches = each_matches && any;
        }
        bool predicted = each_matches && std::all_of(covered.begin(), covered.end(), [](bool x) { return x; });
        bool actual = c.equivalent(c.node(Term::sum_of(parts)), pn, pf);
        ++cases;
        if (predicted != actual) return {false, cases};
    }
    return {true, cases};
}

EvidenceRow evidence_row(const WitnessFamily& f) {
    Checker c(f.alphabet, f.mode());
    const Relation pf = Relation::of(RelKind::PF);
    EvidenceRow r;
    r.n = f.n;
    r.bisimilar = c.equivalent(c.node(f.e.lhs), c.node(f.e.rhs), Relation::of(RelKind::B));
    r.lhs_has_witness = has_summand_equiv(c, f.e.lhs, f.target, pf);
    r.rhs_has_witness = has_summand_equiv(c, f.e.rhs, f.target, pf);
    r.norm = norm(f.target);
    r.depth = depth(f.target);
    std::tie(r.characterisation, r.characterisation_cases) = check_characterisation(c, f);
    if (f.kind == WitnessKind::Sync) r.tau_steps = has_tau_step(f.e.lhs, f.alphabet) && has_tau_step(f.e.rhs, f.alphabet);
    return r;
}

std::string first_failure(const EvidenceRow& r, WitnessKind kind) {
    if (!r.bisimilar) return "bisimilar";
    if (!r.lhs_has_witness) return "lhs-witness";
    if (r.rhs_has_witness) return "rhs-no-witness";
    if (r.norm != 3) return "norm";
    if (r.depth != r.n + 2) return "depth";
    if (!r.characterisation) return "characterisation";
    if (kind == WitnessKind::Sync && !r.tau_steps) return "tau-steps";
    return "";
}

}  // namespace

EvidenceReport negative_evidence_report(WitnessKind kind, unsigned n_max, const Alphabet& alphabet) {
    if (n_max < 1) throw std::invalid_argument("N_max must be at least 1");
    std::vector<WitnessFamily> fams;
    for (unsigned n = 1; n <= n_max; ++n) fams.push_back(make_family(kind, n, alphabet));
    std::vector<EvidenceRow> rows(n_max);
#pragma omp parallel for schedule(dynamic)
    for (unsigned i = 0; i < n_max; ++i) rows[i] = evidence_row(fams[i]);

    EvidenceReport rep;
    rep.kind = kind;
    rep.n_max = n_max;
    rep.passed = true;
    for (const auto& r : rows) {
        rep.rows.push_back(r);
        std::string bad = first_failure(r, kind);
        if (!bad.empty()) {
            rep.passed = false;
            rep.failed_n = r.n;
            rep.failed_check = bad;
            break;
        }
    }
    return rep;
}

EvidenceReport negative_evidence_report(WitnessKind kind, unsigned n_max) {
    return negative_evidence_report(
        kind, n_max, kind == WitnessKind::Sync ? Alphabet::sync({"a", "b"}) : Alphabet::interleaving({"a", "b"}));
}

SummandWalk check_summand_property(const ProofScript& script, const AxiomSystem& system, const Term& target) {
    ProofCheck pc = check_proof(script, system);
    if (!pc.accepted) throw std::invalid_argument("proof is not accepted: " + pc.reason);
    Checker c(system.alphabet, system.mode);
    const Relation pf = Relation::of(RelKind::PF);
    NodeId t = c.node(target);
    SummandWalk w;
    w.steps = pc.conclusions.size();
    for (std::size_t i = 0; i < pc.conclusions.size(); ++i) {
        const auto& [l, r] = pc.conclusions[i];
        if (!vars(l).empty() || !vars(r).empty()) continue;
        Term sl = strip_nil(l), sr = strip_nil(r);
        if (!c.equivalent(c.node(sl), t, pf) || !c.equivalent(c.node(sr), t, pf)) continue;
        ++w.checked;
        if (has_summand_equiv(c, sl, target, pf) != has_summand_equiv(c, sr, target, pf)) {
            w.holds = false;
            w.failed_step = i;
            return w;
        }
    }
    return w;
}

}  // namespace bccsp

#include "bccsp/sweeps.hpp"

#include <omp.h>

#include "bccsp/term_gen.hpp"

namespace bccsp {

namespace {

struct SpectrumRow {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    std::vector<std::string> messages;
};

// Compares terms[i] with every later term, skipping pairs that share a node.
SpectrumRow spectrum_row(Checker& c, const std::vector<Term>& terms, const std::vector<NodeId>& nodes, std::size_t i,
                         unsigned nested_max) {
    static const Relation t = Relation::of(RelKind::T), pf = Relation::of(RelKind::PF), s = Relation::of(RelKind::S);
    static const Relation nt1 = Relation::of(RelKind::NestedT, 1), nt2 = Relation::of(RelKind::NestedT, 2),
                          ns1 = Relation::of(RelKind::NestedS, 1);
    SpectrumRow row;
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
        if (nodes[i] == nodes[j]) continue;
        ++row.pairs;
        auto fail = [&](const std::string& what) {
            ++row.violations;
            row.messages.push_back(render(terms[i]) + " vs " + render(terms[j]) + ": " + what);
        };
        SpectrumVector v;
        try {
            v = spectrum_vector(c, nodes[i], nodes[j], nested_max);
        } catch (const InternalError& e) {
            fail(e.what());
            continue;
        }
        if (v.at(nt1) != v.at(t)) fail("NT1 differs from T");
        if (nested_max >= 2 && v.at(nt2) != v.at(pf)) fail("NT2 differs from PF");
        if (v.at(ns1) != v.at(s)) fail("NS1 differs from S");
    }
    return row;
}

SpectrumSweep spectrum_sweep(const Alphabet& alphabet, std::uint32_t max_size, unsigned nested_max, bool parallel,
                             int threads) {
    auto terms = closed_terms_up_to(symbols_of(alphabet), max_size);
    SpectrumSweep out;
    out.terms = terms.size();
    out.pairs = terms.size() * (terms.size() - 1) / 2;
    std::vector<SpectrumRow> rows(terms.size());
    auto work = [&](Checker& c, std::size_t i, std::vector<NodeId>& nodes) {
        rows[i] = spectrum_row(c, terms, nodes, i, nested_max);
    };
    const TransitionMode mode = alphabet.sync_mode() ? TransitionMode::CcsSync : TransitionMode::Interleaving;
    auto make_nodes = [&](Checker& c) {
        std::vector<NodeId> nodes;
        for (const auto& t : terms) nodes.push_back(c.node(t));
        return nodes;
    };
    if (!parallel) {
        Checker c(alphabet, mode);
        auto nodes = make_nodes(c);
        for (std::size_t i = 0; i < terms.size(); ++i) work(c, i, nodes);
    } else {
        if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel
        {
            Checker c(alphabet, mode);
            auto nodes = make_nodes(c);
#pragma omp for schedule(dynamic)
            for (std::size_t i = 0; i < terms.size(); ++i) work(c, i, nodes);
        }
    }
    for (auto& r : rows) {
        out.node_pairs += r.pairs;
        out.violations += r.violations;
        for (auto& m : r.messages) out.messages.push_back(std::move(m));
    }
    return out;
}

std::vector<std::pair<const AxiomSystem*, const Equation*>> flatten(const std::vector<AxiomSystem>& systems,
                                                                     std::size_t stride) {
    std::vector<std::pair<const AxiomSystem*, const Equation*>> jobs;
    for (const auto& s : systems)
        for (std::size_t k = 0; k < s.equations.size(); k += std::max<std::size_t>(stride, 1))
            jobs.push_back({&s, &s.equations[k]});
    return jobs;
}

SoundnessEntry sound_entry(Checker& c, const AxiomSystem& s, const Equation& e, const SubstitutionScheme& scheme) {
    SoundResult r = check_sound(c, e, s.relation(), scheme);
    SoundnessEntry out;
    out.system = s.name;
    out.equation = e.id;
    out.refuted = !r.sound;
    out.tried = r.tried;
    if (r.witness) out.witness = render_substitution(r.witness->sigma);
    return out;
}

SoundnessSweep soundness_sweep(const std::vector<std::string>& names, const Alphabet& alphabet, TransitionMode mode,
                               std::size_t stride, bool parallel, int threads) {
    std::vector<AxiomSystem> systems;
    for (const auto& n : names) systems.push_back(build_system(n, alphabet, mode));
    auto jobs = flatten(systems, stride);
    SubstitutionScheme scheme = default_scheme(alphabet);
    SoundnessSweep out;
    out.entries.resize(jobs.size());
    if (!parallel) {
        Checker c(alphabet, mode);
        for (std::size_t k = 0; k < jobs.size(); ++k)
            out.entries[k] = sound_entry(c, *jobs[k].first, *jobs[k].second, scheme);
    } else {
        if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel
        {
            Checker c(alphabet, mode);
#pragma omp for schedule(dynamic)
            for (std::size_t k = 0; k < jobs.size(); ++k)
                out.entries[k] = sound_entry(c, *jobs[k].first, *jobs[k].second, scheme);
        }
    }
    return out;
}

struct ElimRow {
    bool par_free = true;
    bool equivalent = true;
    bool proof_checked = false;
    bool proof_ok = true;
    std::string message;
};

ElimRow elim_row(Checker& c, const AxiomSystem& sys, const Term& t, bool with_proof) {
    ElimRow row;
    EliminationResult r = eliminate(t, sys, with_proof);
    row.par_free = r.result.par_free();
    row.equivalent = c.equivalent(c.node(t), c.node(r.result), sys.relation());
    if (with_proof) {
        row.proof_checked = true;
        ProofCheck pc = check_proof(*r.proof, sys);
        row.proof_ok = pc.accepted && r.proof->goal_lhs == t && r.proof->goal_rhs == r.result;
    }
    if (!row.par_free || !row.equivalent || !row.proof_ok)
        row.message = sys.name + ": " + render(t) + " -> " + render(r.result);
    return row;
}

EliminationSweep elimination_sweep(const std::vector<std::string>& names, const Alphabet& alphabet,
                                   TransitionMode mode, std::uint32_t max_size, std::size_t proof_stride,
                                   bool parallel, int threads) {
    std::vector<AxiomSystem> systems;
    for (const auto& n : names) systems.push_back(build_system(n, alphabet, mode));
    auto terms = closed_terms_up_to(symbols_of(alphabet, mode == TransitionMode::CcsSync), max_size);
    const std::size_t total = systems.size() * terms.size();
    std::vector<ElimRow> rows(total);
    auto work = [&](Checker& c, std::size_t k) {
        std::size_t s = k / terms.size(), i = k % terms.size();
        bool proof = proof_stride > 0 && i % proof_stride == 0;
        rows[k] = elim_row(c, systems[s], terms[i], proof);
    };
    if (!parallel) {
        Checker c(alphabet, mode);
        for (std::size_t k = 0; k < total; ++k) work(c, k);
    } else {
        if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel
        {
            Checker c(alphabet, mode);
#pragma omp for schedule(dynamic, 16)
            for (std::size_t k = 0; k < total; ++k) work(c, k);
        }
    }
    EliminationSweep out;
    out.runs = total;
    for (auto& r : rows) {
        out.not_par_free += !r.par_free;
        out.not_equivalent += !r.equivalent;
        out.proofs_checked += r.proof_checked;
        out.proofs_rejected += r.proof_checked && !r.proof_ok;
        if (!r.message.empty()) out.messages.push_back(std::move(r.message));
    }
    return out;
}

}  // namespace

std::size_t SoundnessSweep::refutations() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.refuted;
    return n;
}

SpectrumSweep spectrum_sweep_serial(const Alphabet& alphabet, std::uint32_t max_size, unsigned nested_max) {
    return spectrum_sweep(alphabet, max_size, nested_max, false, 0);
}

SpectrumSweep spectrum_sweep_parallel(const Alphabet& alphabet, std::uint32_t max_size, unsigned nested_max,
                                      int threads) {
    return spectrum_sweep(alphabet, max_size, nested_max, true, threads);
}

SoundnessSweep soundness_sweep_serial(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                      TransitionMode mode, std::size_t stride) {
    return soundness_sweep(systems, alphabet, mode, stride, false, 0);
}

SoundnessSweep soundness_sweep_parallel(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                        TransitionMode mode, std::size_t stride, int threads) {
    return soundness_sweep(systems, alphabet, mode, stride, true, threads);
}

EliminationSweep elimination_sweep_serial(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                          TransitionMode mode, std::uint32_t max_size, std::size_t proof_stride) {
    return elimination_sweep(systems, alphabet, mode, max_size, proof_stride, false, 0);
}

EliminationSweep elimination_sweep_parallel(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                            TransitionMode mode, std::uint32_t max_size, std::size_t proof_stride,
                                            int threads) {
    return elimination_sweep(systems, alphabet, mode, max_size, proof_stride, true, threads);
}

}  // namespace bccsp

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bccsp/eliminate.hpp"

namespace bccsp {

// Each sweep has a serial reference version and an OpenMP version that must
// produce identical results; `threads` = 0 uses the OpenMP default.

struct SpectrumSweep {
    std::size_t terms = 0;
    std::size_t pairs = 0;        // pairs of distinct terms
    std::size_t node_pairs = 0;   // pairs actually checked (bisimilar terms share a node)
    std::size_t violations = 0;   // arrow violations and nested/direct mismatches
    std::vector<std::string> messages;
    bool operator==(const SpectrumSweep& o) const {
        return terms == o.terms && pairs == o.pairs && node_pairs == o.node_pairs && violations == o.violations;
    }
};

SpectrumSweep spectrum_sweep_serial(const Alphabet& alphabet, std::uint32_t max_size, unsigned nested_max = 3);
SpectrumSweep spectrum_sweep_parallel(const Alphabet& alphabet, std::uint32_t max_size, unsigned nested_max = 3,
                                      int threads = 0);

struct SoundnessEntry {
    std::string system;
    std::string equation;
    bool refuted = false;
    std::string witness;  // rendered substitution when refuted
    std::size_t tried = 0;
    bool operator==(const SoundnessEntry& o) const {
        return system == o.system && equation == o.equation && refuted == o.refuted && tried == o.tried;
    }
};

struct SoundnessSweep {
    std::vector<SoundnessEntry> entries;
    std::size_t refutations() const;
};

// Every equation of every named system under the system's relation. `stride`
// > 1 keeps only every stride-th equation of each system.
SoundnessSweep soundness_sweep_serial(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                      TransitionMode mode, std::size_t stride = 1);
SoundnessSweep soundness_sweep_parallel(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                        TransitionMode mode, std::size_t stride = 1, int threads = 0);

struct EliminationSweep {
    std::size_t runs = 0;
    std::size_t not_par_free = 0;
    std::size_t not_equivalent = 0;
    std::size_t proofs_checked = 0;
    std::size_t proofs_rejected = 0;
    std::vector<std::string> messages;
    bool ok() const { return not_par_free == 0 && not_equivalent == 0 && proofs_rejected == 0; }
    bool operator==(const EliminationSweep& o) const {
        return runs == o.runs && not_par_free == o.not_par_free && not_equivalent == o.not_equivalent &&
               proofs_checked == o.proofs_checked && proofs_rejected == o.proofs_rejected;
    }
};

// Eliminates every closed term up to max_size under every system; every
// proof_stride-th term (per system) also gets its proof checked.
EliminationSweep elimination_sweep_serial(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                          TransitionMode mode, std::uint32_t max_size, std::size_t proof_stride = 0);
EliminationSweep elimination_sweep_parallel(const std::vector<std::string>& systems, const Alphabet& alphabet,
                                            TransitionMode mode, std::uint32_t max_size, std::size_t proof_stride = 0,
                                            int threads = 0);

}  // namespace bccsp

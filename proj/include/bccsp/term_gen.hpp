#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bccsp/term.hpp"

namespace bccsp {

// Every closed term over the given actions with exactly `size` symbols
// (0 counts as a symbol).
std::vector<Term> closed_terms_of_size(const std::vector<Symbol>& actions, std::uint32_t size);
// All closed terms with at most `max_size` symbols, smallest first.
std::vector<Term> closed_terms_up_to(const std::vector<Symbol>& actions, std::uint32_t max_size);

struct GenOptions {
    std::uint32_t max_size = 12;
    bool allow_par = true;
    bool allow_vars = true;
    std::vector<std::string> var_names = {"x", "y", "z", "u", "v", "w"};
    // Probability weight of producing a 0 leaf relative to other leaves.
    double nil_weight = 1.0;
};

// Random term with at most opts.max_size symbols.
Term random_term(std::mt19937_64& rng, const std::vector<Symbol>& actions, const GenOptions& opts);

std::vector<Symbol> symbols_of(const Alphabet& alphabet, bool include_tau = false);

}  // namespace bccsp

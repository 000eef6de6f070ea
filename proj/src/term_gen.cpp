#include "bccsp/term_gen.hpp"

#include <map>

namespace bccsp {

namespace {

const std::vector<Term>& sized(const std::vector<Symbol>& actions, std::uint32_t size,
                               std::map<std::uint32_t, std::vector<Term>>& memo) {
    auto it = memo.find(size);
    if (it != memo.end()) return it->second;
    std::vector<Term> out;
    if (size == 1) {
        out.push_back(Term::nil());
    } else if (size > 1) {
        for (Symbol a : actions)
            for (const Term& t : sized(actions, size - 1, memo)) out.push_back(Term::prefix(a, t));
        for (std::uint32_t ls = 1; ls + 1 < size; ++ls) {
            std::uint32_t rs = size - 1 - ls;
            const auto& L = sized(actions, ls, memo);
            const auto& R = sized(actions, rs, memo);
            for (const Term& l : L)
                for (const Term& r : R) out.push_back(Term::sum(l, r));
            for (const Term& l : L)
                for (const Term& r : R) out.push_back(Term::par(l, r));
        }
    }
    return memo.emplace(size, std::move(out)).first->second;
}

}  // namespace

std::vector<Term> closed_terms_of_size(const std::vector<Symbol>& actions, std::uint32_t size) {
    std::map<std::uint32_t, std::vector<Term>> memo;
    return sized(actions, size, memo);
}

std::vector<Term> closed_terms_up_to(const std::vector<Symbol>& actions, std::uint32_t max_size) {
    std::map<std::uint32_t, std::vector<Term>> memo;
    std::vector<Term> out;
    for (std::uint32_t s = 1; s <= max_size; ++s) {
        const auto& v = sized(actions, s, memo);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

Term random_term(std::mt19937_64& rng, const std::vector<Symbol>& actions, const GenOptions& opts) {
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto leaf = [&]() -> Term {
        bool can_var = opts.allow_vars && !opts.var_names.empty();
        if (!can_var) return Term::nil();
        std::bernoulli_distribution nil_coin(opts.nil_weight / (opts.nil_weight + 1.0));
        if (nil_coin(rng)) return Term::nil();
        return Term::var(opts.var_names[pick(opts.var_names.size())]);
    };
    // Builds a term using at most `budget` symbols.
    auto build = [&](auto& self, std::uint32_t budget) -> Term {
        if (budget <= 1) return leaf();
        std::size_t choice = pick(opts.allow_par ? 5 : 4);
        if (choice == 0) return leaf();
        if (choice == 1 || budget < 3) return Term::prefix(actions[pick(actions.size())], self(self, budget - 1));
        std::uint32_t ls = 1 + static_cast<std::uint32_t>(pick(budget - 2));
        Term l = self(self, ls);
        Term r = self(self, budget - 1 - ls);
        if (choice == 4) return Term::par(l, r);
        if (choice == 2 && pick(2) == 0) return Term::prefix(actions[pick(actions.size())], Term::sum(l, r));
        return Term::sum(l, r);
    };
    std::uint32_t budget = 1 + static_cast<std::uint32_t>(pick(opts.max_size));
    return build(build, budget);
}

std::vector<Symbol> symbols_of(const Alphabet& alphabet, bool include_tau) {
    std::vector<Symbol> out;
    for (ActionId a : include_tau ? alphabet.all_actions() : alphabet.visible_actions()) out.push_back(alphabet.symbol(a));
    return out;
}

}  // namespace bccsp

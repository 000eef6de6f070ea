#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bccsp/axioms.hpp"

namespace bccsp {

enum class Rule { Refl, Sym, Trans, Subst, CongPrefix, CongSum, CongPar, Axiom };

std::string to_string(Rule r);
Rule parse_rule(const std::string& s);

struct ProofStep {
    Rule rule = Rule::Refl;
    std::vector<std::size_t> premises;
    std::string axiom;
    Substitution subst;
    // Axiom steps may rewrite inside a context: subterm(context, path) must be
    // the instantiated left-hand side.
    std::optional<Term> context;
    Path path;
    Symbol action = 0;
    std::optional<Term> term;  // refl
    // Optional claimed conclusion, checked against the computed one.
    std::optional<Term> lhs, rhs;
};

struct ProofScript {
    std::string system;
    Alphabet alphabet = Alphabet::interleaving({"a", "b"});
    Term goal_lhs, goal_rhs;
    std::vector<ProofStep> steps;
};

struct ProofCheck {
    bool accepted = false;
    std::size_t failed_step = 0;
    std::string reason;
    std::vector<std::pair<Term, Term>> conclusions;
};

// Conclusion of a single step given earlier conclusions; throws std::invalid_argument
// with a human-readable reason when the step does not apply.
std::pair<Term, Term> step_conclusion(const ProofStep& s, const std::vector<std::pair<Term, Term>>& earlier,
                                      const AxiomSystem& system);

ProofCheck check_proof(const ProofScript& ps, const AxiomSystem& system);

// Builds a step-by-step script, checking each step as it is added.
class ProofBuilder {
public:
    explicit ProofBuilder(const AxiomSystem& system) : system_(&system) {}

    const AxiomSystem& system() const { return *system_; }
    std::size_t add(ProofStep s);
    const std::pair<Term, Term>& conclusion(std::size_t i) const { return conclusions_.at(i); }
    std::size_t size() const { return steps_.size(); }

    std::size_t refl(const Term& t);
    std::size_t sym(std::size_t i);
    std::size_t trans(std::size_t i, std::size_t j);
    std::size_t subst(std::size_t i, const Substitution& s);
    std::size_t cong_prefix(Symbol a, std::size_t i);
    std::size_t cong_sum(std::size_t i, std::size_t j);
    std::size_t cong_par(std::size_t i, std::size_t j);
    std::size_t axiom(const std::string& id, const Substitution& s);
    std::size_t axiom_at(const std::string& id, const Substitution& s, const Term& context, const Path& path);
    // From step i proving t = u with subterm(context, path) == t, derive
    // context = context[path <- u] by congruence.
    std::size_t lift(std::size_t i, const Term& context, const Path& path);

    ProofScript script(const Term& goal_lhs, const Term& goal_rhs) const;
    // Keeps only the steps the given one depends on, renumbered.
    ProofScript script_for(std::size_t last) const;

private:
    const AxiomSystem* system_;
    std::vector<ProofStep> steps_;
    std::vector<std::pair<Term, Term>> conclusions_;
};

// Rewrites a term one step at a time, collecting a proof of start = current
// when a builder is attached. Without a builder only the terms are computed.
class Chain {
public:
    Chain(ProofBuilder* builder, Term start);

    const Term& start() const { return start_; }
    const Term& current() const { return current_; }
    ProofBuilder* builder() const { return builder_; }
    bool recording() const { return builder_ != nullptr; }

    // Applies `eq` (lhs -> rhs, or rhs -> lhs when reversed) under sigma at path.
    // `lemma` is the step proving eq when it is not an axiom of the system.
    void rewrite(const Equation& eq, const Substitution& sigma, const Path& path, bool reverse = false,
                 std::optional<std::size_t> lemma = std::nullopt);
    void rewrite(const std::string& axiom_id, const Substitution& sigma, const Path& path, bool reverse = false);
    // Appends a proven equation whose left side is the current term.
    void then(std::size_t step);
    // Replaces the subterm at path by an AC-equal target (axioms A0-A3, P0, P1).
    void ac_at(const Path& path, const Term& target);
    void ac_to(const Term& target) { ac_at({}, target); }
    // Normalises the subterm at path.
    void normalise_at(const Path& path);

    // Step proving start = current (a refl step when nothing happened).
    std::size_t proof();
    std::size_t steps_taken() const { return count_; }

private:
    void push(std::size_t step, const Term& next);
    void merge(const Path& p);
    void insert(const Path& p);

    ProofBuilder* builder_;
    Term start_;
    Term current_;
    std::optional<std::size_t> proof_;
    std::size_t count_ = 0;
};

// AC normal form without proof: sums right-associated, sorted, duplicate
// free and 0-free; 0 factors removed; parallel operands ordered.
Term ac_normal_form(const Term& t);

}  // namespace bccsp

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bccsp/observations.hpp"
#include "bccsp/process_store.hpp"

namespace bccsp {

enum class RelKind { T, CT, F, R, FT, RT, S, CS, RS, PF, B, NestedT, NestedS };

struct Relation {
    RelKind kind = RelKind::T;
    unsigned n = 0;  // only for nested relations

    static Relation of(RelKind k, unsigned n = 0) { return Relation{k, n}; }
    // Accepts T, CT, F, R, FT, RT, S, CS, RS, PF, B, NT<n>, NS<n>.
    static Relation parse(const std::string& name);
    std::string name() const;

    bool operator==(const Relation& o) const { return kind == o.kind && n == o.n; }
    bool operator!=(const Relation& o) const { return !(*this == o); }
    bool operator<(const Relation& o) const { return kind != o.kind ? kind < o.kind : n < o.n; }
};

enum class SimFlavor { S, CS, RS };

// Relation engine over a process store. Results are memoised per node pair,
// so reusing one checker across many queries is much cheaper than building
// a fresh one each time.
class Checker {
public:
    Checker(Alphabet alphabet, TransitionMode mode);
    Checker(const Checker&) = delete;
    Checker& operator=(const Checker&) = delete;

    ProcessStore& store() { return store_; }
    const Alphabet& alphabet() const { return store_.alphabet(); }
    TransitionMode mode() const { return store_.mode(); }

    NodeId node(const Term& closed) { return store_.of(closed); }

    bool equivalent(NodeId p, NodeId q, const Relation& rel);
    bool preorder(NodeId p, NodeId q, SimFlavor f);
    // Simulation whose related pairs must also agree on refusals.
    bool failure_sim(NodeId p, NodeId q);
    bool nested_sim(NodeId p, NodeId q, unsigned n);
    // Class identifier: equal ids iff the nodes are related by `rel`
    // (decorated-trace relations and NestedT only).
    int class_id(NodeId p, const Relation& rel);

    // Drops all memoised data; node ids handed out earlier become invalid.
    void reset();

private:
    struct Impl;
    ProcessStore store_;
    std::shared_ptr<Impl> impl_;
};

bool decorated_eq(const Term& p, const Term& q, ObsKind kind, const Alphabet& alphabet, TransitionMode mode);
// T and CT are trace and completed-trace equality.
bool trace_eq(const Term& p, const Term& q, bool completed, const Alphabet& alphabet, TransitionMode mode);
bool simulation_preorder(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode);
bool sim_eq(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode);
bool bisimilar(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode);
bool nested_trace_eq(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode);
bool nested_sim_preorder(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode);
bool equivalent(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode);

// The straightforward algorithms on raw-term transition systems. They are
// slow and serve as the oracle for the checker above.
namespace reference {
bool decorated_eq(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode);
bool simulation_preorder(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode);
bool failure_sim_preorder(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode);
bool bisimilar(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode);
bool nested_trace_eq(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode);
bool nested_sim_preorder(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode);
bool equivalent(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode);
}  // namespace reference

// ---------------------------------------------------------------- spectrum

// Every relation evaluated by spectrum_vector for nesting depth up to n.
std::vector<Relation> spectrum_relations(unsigned nested_max);
// Implication arrows finer -> coarser.
std::vector<std::pair<Relation, Relation>> spectrum_arrows(unsigned nested_max);

using SpectrumVector = std::map<Relation, bool>;

SpectrumVector spectrum_vector(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode,
                               unsigned nested_max = 3);
SpectrumVector spectrum_vector(Checker& c, NodeId p, NodeId q, unsigned nested_max = 3);
// Throws InternalError naming the first violated arrow.
void check_spectrum_consistency(const SpectrumVector& v, unsigned nested_max);

// ---------------------------------------------------------------- open terms

struct SubstitutionScheme {
    std::vector<Term> pool;
    // Adds a^(D+i).0 for the i-th variable, D = 1 + max depth of both sides.
    bool deep_tags = true;
    Symbol tag_action = 0;
};

SubstitutionScheme default_scheme(const Alphabet& alphabet);

struct Refutation {
    Substitution sigma;
    Term lhs;
    Term rhs;
};

struct RefuteResult {
    std::optional<Refutation> witness;  // empty: not refuted within the scheme
    std::size_t tried = 0;
    bool refuted() const { return witness.has_value(); }
};

RefuteResult refute_open(const Term& t, const Term& u, const Relation& rel, const Alphabet& alphabet,
                         TransitionMode mode, const SubstitutionScheme& scheme);
RefuteResult refute_open(Checker& c, const Term& t, const Term& u, const Relation& rel,
                         const SubstitutionScheme& scheme);

}  // namespace bccsp

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bccsp/errors.hpp"

namespace bccsp {

// Action names are interned process-wide so that terms can be printed and
// compared without carrying an alphabet around.
using Symbol = std::uint16_t;

Symbol intern_action(std::string_view name);
const std::string& action_name(Symbol s);

// Local action index inside an Alphabet; sets of these fit in a bitmask.
using ActionId = std::uint8_t;
using ActionSet = std::uint32_t;

class Alphabet {
public:
    static Alphabet interleaving(const std::vector<std::string>& names);
    // Base names get complements "name'" and the silent action tau is added.
    static Alphabet sync(const std::vector<std::string>& base_names);
    static Alphabet parse_list(std::string_view comma_separated, bool sync);

    bool sync_mode() const { return sync_; }
    // Visible actions (tau excluded).
    std::size_t size() const { return visible_; }
    // Visible actions plus tau in sync mode.
    std::size_t universe() const { return symbols_.size(); }
    ActionSet all() const { return universe() == 32 ? ~ActionSet{0} : ((ActionSet{1} << universe()) - 1); }

    Symbol symbol(ActionId id) const { return symbols_.at(id); }
    const std::string& name(ActionId id) const { return action_name(symbols_.at(id)); }
    std::optional<ActionId> index_of(Symbol s) const;
    bool contains(Symbol s) const { return index_of(s).has_value(); }

    ActionId tau() const;
    ActionId complement(ActionId id) const;
    bool is_tau(ActionId id) const { return sync_ && id == visible_; }

    // The base actions the user named (no complements, no tau).
    const std::vector<ActionId>& primary() const { return primary_; }
    std::vector<ActionId> visible_actions() const;
    std::vector<ActionId> all_actions() const;

    std::string describe() const;
    std::string render_set(ActionSet set) const;

    bool operator==(const Alphabet& other) const {
        return symbols_ == other.symbols_ && sync_ == other.sync_;
    }

private:
    std::vector<Symbol> symbols_;
    std::vector<ActionId> complement_;
    std::vector<ActionId> primary_;
    std::size_t visible_ = 0;
    bool sync_ = false;
};

enum class Kind : std::uint8_t { Nil, Var, Prefix, Sum, Par };

class Term {
public:
    Term();

    static Term nil();
    static Term var(std::string name);
    static Term prefix(Symbol a, Term body);
    static Term prefix(std::string_view a, Term body) { return prefix(intern_action(a), std::move(body)); }
    static Term sum(Term l, Term r);
    static Term par(Term l, Term r);
    // Left-associated sum of the given terms; the empty sum is 0.
    static Term sum_of(const std::vector<Term>& ts);

    Kind kind() const { return node_->kind; }
    bool is_nil() const { return kind() == Kind::Nil; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_prefix() const { return kind() == Kind::Prefix; }
    bool is_sum() const { return kind() == Kind::Sum; }
    bool is_par() const { return kind() == Kind::Par; }

    Symbol action() const { return node_->action; }
    const std::string& var_name() const { return node_->name; }
    const Term& body() const { return *node_->left; }
    const Term& left() const { return *node_->left; }
    const Term& right() const { return *node_->right; }
    // Child by index: 0 for a prefix body, 0/1 for binary operators.
    const Term& child(std::size_t i) const;
    std::size_t arity() const;

    std::size_t hash() const { return node_->hash; }
    std::uint32_t size() const { return node_->size; }
    bool closed() const { return node_->closed; }
    bool par_free() const { return node_->par_free; }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }
    static int compare(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind = Kind::Nil;
        Symbol action = 0;
        std::string name;
        std::unique_ptr<Term> left;
        std::unique_ptr<Term> right;
        std::size_t hash = 0;
        std::uint32_t size = 1;
        bool closed = true;
        bool par_free = true;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Term make(Kind k, Symbol a, std::string name, const Term* l, const Term* r);

    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

using Substitution = std::map<std::string, Term>;
using Path = std::vector<std::size_t>;

struct ParseOptions {
    // A bare identifier naming an action is read as that action prefixed to 0.
    bool bare_actions = false;
};

Term parse(std::string_view text, const Alphabet& alphabet, ParseOptions opts = {});

// Abbreviated output drops trailing ".0" (parse with bare_actions reads it back).
std::string render(const Term& t, bool abbreviate = false);

struct Metrics {
    std::uint32_t size = 0;
    std::uint32_t depth = 0;
    std::uint32_t norm = 0;
};
Metrics metrics(const Term& t);
std::uint32_t depth(const Term& t);
std::uint32_t norm(const Term& t);

Term substitute(const Term& t, const Substitution& s);
std::set<std::string> vars(const Term& t);
bool is_closed_substitution(const Substitution& s);
bool is_nil_substitution(const Substitution& s);

// Summands in canonical order (lexicographic on rendered text), Nil leaves dropped.
std::vector<Term> summands(const Term& t);
// Summands in left-to-right syntactic order, Nil leaves dropped.
std::vector<Term> summands_in_order(const Term& t);

// Membership in the grammar NIL ::= 0 | NIL + NIL | NIL || NIL.
bool is_nil_term(const Term& t);
Term strip_nil(const Term& t);
// True if no Sum operand and no Par operand of t is in NIL.
bool is_clean(const Term& t);

// Checks that every action of t belongs to the alphabet.
void check_actions(const Term& t, const Alphabet& alphabet);
std::set<Symbol> actions_of(const Term& t);

const Term& subterm(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

std::string render_substitution(const Substitution& s);

}  // namespace bccsp

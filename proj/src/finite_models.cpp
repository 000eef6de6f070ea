#include "bccsp/finite_models.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <set>
#include <stdexcept>

#include "bccsp/derivations.hpp"

namespace bccsp {

void FiniteModel::validate() const {
    auto in_range = [&](const std::vector<Element>& row) {
        if (row.size() != carrier) throw std::invalid_argument("model table row has the wrong length");
        for (Element e : row)
            if (e >= carrier) throw std::invalid_argument("model table entry out of range");
    };
    if (carrier == 0) throw std::invalid_argument("model carrier is empty");
    if (zero >= carrier) throw std::invalid_argument("model zero out of range");
    for (const auto& [a, row] : prefix) in_range(row);
    if (plus.size() != carrier || par.size() != carrier) throw std::invalid_argument("model table has the wrong size");
    for (const auto& row : plus) in_range(row);
    for (const auto& row : par) in_range(row);
}

const FiniteModel& table6_model() {
    static const FiniteModel m = [] {
        FiniteModel m;
        m.carrier = 5;
        m.prefix["a"] = {2, 2, 3, 4, 4};
        m.prefix["b"] = {3, 2, 3, 4, 4};
        m.par = {{0, 1, 2, 3, 4}, {1, 0, 2, 1, 2}, {2, 2, 3, 4, 4}, {3, 1, 4, 4, 4}, {4, 2, 4, 4, 4}};
        m.plus = {{0, 1, 2, 3, 4}, {1, 1, 2, 3, 4}, {2, 2, 2, 4, 4}, {3, 3, 4, 3, 4}, {4, 4, 4, 4, 4}};
        return m;
    }();
    return m;
}

const FiniteModel& table7_model() {
    static const FiniteModel m = [] {
        FiniteModel m;
        m.carrier = 3;
        m.prefix["a"] = {0, 2, 2};
        m.prefix["b"] = {0, 0, 0};
        m.par = {{0, 1, 2}, {1, 0, 1}, {2, 1, 2}};
        m.plus = {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
        return m;
    }();
    return m;
}

const FiniteModel& fixture_model(const std::string& name) {
    if (name == "table6") return table6_model();
    if (name == "table7") return table7_model();
    throw std::invalid_argument("unknown model fixture '" + name + "'");
}

namespace {

enum class Op : std::uint8_t { Zero, Var, Prefix, Plus, Par };

struct Instr {
    Op op;
    std::uint16_t arg = 0;  // variable slot or action index
};

using Program = std::vector<Instr>;

struct Compiled {
    std::vector<std::string> vars;  // sorted
    Program lhs, rhs;
};

struct Compiler {
    const std::vector<std::string>& vars;
    const std::vector<std::string>& actions;

    void emit(const Term& t, Program& out) const {
        switch (t.kind()) {
            case Kind::Nil:
                out.push_back({Op::Zero});
                return;
            case Kind::Var: {
                auto it = std::lower_bound(vars.begin(), vars.end(), t.var_name());
                out.push_back({Op::Var, static_cast<std::uint16_t>(it - vars.begin())});
                return;
            }
            case Kind::Prefix: {
                emit(t.body(), out);
                auto it = std::find(actions.begin(), actions.end(), action_name(t.action()));
                if (it == actions.end())
                    throw std::invalid_argument("model has no table for action '" + action_name(t.action()) + "'");
                out.push_back({Op::Prefix, static_cast<std::uint16_t>(it - actions.begin())});
                return;
            }
            case Kind::Sum:
            case Kind::Par:
                emit(t.left(), out);
                emit(t.right(), out);
                out.push_back({t.is_sum() ? Op::Plus : Op::Par});
                return;
        }
    }
};

Compiled compile(const Equation& e, const std::vector<std::string>& actions) {
    Compiled c;
    auto vs = vars(e.lhs);
    for (const auto& v : vars(e.rhs)) vs.insert(v);
    c.vars.assign(vs.begin(), vs.end());
    Compiler k{c.vars, actions};
    k.emit(e.lhs, c.lhs);
    k.emit(e.rhs, c.rhs);
    return c;
}

std::vector<std::string> model_actions(const FiniteModel& m) {
    std::vector<std::string> out;
    for (const auto& [a, row] : m.prefix) out.push_back(a);
    return out;
}

// Evaluation over a complete model.
struct Evaluator {
    const FiniteModel& m;
    std::vector<const std::vector<Element>*> prefix;
    mutable std::vector<Element> stack;

    Evaluator(const FiniteModel& model, const std::vector<std::string>& actions) : m(model) {
        for (const auto& a : actions) prefix.push_back(&m.prefix.at(a));
    }

    Element run(const Program& p, const std::vector<Element>& slots) const {
        stack.clear();
        for (const Instr& in : p) {
            switch (in.op) {
                case Op::Zero:
                    stack.push_back(m.zero);
                    break;
                case Op::Var:
                    stack.push_back(slots[in.arg]);
                    break;
                case Op::Prefix:
                    stack.back() = (*prefix[in.arg])[stack.back()];
                    break;
                case Op::Plus:
                case Op::Par: {
                    Element r = stack.back();
                    stack.pop_back();
                    Element l = stack.back();
                    stack.back() = in.op == Op::Plus ? m.plus[l][r] : m.par[l][r];
                    break;
                }
            }
        }
        return stack.back();
    }
};

// Calls f(slots) for every valuation in lexicographic order until it returns false.
template <typename F>
void for_each_valuation(std::size_t nvars, std::size_t carrier, F&& f) {
    std::vector<Element> slots(nvars, 0);
    while (true) {
        if (!f(slots)) return;
        std::size_t i = nvars;
        while (i > 0) {
            --i;
            if (++slots[i] < carrier) break;
            slots[i] = 0;
            if (i == 0) return;
        }
        if (nvars == 0) return;
    }
}

Valuation to_valuation(const std::vector<std::string>& vars, const std::vector<Element>& slots) {
    Valuation v;
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = slots[i];
    return v;
}

}  // namespace

Element eval(const FiniteModel& m, const Term& t, const Valuation& v) {
    switch (t.kind()) {
        case Kind::Nil:
            return m.zero;
        case Kind::Var: {
            auto it = v.find(t.var_name());
            if (it == v.end()) throw std::invalid_argument("valuation has no value for variable '" + t.var_name() + "'");
            return it->second;
        }
        case Kind::Prefix: {
            auto it = m.prefix.find(action_name(t.action()));
            if (it == m.prefix.end())
                throw std::invalid_argument("model has no table for action '" + action_name(t.action()) + "'");
            return it->second.at(eval(m, t.body(), v));
        }
        case Kind::Sum:
            return m.plus.at(eval(m, t.left(), v)).at(eval(m, t.right(), v));
        case Kind::Par:
            return m.par.at(eval(m, t.left(), v)).at(eval(m, t.right(), v));
    }
    return m.zero;
}

std::vector<Valuation> failing_valuations(const FiniteModel& m, const Equation& e, std::size_t limit) {
    auto actions = model_actions(m);
    Compiled c = compile(e, actions);
    Evaluator ev(m, actions);
    std::vector<Valuation> out;
    if (limit == 0) return out;
    for_each_valuation(c.vars.size(), m.carrier, [&](const std::vector<Element>& s) {
        if (ev.run(c.lhs, s) != ev.run(c.rhs, s)) out.push_back(to_valuation(c.vars, s));
        return out.size() < limit;
    });
    return out;
}

std::size_t count_failing(const FiniteModel& m, const Equation& e) {
    auto actions = model_actions(m);
    Compiled c = compile(e, actions);
    Evaluator ev(m, actions);
    std::size_t n = 0;
    for_each_valuation(c.vars.size(), m.carrier, [&](const std::vector<Element>& s) {
        if (ev.run(c.lhs, s) != ev.run(c.rhs, s)) ++n;
        return true;
    });
    return n;
}

std::optional<Valuation> counter_valuation(const FiniteModel& m, const Equation& e) {
    auto f = failing_valuations(m, e, 1);
    if (f.empty()) return std::nullopt;
    return f.front();
}

bool holds(const FiniteModel& m, const Equation& e) { return !counter_valuation(m, e); }

Equation named_goal(const std::string& name, const Alphabet& alphabet) {
    if (name == "EL2")
        return {"EL2",
                parse("(a.x + b.y) || (a.z + b.w)", alphabet),
                parse("a.(x || (a.z + b.w)) + b.(y || (a.z + b.w)) + a.((a.x + b.y) || z) + b.((a.x + b.y) || w)",
                      alphabet),
                "EL2"};
    if (name == "RSP2" || name == "CSP2")
        return {name,
                parse("a.x || (a.y + a.z + w)", alphabet),
                parse("a.(x || (a.y + a.z + w)) + a.x || (a.y + w) + a.x || (a.z + w)", alphabet),
                name};
    if (name.find('[') != std::string::npos) {
        TransitionMode mode = alphabet.sync_mode() ? TransitionMode::CcsSync : TransitionMode::Interleaving;
        return schema_instance(name, alphabet, mode);
    }
    return parse_equation(name, alphabet);
}

IndependenceReport independence_report(const FiniteModel& m, const AxiomSystem& system, const Equation& goal) {
    IndependenceReport r;
    auto check = [&](const Equation& e) {
        AxiomCheck c;
        c.id = e.id;
        auto vs = vars(e.lhs);
        for (const auto& v : vars(e.rhs)) vs.insert(v);
        c.valuations = 1;
        for (std::size_t i = 0; i < vs.size(); ++i) c.valuations *= m.carrier;
        c.failures = count_failing(m, e);
        if (c.failures) c.counterexample = counter_valuation(m, e);
        return c;
    };
    for (const auto& e : system.equations) {
        r.axioms.push_back(check(e));
        if (r.axioms.back().failures) r.all_axioms_hold = false;
    }
    r.goal = check(goal);
    r.goal_refuted = r.goal.failures > 0;
    return r;
}

std::string to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Found:
            return "found";
        case SearchStatus::NoModel:
            return "no-model";
        case SearchStatus::BudgetExhausted:
            return "budget-exhausted";
    }
    return "?";
}

namespace {

// Axioms are reduced modulo associativity and commutativity of + and
// commutativity of ||, but only when the system itself contains those laws.
struct Laws {
    bool plus_ac = false;
    bool par_comm = false;
};

Term normal(const Term& t, const Laws& laws) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return t;
        case Kind::Prefix:
            return Term::prefix(t.action(), normal(t.body(), laws));
        case Kind::Sum: {
            if (!laws.plus_ac) return Term::sum(normal(t.left(), laws), normal(t.right(), laws));
            std::vector<Term> parts;
            std::vector<Term> todo{t};
            while (!todo.empty()) {
                Term u = todo.back();
                todo.pop_back();
                if (u.is_sum()) {
                    todo.push_back(u.left());
                    todo.push_back(u.right());
                } else {
                    parts.push_back(normal(u, laws));
                }
            }
            std::sort(parts.begin(), parts.end());
            return Term::sum_of(parts);
        }
        case Kind::Par: {
            Term l = normal(t.left(), laws), r = normal(t.right(), laws);
            if (laws.par_comm && r < l) std::swap(l, r);
            return Term::par(l, r);
        }
    }
    return t;
}

std::vector<std::string> equation_vars(const Equation& e) {
    auto vs = vars(e.lhs);
    for (const auto& v : vars(e.rhs)) vs.insert(v);
    return {vs.begin(), vs.end()};
}

// Applies x_i -> x_perm[i] and normalises, with the smaller side first.
std::pair<Term, Term> permuted(const Equation& e, const std::vector<std::string>& vs, const std::vector<std::size_t>& perm,
                               const Laws& laws) {
    Substitution sub;
    for (std::size_t i = 0; i < vs.size(); ++i) sub[vs[i]] = Term::var(vs[perm[i]]);
    Term l = normal(substitute(e.lhs, sub), laws), r = normal(substitute(e.rhs, sub), laws);
    if (r < l) std::swap(l, r);
    return {l, r};
}

std::vector<std::size_t> identity(std::size_t k) {
    std::vector<std::size_t> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = i;
    return p;
}

// Smallest normal form over all renamings onto canonical names.
std::pair<Term, Term> canonical(const Equation& e, const Laws& laws) {
    auto vs = equation_vars(e);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vs.size(); ++i) names.push_back("v" + std::to_string(i));
    auto perm = identity(vs.size());
    std::optional<std::pair<Term, Term>> best;
    do {
        Substitution sub;
        for (std::size_t i = 0; i < vs.size(); ++i) sub[vs[i]] = Term::var(names[perm[i]]);
        Term l = normal(substitute(e.lhs, sub), laws), r = normal(substitute(e.rhs, sub), laws);
        if (r < l) std::swap(l, r);
        std::pair<Term, Term> cand{l, r};
        if (!best || cand < *best) best = cand;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

bool is_law(const std::vector<Equation>& axioms, const std::string& text) {
    static const Alphabet none = Alphabet::interleaving({"a"});
    auto key = canonical(parse_equation(text, none), Laws{});
    for (const auto& e : axioms)
        if (canonical(e, Laws{}) == key) return true;
    return false;
}

struct ReducedAxiom {
    Equation eq;
    // Variable permutations (over the sorted variables) that map the axiom to itself.
    std::vector<std::vector<std::size_t>> symmetries;
};

std::vector<ReducedAxiom> reduce_axioms(const std::vector<Equation>& axioms) {
    Laws laws;
    laws.plus_ac = is_law(axioms, "x + y = y + x") && is_law(axioms, "(x + y) + z = x + (y + z)");
    laws.par_comm = is_law(axioms, "x || y = y || x");
    std::vector<ReducedAxiom> out;
    if (!laws.plus_ac && !laws.par_comm) {
        for (const auto& e : axioms) out.push_back({e, {}});
        return out;
    }
    std::set<std::pair<Term, Term>> seen;
    for (const auto& e : axioms) {
        if (normal(e.lhs, laws) == normal(e.rhs, laws)) {
            out.push_back({e, {}});
            continue;
        }
        if (!seen.insert(canonical(e, laws)).second) continue;
        ReducedAxiom r{e, {}};
        auto vs = equation_vars(e);
        auto self = permuted(e, vs, identity(vs.size()), laws);
        auto perm = identity(vs.size());
        while (std::next_permutation(perm.begin(), perm.end()))
            if (permuted(e, vs, perm, laws) == self) r.symmetries.push_back(perm);
        out.push_back(std::move(r));
    }
    return out;
}

// Partial operation tables with a value domain per cell and watch lists over
// ground axiom instances. The goal's variables become extra constant cells.
class Search {
public:
    Search(const Alphabet& alphabet, std::size_t n, const std::vector<Equation>& axioms, const Equation& goal,
           std::uint64_t budget)
        : n_(n), budget_(budget) {
        auto ids = alphabet.sync_mode() ? alphabet.all_actions() : alphabet.visible_actions();
        for (ActionId a : ids) actions_.push_back(alphabet.name(a));
        plus_base_ = actions_.size() * n_;
        par_base_ = plus_base_ + n_ * n_;
        const_base_ = par_base_ + n_ * n_;
        for (auto& r : reduce_axioms(axioms)) {
            eqs_.push_back(compile(r.eq, actions_));
            symmetries_.push_back(std::move(r.symmetries));
        }
        goal_ = compile(goal, actions_);
        ncells_ = const_base_ + goal_.vars.size();
        vals_.assign(ncells_, -1);
        dom_.assign(ncells_, static_cast<std::uint32_t>((1ull << n_) - 1));
        watch_.resize(ncells_);
        for (std::size_t i = 0; i < goal_.vars.size(); ++i) order_.push_back(const_base_ + i);
        std::vector<std::size_t> ops;
        for (std::size_t c = 0; c < const_base_; ++c) ops.push_back(c);
        // Ties in the most-constrained choice go to prefixes, then the + table, then the parallel table.
        auto group = [&](std::size_t c) { return c < plus_base_ ? 0 : c < par_base_ ? 1 : 2; };
        std::stable_sort(ops.begin(), ops.end(), [&](std::size_t x, std::size_t y) {
            return std::pair(group(x), max_arg(x)) < std::pair(group(y), max_arg(y));
        });
        order_.insert(order_.end(), ops.begin(), ops.end());
        rank_.resize(ncells_);
        for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = i;
    }

    SearchResult run() {
        SearchResult r;
        if (init()) {
            root_ = trail_.size();
            solve(0);
        }
        r.nodes = nodes_;
        if (found_) {
            r.status = SearchStatus::Found;
            r.model = model();
        } else {
            r.status = exhausted_ ? SearchStatus::BudgetExhausted : SearchStatus::NoModel;
        }
        return r;
    }

private:
    static constexpr std::uint32_t kGoal = UINT32_MAX;
    static constexpr std::uint32_t kNone = UINT32_MAX;

    struct Instance {
        std::uint32_t eq;  // kGoal for the goal
        std::uint32_t code;
    };

    enum class Status { Sat, Fail, Blocked, Restrict };
    struct Outcome {
        Status status;
        std::uint32_t cell = kNone;
        std::uint32_t other = kNone;  // second blocking cell, when both sides are blocked
        std::uint32_t mask = 0;       // allowed values of `cell` for Restrict
    };

    enum class TrailKind : std::uint8_t { Assign, Push, Watch, Domain };
    struct TrailEntry {
        TrailKind kind;
        std::uint32_t at;  // cell, or instance for Watch entries
        std::uint32_t a = 0, b = 0;
    };

    std::size_t n_;
    std::uint64_t budget_;
    std::vector<std::string> actions_;
    std::size_t plus_base_ = 0, par_base_ = 0, const_base_ = 0, ncells_ = 0;
    std::vector<Compiled> eqs_;
    std::vector<std::vector<std::vector<std::size_t>>> symmetries_;
    Compiled goal_;
    std::vector<Instance> instances_;
    std::vector<int> vals_;
    std::vector<std::uint32_t> dom_;
    std::vector<std::vector<std::uint32_t>> watch_;
    // Cells each instance currently waits on; list entries for other cells are stale.
    std::vector<std::uint32_t> w1_, w2_;
    std::vector<TrailEntry> trail_;
    std::vector<std::uint32_t> queue_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> rank_;
    std::vector<int> stack_;
    std::vector<Element> slots_;
    std::vector<std::uint32_t> frontier_, probe_;
    std::uint64_t nodes_ = 0;
    // Axioms with this many variables are only instantiated once a complete model violates them.
    static constexpr std::size_t kDeferVars = 6;
    static constexpr std::size_t kBatch = 64;
    std::vector<Instance> deferred_;
    std::vector<std::uint32_t> promoted_;
    std::size_t root_ = 0;
    bool found_ = false;
    bool exhausted_ = false;

    std::size_t max_arg(std::size_t c) const {
        if (c >= const_base_) return 0;
        if (c < plus_base_) return c % n_;
        std::size_t k = c < par_base_ ? c - plus_base_ : c - par_base_;
        return std::max(k / n_, k % n_);
    }

    FiniteModel model() const {
        FiniteModel m;
        m.carrier = n_;
        for (std::size_t a = 0; a < actions_.size(); ++a)
            for (std::size_t i = 0; i < n_; ++i) m.prefix[actions_[a]].push_back(static_cast<Element>(vals_[a * n_ + i]));
        m.plus.assign(n_, std::vector<Element>(n_));
        m.par.assign(n_, std::vector<Element>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                m.plus[i][j] = static_cast<Element>(vals_[plus_base_ + i * n_ + j]);
                m.par[i][j] = static_cast<Element>(vals_[par_base_ + i * n_ + j]);
            }
        return m;
    }

    // Evaluates with unknown values propagated upwards; collects up to three
    // frontier cells (unassigned cells whose arguments are known).
    int run(const Program& p, std::vector<std::uint32_t>& frontier) {
        stack_.clear();
        for (const Instr& in : p) {
            std::size_t cell = 0;
            switch (in.op) {
                case Op::Zero:
                    stack_.push_back(0);
                    continue;
                case Op::Var:
                    stack_.push_back(slots_[in.arg]);
                    continue;
                case Op::Prefix: {
                    int x = stack_.back();
                    stack_.pop_back();
                    if (x < 0) {
                        stack_.push_back(-1);
                        continue;
                    }
                    cell = in.arg * n_ + static_cast<std::size_t>(x);
                    break;
                }
                case Op::Plus:
                case Op::Par: {
                    int r = stack_.back();
                    stack_.pop_back();
                    int l = stack_.back();
                    stack_.pop_back();
                    if (l < 0 || r < 0) {
                        stack_.push_back(-1);
                        continue;
                    }
                    cell = (in.op == Op::Plus ? plus_base_ : par_base_) + static_cast<std::size_t>(l) * n_ +
                           static_cast<std::size_t>(r);
                    break;
                }
            }
            int v = vals_[cell];
            if (v < 0 && frontier.size() < 8 &&
                std::find(frontier.begin(), frontier.end(), static_cast<std::uint32_t>(cell)) == frontier.end())
                frontier.push_back(static_cast<std::uint32_t>(cell));
            stack_.push_back(v);
        }
        return stack_.back();
    }

    Outcome evaluate(const Instance& inst) {
        const bool goal = inst.eq == kGoal;
        const Compiled& c = goal ? goal_ : eqs_[inst.eq];
        slots_.resize(c.vars.size());
        if (goal) {
            for (std::size_t i = 0; i < c.vars.size(); ++i) {
                int v = vals_[const_base_ + i];
                if (v < 0) return {Status::Blocked, static_cast<std::uint32_t>(const_base_ + i)};
                slots_[i] = static_cast<Element>(v);
            }
        } else {
            std::uint32_t code = inst.code;
            for (std::size_t i = c.vars.size(); i-- > 0;) {
                slots_[i] = static_cast<Element>(code % n_);
                code /= static_cast<std::uint32_t>(n_);
            }
        }
        frontier_.clear();
        int l = run(c.lhs, frontier_);
        int r = run(c.rhs, frontier_);
        if (l >= 0 && r >= 0) return {(l == r) != goal ? Status::Sat : Status::Fail};
        if (frontier_.size() >= 2) {
            // Watch the two cells the search will reach last.
            std::partial_sort(frontier_.begin(), frontier_.begin() + 2, frontier_.end(),
                              [&](std::uint32_t x, std::uint32_t y) { return rank_[x] > rank_[y]; });
            return {Status::Blocked, frontier_[0], frontier_[1]};
        }
        std::uint32_t cell = frontier_[0];
        // Only one cell is missing: if fixing it decides the instance, keep the values that satisfy it.
        std::uint32_t mask = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            if (!(dom_[cell] >> v & 1)) continue;
            vals_[cell] = static_cast<int>(v);
            probe_.clear();
            int l2 = run(c.lhs, probe_);
            int r2 = run(c.rhs, probe_);
            if (l2 < 0 || r2 < 0) {
                vals_[cell] = -1;
                return {Status::Blocked, cell};
            }
            if ((l2 == r2) != goal) mask |= 1u << v;
        }
        vals_[cell] = -1;
        return {Status::Restrict, cell, kNone, mask};
    }

    void assign(std::uint32_t cell, Element v) {
        vals_[cell] = v;
        trail_.push_back({TrailKind::Assign, cell});
        queue_.push_back(cell);
    }

    void set_watch(std::uint32_t id, std::uint32_t a, std::uint32_t b) {
        trail_.push_back({TrailKind::Watch, id, w1_[id], w2_[id]});
        w1_[id] = a;
        w2_[id] = b;
        for (std::uint32_t c : {a, b})
            if (c != kNone) {
                watch_[c].push_back(id);
                trail_.push_back({TrailKind::Push, c});
            }
    }

    bool restrict_domain(std::uint32_t cell, std::uint32_t mask) {
        std::uint32_t d = dom_[cell] & mask;
        if (d == 0) return false;
        if (d != dom_[cell]) {
            trail_.push_back({TrailKind::Domain, cell, dom_[cell]});
            dom_[cell] = d;
        }
        if ((d & (d - 1)) == 0) assign(cell, static_cast<Element>(std::countr_zero(d)));
        return true;
    }

    bool handle(std::uint32_t id) {
        Outcome o = evaluate(instances_[id]);
        switch (o.status) {
            case Status::Sat:
                set_watch(id, kNone, kNone);
                return true;
            case Status::Fail:
                return false;
            case Status::Blocked:
                set_watch(id, o.cell, o.other);
                return true;
            case Status::Restrict:
                // Every value left in the domain satisfies the instance.
                set_watch(id, kNone, kNone);
                return restrict_domain(o.cell, o.mask);
        }
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            std::uint32_t c = queue_.back();
            queue_.pop_back();
            // The list of an assigned cell is left untouched; it is valid again once the cell is unassigned.
            const auto& w = watch_[c];
            for (std::size_t k = 0; k < w.size(); ++k) {
                std::uint32_t id = w[k];
                if (w1_[id] != c && w2_[id] != c) continue;
                if (!handle(id)) {
                    queue_.clear();
                    return false;
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            TrailEntry t = trail_.back();
            trail_.pop_back();
            switch (t.kind) {
                case TrailKind::Assign:
                    vals_[t.at] = -1;
                    break;
                case TrailKind::Push:
                    watch_[t.at].pop_back();
                    break;
                case TrailKind::Watch:
                    w1_[t.at] = t.a;
                    w2_[t.at] = t.b;
                    break;
                case TrailKind::Domain:
                    dom_[t.at] = t.a;
                    break;
            }
        }
    }

    bool init() {
        for (std::uint32_t e = 0; e < eqs_.size(); ++e) {
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < eqs_[e].vars.size(); ++i) total *= n_;
            if (total > UINT32_MAX) throw std::invalid_argument("too many ground instances for model search");
            const std::size_t k = eqs_[e].vars.size();
            std::vector<std::size_t> digits(k);
            for (std::uint32_t code = 0; code < total; ++code) {
                std::uint32_t rest = code;
                for (std::size_t i = k; i-- > 0;) {
                    digits[i] = rest % n_;
                    rest /= static_cast<std::uint32_t>(n_);
                }
                // Keep only the smallest valuation of each orbit under the axiom's symmetries.
                bool least = true;
                for (const auto& perm : symmetries_[e]) {
                    std::uint32_t other = 0;
                    for (std::size_t i = 0; i < k; ++i) other = other * static_cast<std::uint32_t>(n_) + digits[perm[i]];
                    if (other < code) {
                        least = false;
                        break;
                    }
                }
                if (!least) continue;
                if (k >= kDeferVars) deferred_.push_back({e, code});
                else instances_.push_back({e, code});
            }
        }
        instances_.push_back({kGoal, 0});
        w1_.assign(instances_.size(), kNone);
        w2_.assign(instances_.size(), kNone);
        for (std::uint32_t id = 0; id < instances_.size(); ++id)
            if (!handle(id)) return false;
        return propagate();
    }

    // Once the goal's constants are fixed, cells the goal evaluation waits on
    // come first. Otherwise the most constrained unassigned cell among those
    // whose arguments are all at most mx (widening the band when it is
    // exhausted); ties keep the static order.
    std::optional<std::size_t> pick(std::size_t mx) {
        bool constants = true;
        for (std::size_t i = const_base_; i < ncells_; ++i) constants = constants && vals_[i] >= 0;
        if (constants) {
            slots_.resize(goal_.vars.size());
            for (std::size_t i = 0; i < goal_.vars.size(); ++i) slots_[i] = static_cast<Element>(vals_[const_base_ + i]);
            frontier_.clear();
            run(goal_.lhs, frontier_);
            run(goal_.rhs, frontier_);
            std::optional<std::size_t> best;
            int best_size = INT32_MAX;
            for (std::uint32_t cell : frontier_) {
                int size = std::popcount(dom_[cell]);
                if (size < best_size) {
                    best = cell;
                    best_size = size;
                }
            }
            if (best) return best;
        }
        for (std::size_t band = mx; band < n_; ++band) {
            std::optional<std::size_t> best;
            int best_size = INT32_MAX;
            for (std::size_t c : order_) {
                if (vals_[c] >= 0 || max_arg(c) > band) continue;
                int size = std::popcount(dom_[c]);
                if (size < best_size) {
                    best = c;
                    best_size = size;
                }
            }
            if (best) return best;
        }
        return std::nullopt;
    }

    // `mx` is the largest element mentioned by a decision so far; elements above
    // it are interchangeable, so only mx + 1 is tried among them.
    bool solve(std::size_t mx) {
        auto next = pick(mx);
        if (!next) {
            found_ = complete();
            return found_;
        }
        std::uint32_t cell = static_cast<std::uint32_t>(*next);
        mx = std::max(mx, max_arg(cell));
        std::size_t top = std::min(n_ - 1, mx + 1);
        for (std::size_t v = 0; v <= top; ++v) {
            if (!(dom_[cell] >> v & 1)) continue;
            if (++nodes_ > budget_) {
                exhausted_ = true;
                return false;
            }
            std::size_t mark = trail_.size();
            assign(cell, static_cast<Element>(v));
            if (propagate() && solve(std::max(mx, v))) return true;
            undo(mark);
            if (exhausted_) return false;
        }
        return false;
    }

    // On complete tables: promoted instances must hold, and deferred ones that
    // fail are promoted so that propagation sees them from now on.
    bool complete() {
        for (std::uint32_t id : promoted_)
            if (evaluate(instances_[id]).status == Status::Fail) return false;
        std::size_t added = 0;
        for (auto it = deferred_.begin(); it != deferred_.end() && added < kBatch;) {
            if (evaluate(*it).status == Status::Fail) {
                promote(*it);
                *it = deferred_.back();
                deferred_.pop_back();
                ++added;
            } else {
                ++it;
            }
        }
        return added == 0;
    }

    // Watches go on the cells the instance waits on at the root, below every
    // trailed watch entry, so that backtracking never removes them.
    void promote(const Instance& inst) {
        auto id = static_cast<std::uint32_t>(instances_.size());
        instances_.push_back(inst);
        std::vector<int> saved = vals_;
        for (std::size_t k = root_; k < trail_.size(); ++k)
            if (trail_[k].kind == TrailKind::Assign) vals_[trail_[k].at] = -1;
        Outcome o = evaluate(inst);
        vals_ = std::move(saved);
        w1_.push_back(o.cell);
        w2_.push_back(o.status == Status::Blocked ? o.other : kNone);
        for (std::uint32_t c : {w1_[id], w2_[id]})
            if (c != kNone) watch_[c].insert(watch_[c].begin(), id);
        promoted_.push_back(id);
    }
};

}  // namespace

SearchResult search_model(const Alphabet& alphabet, std::size_t carrier, const std::vector<Equation>& axioms,
                          const Equation& goal, std::uint64_t budget) {
    if (carrier == 0 || carrier > 255) throw std::invalid_argument("carrier size out of range");
    Search s(alphabet, carrier, axioms, goal, budget);
    return s.run();
}

SearchResult search_model_up_to(const Alphabet& alphabet, std::size_t max_carrier, const std::vector<Equation>& axioms,
                                const Equation& goal, std::uint64_t budget) {
    SearchResult last;
    std::uint64_t used = 0;
    for (std::size_t n = 1; n <= max_carrier; ++n) {
        last = search_model(alphabet, n, axioms, goal, budget - used);
        used += last.nodes;
        if (last.status != SearchStatus::NoModel) return last;
    }
    last.nodes = used;
    return last;
}

}  // namespace bccsp

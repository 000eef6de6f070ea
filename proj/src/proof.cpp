#include "bccsp/proof.hpp"

#include <functional>
#include <map>

namespace bccsp {

std::string to_string(Rule r) {
    switch (r) {
        case Rule::Refl:
            return "refl";
        case Rule::Sym:
            return "sym";
        case Rule::Trans:
            return "trans";
        case Rule::Subst:
            return "subst";
        case Rule::CongPrefix:
            return "cong_prefix";
        case Rule::CongSum:
            return "cong_sum";
        case Rule::CongPar:
            return "cong_par";
        case Rule::Axiom:
            return "axiom";
    }
    return "?";
}

Rule parse_rule(const std::string& s) {
    static const std::map<std::string, Rule> names = {
        {"refl", Rule::Refl},         {"sym", Rule::Sym},           {"trans", Rule::Trans},
        {"subst", Rule::Subst},       {"cong_prefix", Rule::CongPrefix}, {"cong_sum", Rule::CongSum},
        {"cong_par", Rule::CongPar},  {"axiom", Rule::Axiom},
    };
    auto it = names.find(s);
    if (it == names.end()) throw std::invalid_argument("unknown rule '" + s + "'");
    return it->second;
}

namespace {

using Eq = std::pair<Term, Term>;

const Eq& premise(const ProofStep& s, std::size_t k, const std::vector<Eq>& earlier) {
    if (s.premises.size() <= k) throw std::invalid_argument(to_string(s.rule) + " needs more premises");
    std::size_t i = s.premises[k];
    if (i >= earlier.size()) throw std::invalid_argument("premise " + std::to_string(i) + " does not precede this step");
    return earlier[i];
}

void expect_premises(const ProofStep& s, std::size_t n) {
    if (s.premises.size() != n)
        throw std::invalid_argument(to_string(s.rule) + " takes " + std::to_string(n) + " premise(s), got " +
                                    std::to_string(s.premises.size()));
}

bool valid_path(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (std::size_t k : p) {
        if (k >= cur->arity()) return false;
        cur = &cur->child(k);
    }
    return true;
}

}  // namespace

std::pair<Term, Term> step_conclusion(const ProofStep& s, const std::vector<Eq>& earlier, const AxiomSystem& system) {
    Eq out;
    switch (s.rule) {
        case Rule::Refl:
            expect_premises(s, 0);
            if (!s.term) throw std::invalid_argument("refl needs a term");
            out = {*s.term, *s.term};
            break;
        case Rule::Sym: {
            expect_premises(s, 1);
            const Eq& e = premise(s, 0, earlier);
            out = {e.second, e.first};
            break;
        }
        case Rule::Trans: {
            expect_premises(s, 2);
            const Eq& a = premise(s, 0, earlier);
            const Eq& b = premise(s, 1, earlier);
            if (a.second != b.first)
                throw std::invalid_argument("trans: " + render(a.second) + " differs from " + render(b.first));
            out = {a.first, b.second};
            break;
        }
        case Rule::Subst: {
            expect_premises(s, 1);
            const Eq& e = premise(s, 0, earlier);
            out = {substitute(e.first, s.subst), substitute(e.second, s.subst)};
            break;
        }
        case Rule::CongPrefix: {
            expect_premises(s, 1);
            const Eq& e = premise(s, 0, earlier);
            out = {Term::prefix(s.action, e.first), Term::prefix(s.action, e.second)};
            break;
        }
        case Rule::CongSum:
        case Rule::CongPar: {
            expect_premises(s, 2);
            const Eq& a = premise(s, 0, earlier);
            const Eq& b = premise(s, 1, earlier);
            if (s.rule == Rule::CongSum)
                out = {Term::sum(a.first, b.first), Term::sum(a.second, b.second)};
            else
                out = {Term::par(a.first, b.first), Term::par(a.second, b.second)};
            break;
        }
        case Rule::Axiom: {
            expect_premises(s, 0);
            const Equation* e = system.find(s.axiom);
            if (!e) throw std::invalid_argument("'" + s.axiom + "' is not an axiom of " + system.name);
            Term l = substitute(e->lhs, s.subst);
            Term r = substitute(e->rhs, s.subst);
            if (!s.context) {
                if (!s.path.empty()) throw std::invalid_argument("a path needs a context");
                out = {l, r};
                break;
            }
            if (!valid_path(*s.context, s.path)) throw std::invalid_argument("path does not exist in the context");
            const Term& at = subterm(*s.context, s.path);
            if (at != l)
                throw std::invalid_argument("context holds " + render(at) + " where the instance " + render(l) +
                                            " of " + s.axiom + " was expected");
            out = {*s.context, replace_at(*s.context, s.path, r)};
            break;
        }
    }
    if (s.lhs && *s.lhs != out.first)
        throw std::invalid_argument("claimed left side " + render(*s.lhs) + " but the rule gives " + render(out.first));
    if (s.rhs && *s.rhs != out.second)
        throw std::invalid_argument("claimed right side " + render(*s.rhs) + " but the rule gives " + render(out.second));
    return out;
}

ProofCheck check_proof(const ProofScript& ps, const AxiomSystem& system) {
    ProofCheck res;
    for (std::size_t i = 0; i < ps.steps.size(); ++i) {
        try {
            res.conclusions.push_back(step_conclusion(ps.steps[i], res.conclusions, system));
        } catch (const std::invalid_argument& e) {
            res.failed_step = i;
            res.reason = e.what();
            return res;
        }
    }
    if (ps.steps.empty()) {
        res.reason = "empty proof";
        return res;
    }
    const Eq& last = res.conclusions.back();
    if (last.first != ps.goal_lhs || last.second != ps.goal_rhs) {
        res.failed_step = ps.steps.size() - 1;
        res.reason = "the last step proves " + render(last.first) + " = " + render(last.second) + ", not the goal";
        return res;
    }
    res.accepted = true;
    return res;
}

// ---------------------------------------------------------------- builder

std::size_t ProofBuilder::add(ProofStep s) {
    try {
        conclusions_.push_back(step_conclusion(s, conclusions_, *system_));
    } catch (const std::invalid_argument& e) {
        throw InternalError(std::string("proof construction: ") + e.what());
    }
    steps_.push_back(std::move(s));
    return steps_.size() - 1;
}

std::size_t ProofBuilder::refl(const Term& t) {
    ProofStep s;
    s.rule = Rule::Refl;
    s.term = t;
    return add(std::move(s));
}

std::size_t ProofBuilder::sym(std::size_t i) {
    ProofStep s;
    s.rule = Rule::Sym;
    s.premises = {i};
    return add(std::move(s));
}

std::size_t ProofBuilder::trans(std::size_t i, std::size_t j) {
    ProofStep s;
    s.rule = Rule::Trans;
    s.premises = {i, j};
    return add(std::move(s));
}

std::size_t ProofBuilder::subst(std::size_t i, const Substitution& sigma) {
    ProofStep s;
    s.rule = Rule::Subst;
    s.premises = {i};
    s.subst = sigma;
    return add(std::move(s));
}

std::size_t ProofBuilder::cong_prefix(Symbol a, std::size_t i) {
    ProofStep s;
    s.rule = Rule::CongPrefix;
    s.action = a;
    s.premises = {i};
    return add(std::move(s));
}

std::size_t ProofBuilder::cong_sum(std::size_t i, std::size_t j) {
    ProofStep s;
    s.rule = Rule::CongSum;
    s.premises = {i, j};
    return add(std::move(s));
}

std::size_t ProofBuilder::cong_par(std::size_t i, std::size_t j) {
    ProofStep s;
    s.rule = Rule::CongPar;
    s.premises = {i, j};
    return add(std::move(s));
}

std::size_t ProofBuilder::axiom(const std::string& id, const Substitution& sigma) {
    ProofStep s;
    s.rule = Rule::Axiom;
    s.axiom = id;
    s.subst = sigma;
    return add(std::move(s));
}

std::size_t ProofBuilder::axiom_at(const std::string& id, const Substitution& sigma, const Term& context,
                                   const Path& path) {
    if (path.empty()) return axiom(id, sigma);
    ProofStep s;
    s.rule = Rule::Axiom;
    s.axiom = id;
    s.subst = sigma;
    s.context = context;
    s.path = path;
    return add(std::move(s));
}

std::size_t ProofBuilder::lift(std::size_t i, const Term& context, const Path& path) {
    std::function<std::size_t(const Term&, std::size_t)> go = [&](const Term& c, std::size_t depth) -> std::size_t {
        if (depth == path.size()) {
            if (conclusion(i).first != c) throw InternalError("lift: the step does not match the context");
            return i;
        }
        std::size_t k = path[depth];
        std::size_t inner = go(c.child(k), depth + 1);
        switch (c.kind()) {
            case Kind::Prefix:
                return cong_prefix(c.action(), inner);
            case Kind::Sum:
                return k == 0 ? cong_sum(inner, refl(c.right())) : cong_sum(refl(c.left()), inner);
            case Kind::Par:
                return k == 0 ? cong_par(inner, refl(c.right())) : cong_par(refl(c.left()), inner);
            default:
                throw InternalError("lift: bad path");
        }
    };
    return go(context, 0);
}

ProofScript ProofBuilder::script(const Term& goal_lhs, const Term& goal_rhs) const {
    ProofScript ps;
    ps.system = system_->name;
    ps.alphabet = system_->alphabet;
    ps.goal_lhs = goal_lhs;
    ps.goal_rhs = goal_rhs;
    ps.steps = steps_;
    return ps;
}

ProofScript ProofBuilder::script_for(std::size_t last) const {
    std::vector<char> need(last + 1, 0);
    need[last] = 1;
    for (std::size_t i = last + 1; i-- > 0;)
        if (need[i])
            for (std::size_t p : steps_[i].premises) need[p] = 1;
    std::vector<std::size_t> renumber(last + 1, 0);
    ProofScript ps;
    ps.system = system_->name;
    ps.alphabet = system_->alphabet;
    ps.goal_lhs = conclusions_[last].first;
    ps.goal_rhs = conclusions_[last].second;
    for (std::size_t i = 0; i <= last; ++i) {
        if (!need[i]) continue;
        ProofStep s = steps_[i];
        for (auto& p : s.premises) p = renumber[p];
        renumber[i] = ps.steps.size();
        ps.steps.push_back(std::move(s));
    }
    return ps;
}

// ---------------------------------------------------------------- chain

Chain::Chain(ProofBuilder* builder, Term start) : builder_(builder), start_(start), current_(std::move(start)) {}

void Chain::push(std::size_t step, const Term& next) {
    if (builder_) proof_ = proof_ ? builder_->trans(*proof_, step) : step;
    current_ = next;
    ++count_;
}

std::size_t Chain::proof() {
    if (!builder_) throw InternalError("chain has no proof builder");
    if (!proof_) proof_ = builder_->refl(start_);
    return *proof_;
}

void Chain::then(std::size_t step) {
    const auto& c = builder_->conclusion(step);
    if (c.first != current_) throw InternalError("chain: step starts at " + render(c.first) + ", not " + render(current_));
    push(step, c.second);
}

void Chain::rewrite(const Equation& eq, const Substitution& sigma, const Path& path, bool reverse,
                    std::optional<std::size_t> lemma) {
    Term from = substitute(reverse ? eq.rhs : eq.lhs, sigma);
    Term to = substitute(reverse ? eq.lhs : eq.rhs, sigma);
    const Term& at = subterm(current_, path);
    if (at != from)
        throw InternalError("rewrite with " + eq.id + ": found " + render(at) + ", expected " + render(from));
    Term next = replace_at(current_, path, to);
    if (!builder_) {
        current_ = std::move(next);
        ++count_;
        return;
    }
    std::size_t step;
    if (lemma) {
        step = sigma.empty() ? *lemma : builder_->subst(*lemma, sigma);
        if (reverse) step = builder_->sym(step);
        step = builder_->lift(step, current_, path);
    } else if (!reverse) {
        step = builder_->axiom_at(eq.id, sigma, current_, path);
    } else {
        Term ctx = replace_at(current_, path, to);
        step = builder_->sym(builder_->axiom_at(eq.id, sigma, ctx, path));
    }
    push(step, next);
}

void Chain::rewrite(const std::string& axiom_id, const Substitution& sigma, const Path& path, bool reverse) {
    static const AxiomSystem basic = build_system("E1", Alphabet::interleaving({"a"}));
    const Equation* e = nullptr;
    if (builder_) e = builder_->system().find(axiom_id);
    if (!e) e = basic.find(axiom_id);
    if (!e) throw InternalError("rewrite: unknown axiom " + axiom_id);
    rewrite(*e, sigma, path, reverse);
}

namespace {
Path child_path(const Path& p, std::size_t k) {
    Path q = p;
    q.push_back(k);
    return q;
}
}  // namespace

void Chain::normalise_at(const Path& p) {
    Term t = subterm(current_, p);
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return;
        case Kind::Prefix:
            normalise_at(child_path(p, 0));
            return;
        case Kind::Par: {
            normalise_at(child_path(p, 0));
            normalise_at(child_path(p, 1));
            t = subterm(current_, p);
            if (t.right().is_nil()) {
                rewrite("P0", {{"x", t.left()}}, p);
            } else if (t.left().is_nil()) {
                rewrite("P1", {{"x", t.left()}, {"y", t.right()}}, p);
                rewrite("P0", {{"x", t.right()}}, p);
            } else if (Term::compare(t.right(), t.left()) < 0) {
                rewrite("P1", {{"x", t.left()}, {"y", t.right()}}, p);
            }
            return;
        }
        case Kind::Sum:
            normalise_at(child_path(p, 0));
            normalise_at(child_path(p, 1));
            merge(p);
            return;
    }
}

// Both operands of the sum at p are normal; makes the sum normal.
void Chain::merge(const Path& p) {
    Term t = subterm(current_, p);
    const Term& l = t.left();
    const Term& r = t.right();
    if (l.is_nil()) {
        rewrite("A1", {{"x", l}, {"y", r}}, p);
        rewrite("A0", {{"x", r}}, p);
        return;
    }
    if (r.is_nil()) {
        rewrite("A0", {{"x", l}}, p);
        return;
    }
    if (l.is_sum()) {
        rewrite("A2", {{"x", l.left()}, {"y", l.right()}, {"z", r}}, p);
        merge(child_path(p, 1));
    }
    insert(p);
}

// x + M with x a single normal summand and M a normal non-zero sum.
void Chain::insert(const Path& p) {
    Term t = subterm(current_, p);
    const Term& x = t.left();
    const Term& m = t.right();
    const Term& m1 = m.is_sum() ? m.left() : m;
    int c = Term::compare(x, m1);
    if (!m.is_sum()) {
        if (c == 0)
            rewrite("A3", {{"x", x}}, p);
        else if (c > 0)
            rewrite("A1", {{"x", x}, {"y", m}}, p);
        return;
    }
    if (c < 0) return;
    rewrite("A2", {{"x", x}, {"y", m1}, {"z", m.right()}}, p, true);
    if (c == 0) {
        rewrite("A3", {{"x", x}}, child_path(p, 0));
        return;
    }
    rewrite("A1", {{"x", x}, {"y", m1}}, child_path(p, 0));
    rewrite("A2", {{"x", m1}, {"y", x}, {"z", m.right()}}, p);
    insert(child_path(p, 1));
}

void Chain::ac_at(const Path& path, const Term& target) {
    const Term& here = subterm(current_, path);
    if (here == target) return;
    if (!builder_) {
        if (ac_normal_form(here) != ac_normal_form(target))
            throw InternalError("ac: " + render(here) + " and " + render(target) + " are not AC-equal");
        current_ = replace_at(current_, path, target);
        ++count_;
        return;
    }
    Chain other(builder_, replace_at(current_, path, target));
    other.normalise_at(path);
    normalise_at(path);
    if (other.current_ != current_)
        throw InternalError("ac: normal forms differ: " + render(current_) + " vs " + render(other.current_));
    if (other.proof_) push(builder_->sym(*other.proof_), other.start_);
}

Term ac_normal_form(const Term& t) {
    Chain c(nullptr, t);
    c.normalise_at({});
    return c.current();
}

}  // namespace bccsp

#include "bccsp/eliminate.hpp"

#include <algorithm>
#include <map>

#include "bccsp/derivations.hpp"

namespace bccsp {

std::string elimination_route(const std::string& system) {
    std::string f = system_family(system);
    if (f == "RS") return "RS";
    if (f == "CS" || f == "S") return "CS";
    if (f == "RT" || f == "FT" || f == "R" || f == "F") return "RT";
    if (f == "CT" || f == "T") return "CT";
    throw std::invalid_argument("no elimination procedure for system '" + system + "'");
}

namespace {

Path child(const Path& p, std::size_t k) {
    Path q = p;
    q.push_back(k);
    return q;
}

class Eliminator {
public:
    Eliminator(const AxiomSystem& sys, bool proof, const Term& start)
        : sys_(sys),
          route_(elimination_route(sys.name)),
          sync_(sys.mode == TransitionMode::CcsSync),
          builder_(sys),
          chain_(proof ? &builder_ : nullptr, start) {}

    void run() { elim_at({}, std::nullopt); }

    EliminationResult result() {
        EliminationResult r;
        r.result = chain_.current();
        r.cases = cases_;
        if (chain_.recording()) r.proof = builder_.script_for(chain_.proof());
        return r;
    }

private:
    const AxiomSystem& sys_;
    std::string route_;
    bool sync_;
    ProofBuilder builder_;
    Chain chain_;
    std::vector<EliminationCase> cases_;
    std::map<std::string, std::size_t> lemmas_;

    std::size_t action_index(Symbol s) const { return *sys_.alphabet.index_of(s); }

    void use(const std::string& id, const Substitution& s, const Path& path) {
        if (const Equation* e = sys_.find(id)) {
            chain_.rewrite(*e, s, path);
            return;
        }
        Equation eq = schema_instance(id, sys_.alphabet, sys_.mode);
        if (!chain_.recording()) {
            chain_.rewrite(eq, s, path);
            return;
        }
        auto it = lemmas_.find(id);
        if (it == lemmas_.end()) it = lemmas_.emplace(id, derive_instance(builder_, eq)).first;
        chain_.rewrite(eq, s, path, false, it->second);
    }

    void elim_at(const Path& path, std::optional<std::uint32_t> parent) {
        Term t = subterm(chain_.current(), path);
        if (t.par_free()) return;
        switch (t.kind()) {
            case Kind::Prefix:
                elim_at(child(path, 0), parent);
                return;
            case Kind::Sum:
                elim_at(child(path, 0), parent);
                elim_at(child(path, 1), parent);
                return;
            case Kind::Par:
                elim_at(child(path, 0), std::nullopt);
                elim_at(child(path, 1), std::nullopt);
                par_elim(path, parent);
                return;
            default:
                return;
        }
    }

    struct Side {
        std::vector<Term> summands;  // prefix terms
        bool has_dup = false;
        std::size_t dup_i = 0, dup_j = 0;
    };

    Side side(const Term& t) const {
        Side s;
        s.summands = summands(t);
        for (std::size_t i = 0; i < s.summands.size() && !s.has_dup; ++i)
            for (std::size_t j = i + 1; j < s.summands.size(); ++j)
                if (s.summands[i].action() == s.summands[j].action()) {
                    s.has_dup = true;
                    s.dup_i = i;
                    s.dup_j = j;
                    break;
                }
        return s;
    }

    static Term rest_sum(const std::vector<Term>& xs, std::size_t i, std::size_t j) {
        std::vector<Term> r;
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (k != i && k != j) r.push_back(xs[k]);
        return Term::sum_of(r);
    }

    std::vector<Term> by_action(std::vector<Term> xs) const {
        std::sort(xs.begin(), xs.end(),
                  [&](const Term& a, const Term& b) { return action_index(a.action()) < action_index(b.action()); });
        return xs;
    }

    static std::string list(const std::vector<Term>& xs) {
        if (xs.empty()) return "-";
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + action_name(xs[i].action());
        return s;
    }

    bool complementary(Symbol a, Symbol b) const {
        if (!sync_) return false;
        ActionId ia = action_index(a), ib = action_index(b);
        if (sys_.alphabet.is_tau(ia) || sys_.alphabet.is_tau(ib)) return false;
        return sys_.alphabet.complement(ia) == ib;
    }

    void apply(const std::string& id, const Term& shape, const Substitution& s, const Path& path) {
        chain_.ac_at(path, shape);
        use(id, s, path);
    }

    void swap_operands(const Path& path) {
        Term t = subterm(chain_.current(), path);
        use("P1", {{"x", t.left()}, {"y", t.right()}}, path);
    }

    // Expansion law with distinct actions on both sides.
    void expansion2(const Side& p, const Side& q, const Path& path, std::string& first) {
        auto ps = by_action(p.summands), qs = by_action(q.summands);
        Substitution s;
        for (std::size_t i = 0; i < ps.size(); ++i) s["x" + std::to_string(i + 1)] = ps[i].body();
        for (std::size_t j = 0; j < qs.size(); ++j) s["y" + std::to_string(j + 1)] = qs[j].body();
        first = std::string(sync_ ? "ELC2" : "EL2") + "[" + list(ps) + "|" + list(qs) + "]";
        apply(first, Term::par(Term::sum_of(ps), Term::sum_of(qs)), s, path);
    }

    void expansion1(const Term& a, const Term& b, const Path& path, std::string& first) {
        std::string schema = !sync_ ? "EL1" : complementary(a.action(), b.action()) ? "ELC1tau" : "ELC1";
        first = schema + "[" + action_name(a.action()) + "," + action_name(b.action()) + "]";
        apply(first, Term::par(a, b), {{"x", a.body()}, {"y", b.body()}}, path);
    }

    void par_elim(const Path& path, std::optional<std::uint32_t> parent, bool after_swap = false) {
        Term t = subterm(chain_.current(), path);
        const Term& l = t.left();
        const Term& r = t.right();
        EliminationCase ec;
        ec.measure = strip_nil(l).size() + strip_nil(r).size();
        ec.parent = parent;
        Side p = side(l), q = side(r);
        std::string& first = ec.first_rewrite;

        if (q.summands.empty()) {
            chain_.ac_at(path, Term::par(l, Term::nil()));
            first = "P0";
            use("P0", {{"x", l}}, path);
            cases_.push_back(ec);
            return;
        }
        if (p.summands.empty()) {
            chain_.ac_at(path, Term::par(Term::nil(), r));
            first = "P1";
            use("P1", {{"x", Term::nil()}, {"y", r}}, path);
            use("P0", {{"x", r}}, path);
            cases_.push_back(ec);
            return;
        }

        bool swapped = false;
        if (route_ == "RS") {
            if (p.has_dup && q.has_dup) {
                const auto& P = p.summands;
                const auto& Q = q.summands;
                Term u = rest_sum(P, p.dup_i, p.dup_j), v = rest_sum(Q, q.dup_i, q.dup_j);
                first = "RSP1[" + action_name(P[p.dup_i].action()) + "," + action_name(Q[q.dup_i].action()) + "]";
                Term shape = Term::par(Term::sum_of({P[p.dup_i], P[p.dup_j], u}), Term::sum_of({Q[q.dup_i], Q[q.dup_j], v}));
                apply(first, shape,
                      {{"x", P[p.dup_i].body()}, {"y", P[p.dup_j].body()}, {"u", u},
                       {"z", Q[q.dup_i].body()}, {"w", Q[q.dup_j].body()}, {"v", v}},
                      path);
            } else if (q.has_dup) {
                auto ps = by_action(p.summands);
                const auto& Q = q.summands;
                Term w = rest_sum(Q, q.dup_i, q.dup_j);
                first = "RSP2[" + list(ps) + "|" + action_name(Q[q.dup_i].action()) + "]";
                Substitution s{{"y", Q[q.dup_i].body()}, {"z", Q[q.dup_j].body()}, {"w", w}};
                for (std::size_t i = 0; i < ps.size(); ++i) s["x" + std::to_string(i + 1)] = ps[i].body();
                apply(first, Term::par(Term::sum_of(ps), Term::sum_of({Q[q.dup_i], Q[q.dup_j], w})), s, path);
            } else if (p.has_dup) {
                swapped = true;
            } else {
                expansion2(p, q, path, first);
            }
        } else if (route_ == "RT") {
            if (p.has_dup) {
                const auto& P = p.summands;
                Term w = rest_sum(P, p.dup_i, p.dup_j);
                first = "FP[" + action_name(P[p.dup_i].action()) + "]";
                apply(first, Term::par(Term::sum_of({P[p.dup_i], P[p.dup_j], w}), r),
                      {{"x", P[p.dup_i].body()}, {"y", P[p.dup_j].body()}, {"w", w}, {"z", r}}, path);
            } else if (q.has_dup) {
                swapped = true;
            } else {
                expansion2(p, q, path, first);
            }
        } else if (route_ == "CS") {
            const auto& P = p.summands;
            const auto& Q = q.summands;
            if (P.size() >= 2 && Q.size() >= 2) {
                Term u = rest_sum(P, 0, 1), v = rest_sum(Q, 0, 1);
                first = "CSP1[" + action_name(P[0].action()) + "," + action_name(P[1].action()) + "," +
                        action_name(Q[0].action()) + "," + action_name(Q[1].action()) + "]";
                apply(first, Term::par(Term::sum_of({P[0], P[1], u}), Term::sum_of({Q[0], Q[1], v})),
                      {{"x", P[0].body()}, {"y", P[1].body()}, {"u", u}, {"z", Q[0].body()}, {"w", Q[1].body()}, {"v", v}},
                      path);
            } else if (P.size() == 1 && Q.size() >= 2) {
                Term w = rest_sum(Q, 0, 1);
                first = "CSP2[" + action_name(P[0].action()) + "," + action_name(Q[0].action()) + "," +
                        action_name(Q[1].action()) + "]";
                apply(first, Term::par(P[0], Term::sum_of({Q[0], Q[1], w})),
                      {{"x", P[0].body()}, {"y", Q[0].body()}, {"z", Q[1].body()}, {"w", w}}, path);
            } else if (P.size() >= 2) {
                swapped = true;
            } else {
                expansion1(P[0], Q[0], path, first);
            }
        } else {
            const auto& P = p.summands;
            if (P.size() >= 2) {
                Term w = rest_sum(P, 0, 1);
                first = "CTP[" + action_name(P[0].action()) + "," + action_name(P[1].action()) + "]";
                apply(first, Term::par(Term::sum_of({P[0], P[1], w}), r),
                      {{"x", P[0].body()}, {"y", P[1].body()}, {"w", w}, {"z", r}}, path);
            } else if (q.summands.size() >= 2) {
                swapped = true;
            } else {
                expansion1(P[0], q.summands[0], path, first);
            }
        }

        if (swapped) {
            swap_operands(path);
            par_elim(path, parent, true);
            return;
        }
        if (after_swap) first = "P1";
        cases_.push_back(ec);
        elim_at(path, ec.measure);
    }
};

}  // namespace

EliminationResult eliminate(const Term& p, const AxiomSystem& system, bool emit_proof) {
    require_closed(p);
    check_actions(p, system.alphabet);
    Eliminator e(system, emit_proof, p);
    e.run();
    return e.result();
}

EliminationResult eliminate(const Term& p, const std::string& system, const Alphabet& alphabet, TransitionMode mode,
                            bool emit_proof) {
    AxiomSystem sys = build_system(system, alphabet, mode);
    return eliminate(p, sys, emit_proof);
}

}  // namespace bccsp

#include "bccsp/axioms.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace bccsp {

std::string render(const Equation& e) { return render(e.lhs) + " = " + render(e.rhs); }

const Equation* AxiomSystem::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &equations[it->second];
}

std::size_t AxiomSystem::count(const std::string& schema) const {
    return static_cast<std::size_t>(
        std::count_if(equations.begin(), equations.end(), [&](const Equation& e) { return e.schema == schema; }));
}

void AxiomSystem::add(Equation e) {
    if (index_.count(e.id)) throw std::logic_error("duplicate axiom id " + e.id);
    index_.emplace(e.id, equations.size());
    equations.push_back(std::move(e));
}

std::string system_family(const std::string& raw) {
    std::string n = raw;
    for (const std::string p : {"E^c_", "Ec_", "E_c_", "E_", "E"}) {
        if (n.rfind(p, 0) == 0) {
            n = n.substr(p.size());
            break;
        }
    }
    if (n == "0" || n == "1") return "";
    return n;
}

bool is_sync_system(const std::string& raw) {
    return raw.rfind("E^c_", 0) == 0 || raw.rfind("Ec_", 0) == 0 || raw.rfind("E_c_", 0) == 0;
}

Relation AxiomSystem::relation() const {
    std::string f = system_family(name);
    if (f.empty()) return Relation::of(RelKind::B);
    return Relation::parse(f);
}

std::vector<std::string> system_names(bool sync) {
    std::vector<std::string> out;
    for (const char* f : {"RS", "CS", "S", "RT", "FT", "R", "F", "CT", "T"}) out.push_back(std::string(sync ? "Ec_" : "E_") + f);
    return out;
}

namespace {

struct Builder {
    AxiomSystem& sys;
    std::vector<Symbol> acts;  // action values the schemas range over
    const Alphabet& alphabet;
    bool sync;

    Term x(const std::string& n) const { return Term::var(n); }
    static Term P(Symbol a, const Term& t) { return Term::prefix(a, t); }
    static Term S(std::initializer_list<Term> ts) { return Term::sum_of(std::vector<Term>(ts)); }
    static Term Par(const Term& l, const Term& r) { return Term::par(l, r); }
    static std::string nm(Symbol a) { return action_name(a); }

    void add(const std::string& schema, const std::string& args, Term l, Term r) {
        std::string id = args.empty() ? schema : schema + "[" + args + "]";
        sys.add(Equation{id, std::move(l), std::move(r), schema});
    }

    bool complementary(Symbol a, Symbol b) const {
        if (!sync) return false;
        auto ia = alphabet.index_of(a);
        auto ib = alphabet.index_of(b);
        if (alphabet.is_tau(*ia) || alphabet.is_tau(*ib)) return false;
        return alphabet.complement(*ia) == *ib;
    }

    std::vector<std::vector<Symbol>> subsets() const {
        std::vector<std::vector<Symbol>> out;
        for (std::size_t m = 0; m < (std::size_t{1} << acts.size()); ++m) {
            std::vector<Symbol> s;
            for (std::size_t i = 0; i < acts.size(); ++i)
                if (m & (std::size_t{1} << i)) s.push_back(acts[i]);
            out.push_back(s);
        }
        return out;
    }

    static std::string list(const std::vector<Symbol>& s) {
        if (s.empty()) return "-";
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + nm(s[i]);
        return out;
    }

    void basic(bool with_par) {
        Term X = x("x"), Y = x("y"), Z = x("z"), O = Term::nil();
        add("A0", "", Term::sum(X, O), X);
        add("A1", "", Term::sum(X, Y), Term::sum(Y, X));
        add("A2", "", Term::sum(Term::sum(X, Y), Z), Term::sum(X, Term::sum(Y, Z)));
        add("A3", "", Term::sum(X, X), X);
        if (!with_par) return;
        add("P0", "", Par(X, O), X);
        add("P1", "", Par(X, Y), Par(Y, X));
    }

    void el1() {
        Term X = x("x"), Y = x("y");
        for (Symbol a : acts)
            for (Symbol b : acts) {
                Term l = Par(P(a, X), P(b, Y));
                Term r = S({P(a, Par(X, P(b, Y))), P(b, Par(P(a, X), Y))});
                if (!sync) {
                    add("EL1", nm(a) + "," + nm(b), l, r);
                } else if (complementary(a, b)) {
                    add("ELC1tau", nm(a) + "," + nm(b), l,
                        S({P(a, Par(X, P(b, Y))), P(b, Par(P(a, X), Y)), P(alphabet.symbol(alphabet.tau()), Par(X, Y))}));
                } else {
                    add("ELC1", nm(a) + "," + nm(b), l, r);
                }
            }
    }

    void el2() {
        for (const auto& I : subsets())
            for (const auto& J : subsets()) {
                std::vector<Term> xs, ys, ps, qs;
                for (std::size_t i = 0; i < I.size(); ++i) {
                    xs.push_back(x("x" + std::to_string(i + 1)));
                    ps.push_back(P(I[i], xs.back()));
                }
                for (std::size_t j = 0; j < J.size(); ++j) {
                    ys.push_back(x("y" + std::to_string(j + 1)));
                    qs.push_back(P(J[j], ys.back()));
                }
                Term p = Term::sum_of(ps), q = Term::sum_of(qs);
                std::vector<Term> rhs;
                for (std::size_t i = 0; i < I.size(); ++i) rhs.push_back(P(I[i], Par(xs[i], q)));
                for (std::size_t j = 0; j < J.size(); ++j) rhs.push_back(P(J[j], Par(p, ys[j])));
                if (sync) {
                    for (std::size_t i = 0; i < I.size(); ++i)
                        for (std::size_t j = 0; j < J.size(); ++j)
                            if (complementary(I[i], J[j]))
                                rhs.push_back(P(alphabet.symbol(alphabet.tau()), Par(xs[i], ys[j])));
                }
                add(sync ? "ELC2" : "EL2", list(I) + "|" + list(J), Par(p, q), Term::sum_of(rhs));
            }
    }

    void rs_family() {
        Term X = x("x"), Y = x("y"), Z = x("z"), U = x("u"), V = x("v"), W = x("w");
        for (Symbol a : acts)
            for (Symbol b : acts) {
                Term in = S({P(b, X), P(b, Y), Z});
                add("RS", nm(a) + "," + nm(b), P(a, in), S({P(a, in), P(a, S({P(b, X), Z}))}));
            }
        for (Symbol a : acts)
            for (Symbol b : acts) {
                Term l = S({P(a, X), P(a, Y), U});
                Term r = S({P(b, Z), P(b, W), V});
                add("RSP1", nm(a) + "," + nm(b), Par(l, r),
                    S({Par(S({P(a, X), U}), r), Par(S({P(a, Y), U}), r), Par(l, S({P(b, Z), V})),
                       Par(l, S({P(b, W), V}))}));
            }
        for (const auto& I : subsets())
            for (Symbol b : acts) {
                std::vector<Term> xs, ps;
                for (std::size_t i = 0; i < I.size(); ++i) {
                    xs.push_back(x("x" + std::to_string(i + 1)));
                    ps.push_back(P(I[i], xs.back()));
                }
                Term p = Term::sum_of(ps);
                Term q = S({P(b, Y), P(b, Z), W});
                std::vector<Term> rhs{Par(p, S({P(b, Y), W})), Par(p, S({P(b, Z), W}))};
                for (std::size_t i = 0; i < I.size(); ++i) rhs.push_back(P(I[i], Par(xs[i], q)));
                add("RSP2", list(I) + "|" + nm(b), Par(p, q), Term::sum_of(rhs));
            }
    }

    void cs_family() {
        Term X = x("x"), Y = x("y"), Z = x("z"), U = x("u"), V = x("v"), W = x("w");
        for (Symbol a : acts)
            for (Symbol b : acts) {
                Term in = S({P(b, X), Y, Z});
                add("CS", nm(a) + "," + nm(b), P(a, in), S({P(a, in), P(a, S({P(b, X), Z}))}));
            }
        for (Symbol a : acts)
            for (Symbol b : acts)
                for (Symbol c : acts)
                    for (Symbol d : acts) {
                        Term l = S({P(a, X), P(b, Y), U});
                        Term r = S({P(c, Z), P(d, W), V});
                        add("CSP1", nm(a) + "," + nm(b) + "," + nm(c) + "," + nm(d), Par(l, r),
                            S({Par(S({P(a, X), U}), r), Par(S({P(b, Y), U}), r), Par(l, S({P(c, Z), V})),
                               Par(l, S({P(d, W), V}))}));
                    }
        for (Symbol a : acts)
            for (Symbol b : acts)
                for (Symbol c : acts) {
                    Term r = S({P(b, Y), P(c, Z), W});
                    add("CSP2", nm(a) + "," + nm(b) + "," + nm(c), Par(P(a, X), r),
                        S({P(a, Par(X, r)), Par(P(a, X), S({P(b, Y), W})), Par(P(a, X), S({P(c, Z), W}))}));
                }
    }

    void s_family() {
        Term X = x("x"), Y = x("y"), Z = x("z"), W = x("w");
        for (Symbol a : acts) add("S", nm(a), P(a, S({X, Y})), S({P(a, S({X, Y})), P(a, X)}));
        add("SP1", "", Par(S({X, Y}), S({Z, W})),
            S({Par(X, S({Z, W})), Par(Y, S({Z, W})), Par(S({X, Y}), Z), Par(S({X, Y}), W)}));
        for (Symbol a : acts)
            add("SP2", nm(a), Par(P(a, X), S({Y, Z})),
                S({P(a, Par(X, S({Y, Z}))), Par(P(a, X), Y), Par(P(a, X), Z)}));
    }

    void rt() {
        const std::size_t n = acts.size();
        Term Z = x("z");
        std::vector<std::size_t> idx(n, 0);
        // Nondecreasing index tuples, i.e. multisets of size n.
        std::function<void(std::size_t, std::size_t)> go = [&](std::size_t pos, std::size_t from) {
            if (pos == n) {
                for (Symbol a : acts) {
                    std::vector<Term> both, xs, ys;
                    std::string args = nm(a) + ";";
                    for (std::size_t i = 0; i < n; ++i) {
                        Symbol b = acts[idx[i]];
                        Term xi = x("x" + std::to_string(i + 1)), yi = x("y" + std::to_string(i + 1));
                        both.push_back(P(b, xi));
                        both.push_back(P(b, yi));
                        xs.push_back(P(b, xi));
                        ys.push_back(P(b, yi));
                        args += (i ? "," : "") + nm(b);
                    }
                    both.push_back(Z);
                    xs.push_back(Z);
                    ys.push_back(Z);
                    add("RT", args, P(a, Term::sum_of(both)),
                        Term::sum(P(a, Term::sum_of(xs)), P(a, Term::sum_of(ys))));
                }
                return;
            }
            for (std::size_t k = from; k < n; ++k) {
                idx[pos] = k;
                go(pos + 1, k);
            }
        };
        go(0, 0);
    }

    void fp() {
        Term X = x("x"), Y = x("y"), Z = x("z"), W = x("w");
        for (Symbol a : acts)
            add("FP", nm(a), Par(S({P(a, X), P(a, Y), W}), Z),
                S({Par(S({P(a, X), W}), Z), Par(S({P(a, Y), W}), Z)}));
    }

    void ft() {
        Term X = x("x"), Y = x("y");
        for (Symbol a : acts) add("FT", nm(a), S({P(a, X), P(a, Y)}), S({P(a, X), P(a, Y), P(a, S({X, Y}))}));
    }

    void r_ax() {
        Term X = x("x"), Y = x("y"), Z = x("z"), W = x("w");
        for (Symbol a : acts)
            for (Symbol b : acts)
                add("R", nm(a) + "," + nm(b), S({P(a, S({P(b, X), Z})), P(a, S({P(b, Y), W}))}),
                    S({P(a, S({P(b, X), P(b, Y), Z})), P(a, S({P(b, Y), W}))}));
    }

    void f_ax() {
        Term X = x("x"), Y = x("y"), Z = x("z");
        for (Symbol a : acts)
            add("F", nm(a), S({P(a, X), P(a, S({Y, Z}))}), S({P(a, X), P(a, S({X, Y})), P(a, S({Y, Z}))}));
    }

    void ct() {
        Term X = x("x"), Y = x("y"), Z = x("z"), W = x("w");
        for (Symbol a : acts)
            for (Symbol b : acts)
                for (Symbol c : acts)
                    add("CT", nm(a) + "," + nm(b) + "," + nm(c), S({P(a, S({P(b, X), Z})), P(a, S({P(c, Y), W}))}),
                        P(a, S({P(b, X), P(c, Y), Z, W})));
        for (Symbol a : acts)
            for (Symbol b : acts)
                add("CTP", nm(a) + "," + nm(b), Par(S({P(a, X), P(b, Y), W}), Z),
                    S({Par(S({P(a, X), W}), Z), Par(S({P(b, Y), W}), Z)}));
    }

    void t_ax() {
        Term X = x("x"), Y = x("y"), Z = x("z");
        for (Symbol a : acts) add("T", nm(a), S({P(a, X), P(a, Y)}), P(a, S({X, Y})));
        add("TP", "", Par(S({X, Y}), Z), S({Par(X, Z), Par(Y, Z)}));
    }
};

}  // namespace

AxiomSystem build_system(const std::string& name, const Alphabet& alphabet, TransitionMode mode) {
    const bool sync_name = is_sync_system(name);
    const std::string fam = system_family(name);
    const bool sync = mode == TransitionMode::CcsSync;
    if (sync && !alphabet.sync_mode()) throw AlphabetError("synchronising semantics needs an alphabet with complements");
    bool basic_name = name == "E0" || name == "E1";
    if (!basic_name) {
        static const std::set<std::string> known = {"RS", "CS", "S", "RT", "FT", "R", "F", "CT", "T"};
        if (!known.count(fam) || (name.rfind("E", 0) != 0)) throw std::invalid_argument("unknown axiom system '" + name + "'");
        if (sync_name != sync)
            throw std::invalid_argument(sync_name ? "system '" + name + "' needs synchronising semantics"
                                                  : "system '" + name + "' is for interleaving semantics");
    }
    AxiomSystem sys;
    sys.name = name;
    sys.alphabet = alphabet;
    sys.mode = mode;
    Builder b{sys, {}, alphabet, sync};
    for (ActionId a : sync ? alphabet.all_actions() : alphabet.visible_actions()) b.acts.push_back(alphabet.symbol(a));

    if (name == "E0") {
        b.basic(false);
        return sys;
    }
    b.basic(true);
    if (name == "E1") return sys;
    if (fam == "RS") {
        b.rs_family();
        b.el2();
    } else if (fam == "CS") {
        b.cs_family();
        b.el1();
    } else if (fam == "S") {
        b.s_family();
        b.el1();
    } else if (fam == "RT") {
        b.rt();
        b.fp();
        b.el2();
    } else if (fam == "FT") {
        b.ft();
        // the RS axiom alone, without RSP1/RSP2
        Term X = Term::var("x"), Y = Term::var("y"), Z = Term::var("z");
        for (Symbol a : b.acts)
            for (Symbol c : b.acts) {
                Term in = Term::sum_of({Term::prefix(c, X), Term::prefix(c, Y), Z});
                b.add("RS", action_name(a) + "," + action_name(c), Term::prefix(a, in),
                      Term::sum(Term::prefix(a, in), Term::prefix(a, Term::sum(Term::prefix(c, X), Z))));
            }
        b.fp();
        b.el2();
    } else if (fam == "R") {
        b.r_ax();
        b.fp();
        b.el2();
    } else if (fam == "F") {
        b.f_ax();
        b.r_ax();
        b.fp();
        b.el2();
    } else if (fam == "CT") {
        b.ct();
        b.el1();
    } else if (fam == "T") {
        b.t_ax();
        b.el1();
    }
    return sys;
}

AxiomSystem build_system(const std::string& name, const Alphabet& alphabet) {
    return build_system(name, alphabet, default_mode(alphabet));
}

SoundResult check_sound(Checker& c, const Equation& e, const Relation& rel, const SubstitutionScheme& scheme) {
    RefuteResult r = refute_open(c, e.lhs, e.rhs, rel, scheme);
    SoundResult s;
    s.sound = !r.refuted();
    s.witness = r.witness;
    s.tried = r.tried;
    return s;
}

SoundResult check_sound(const Equation& e, const Relation& rel, const Alphabet& alphabet, TransitionMode mode,
                        const SubstitutionScheme& scheme) {
    Checker c(alphabet, mode);
    return check_sound(c, e, rel, scheme);
}

// ---------------------------------------------------------------- saturation

AxiomSystem saturate(const AxiomSystem& system) {
    AxiomSystem out;
    out.name = system.name;
    out.alphabet = system.alphabet;
    out.mode = system.mode;
    std::set<std::pair<Term, Term>> seen;
    auto push = [&](const Equation& e) {
        if (seen.insert({e.lhs, e.rhs}).second) out.add(e);
    };
    for (const auto& e : system.equations) push(e);
    for (const auto& e : system.equations) {
        std::set<std::string> vs = vars(e.lhs);
        for (const auto& v : vars(e.rhs)) vs.insert(v);
        std::vector<std::string> names(vs.begin(), vs.end());
        for (std::size_t m = 0; m < (std::size_t{1} << names.size()); ++m) {
            Substitution sigma;
            std::string tag;
            for (std::size_t i = 0; i < names.size(); ++i)
                if (m & (std::size_t{1} << i)) {
                    sigma[names[i]] = Term::nil();
                    tag += (tag.empty() ? "" : ",") + names[i];
                }
            Equation d{e.id + "/0{" + tag + "}", strip_nil(substitute(e.lhs, sigma)), strip_nil(substitute(e.rhs, sigma)),
                       e.schema};
            if (seen.count({d.lhs, d.rhs})) continue;
            // ids stay unique even when two sources produce distinct equations with the same tag
            while (out.find(d.id)) d.id += "'";
            push(d);
        }
    }
    return out;
}

// ---------------------------------------------------------------- matching

bool match(const Term& pattern, const Term& t, Substitution& sigma) {
    switch (pattern.kind()) {
        case Kind::Var: {
            auto it = sigma.find(pattern.var_name());
            if (it != sigma.end()) return it->second == t;
            sigma.emplace(pattern.var_name(), t);
            return true;
        }
        case Kind::Nil:
            return t.is_nil();
        case Kind::Prefix:
            return t.is_prefix() && t.action() == pattern.action() && match(pattern.body(), t.body(), sigma);
        case Kind::Sum:
        case Kind::Par:
            return t.kind() == pattern.kind() && match(pattern.left(), t.left(), sigma) &&
                   match(pattern.right(), t.right(), sigma);
    }
    return false;
}

}  // namespace bccsp

namespace bccsp {

Equation parse_equation(std::string_view text, const Alphabet& alphabet, ParseOptions opts) {
    for (std::string_view sep : {"≈", "~=", "="}) {
        auto at = text.find(sep);
        if (at == std::string_view::npos) continue;
        Equation e;
        e.lhs = parse(text.substr(0, at), alphabet, opts);
        e.rhs = parse(text.substr(at + sep.size()), alphabet, opts);
        e.id = std::string(text);
        return e;
    }
    throw ParseError("expected an equation 'lhs = rhs'", 0);
}

}  // namespace bccsp

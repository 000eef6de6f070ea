#include "bccsp/derivations.hpp"

#include <map>
#include <mutex>

namespace bccsp {

namespace {

Term V(const std::string& n) { return Term::var(n); }
Term P(Symbol a, const Term& t) { return Term::prefix(a, t); }
Term S(std::initializer_list<Term> ts) { return Term::sum_of(std::vector<Term>(ts)); }
Term S(const std::vector<Term>& ts) { return Term::sum_of(ts); }

std::string schema_of(const std::string& id) { return id.substr(0, id.find('[')); }

// "RT[a;a,b]" -> {"a", "a", "b"}
std::vector<Symbol> args_of(const std::string& id) {
    std::vector<Symbol> out;
    auto open = id.find('[');
    if (open == std::string::npos) return out;
    std::string body = id.substr(open + 1, id.size() - open - 2);
    std::string cur;
    for (char c : body) {
        if (c == ',' || c == ';') {
            out.push_back(intern_action(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(intern_action(cur));
    return out;
}

std::string id_of(const std::string& schema, const std::vector<Symbol>& args) {
    std::string s = schema + "[";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + action_name(args[i]);
    return s + "]";
}

const Equation& axiom(const ProofBuilder& b, const std::string& id) {
    const Equation* e = b.system().find(id);
    if (!e) throw InternalError("derivation needs axiom " + id + " of " + b.system().name);
    return *e;
}

// Proves c.current() = other.current() by normalising both and joining.
std::size_t meet(Chain& c, Chain& other) {
    c.ac_to(other.current());
    c.then(c.builder()->sym(other.proof()));
    return c.proof();
}

std::size_t s_cs(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    // CS[a,b]: a(bx+y+z) = a(bx+y+z) + a(bx+z), from S[a] with x := bx+z.
    Symbol a = args[0], bb = args[1];
    Substitution s{{"x", S({P(bb, V("x")), V("z")})}, {"y", V("y")}};
    Chain c(&b, t.lhs);
    c.ac_to(substitute(axiom(b, id_of("S", {a})).lhs, s));
    c.rewrite(axiom(b, id_of("S", {a})), s, {});
    c.ac_to(t.rhs);
    return c.proof();
}

std::size_t s_csp1(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    Symbol a = args[0], bb = args[1], cc = args[2], d = args[3];
    Substitution s{{"x", S({P(a, V("x")), V("u")})},
                   {"y", S({P(bb, V("y")), V("u")})},
                   {"z", S({P(cc, V("z")), V("v")})},
                   {"w", S({P(d, V("w")), V("v")})}};
    const Equation& sp1 = axiom(b, "SP1");
    Chain c(&b, t.lhs);
    c.ac_to(substitute(sp1.lhs, s));
    c.rewrite(sp1, s, {});
    c.ac_to(t.rhs);
    return c.proof();
}

std::size_t s_csp2(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    Symbol a = args[0], bb = args[1], cc = args[2];
    Substitution s{{"x", V("x")}, {"y", S({P(bb, V("y")), V("w")})}, {"z", S({P(cc, V("z")), V("w")})}};
    const Equation& sp2 = axiom(b, id_of("SP2", {a}));
    Chain c(&b, t.lhs);
    c.ac_to(substitute(sp2.lhs, s));
    c.rewrite(sp2, s, {});
    c.ac_to(t.rhs);
    return c.proof();
}

std::size_t f_ft(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    // FT[a]: ax + ay = ax + ay + a(x+y), from F[a] with z := 0.
    const Equation& f = axiom(b, id_of("F", {args[0]}));
    Substitution s{{"x", V("x")}, {"y", V("y")}, {"z", Term::nil()}};
    Chain c(&b, t.lhs);
    c.ac_to(substitute(f.lhs, s));
    c.rewrite(f, s, {});
    c.ac_to(t.rhs);
    return c.proof();
}

std::size_t f_rs(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    // RS[a,b] right to left: a(bx+by+z) + a(bx+z) = a(bx+z) + a(by+(bx+z)) = a(bx+by+z) + a(by+(bx+z)) = a(bx+by+z).
    Symbol a = args[0], bb = args[1];
    const Equation& r = axiom(b, id_of("R", {a, bb}));
    Substitution s{{"x", V("x")}, {"z", V("z")}, {"y", V("y")}, {"w", S({P(bb, V("x")), V("z")})}};
    Chain c(&b, t.rhs);
    c.ac_to(substitute(r.lhs, s));
    c.rewrite(r, s, {});
    c.ac_to(t.lhs);
    return b.sym(c.proof());
}

std::size_t t_ct(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    // CT[a,b,c]: a(bx+z) + a(cy+w) = a(bx+cy+z+w), from T[a].
    Symbol a = args[0], bb = args[1], cc = args[2];
    const Equation& ta = axiom(b, id_of("T", {a}));
    Substitution s{{"x", S({P(bb, V("x")), V("z")})}, {"y", S({P(cc, V("y")), V("w")})}};
    Chain c(&b, t.lhs);
    c.rewrite(ta, s, {});
    c.ac_to(t.rhs);
    return c.proof();
}

std::size_t t_ctp(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    // CTP[a,b]: (ax+by+w) || z = (ax+w) || z + (by+w) || z, distributing with TP on both sides.
    Symbol a = args[0], bb = args[1];
    const Equation& tp = axiom(b, "TP");
    Term ax = P(a, V("x")), by = P(bb, V("y")), w = V("w"), z = V("z");
    Chain l(&b, t.lhs);
    l.rewrite(tp, {{"x", Term::sum(ax, by)}, {"y", w}, {"z", z}}, {});
    l.rewrite(tp, {{"x", ax}, {"y", by}, {"z", z}}, {0});
    Chain r(&b, t.rhs);
    r.rewrite(tp, {{"x", ax}, {"y", w}, {"z", z}}, {0});
    r.rewrite(tp, {{"x", by}, {"y", w}, {"z", z}}, {1});
    return meet(l, r);
}

// RT[a; b1..bn]: L = a(sum_i (bi xi + bi yi) + z) equals X + Y with
// X = a(sum_i bi xi + z) and Y = a(sum_i bi yi + z).
struct RtParts {
    Symbol a;
    std::vector<Symbol> bs;
    std::vector<Term> xs, ys;
    Term z = V("z");
};

RtParts rt_parts(const std::vector<Symbol>& args) {
    RtParts p;
    p.a = args[0];
    p.bs.assign(args.begin() + 1, args.end());
    for (std::size_t i = 0; i < p.bs.size(); ++i) {
        p.xs.push_back(V("x" + std::to_string(i + 1)));
        p.ys.push_back(V("y" + std::to_string(i + 1)));
    }
    return p;
}

// Sum of the prefixed terms plus z, as a body under a.
Term body_of(const std::vector<std::pair<Symbol, Term>>& parts, const Term& z) {
    std::vector<Term> ts;
    for (const auto& [b, x] : parts) ts.push_back(P(b, x));
    ts.push_back(z);
    return S(ts);
}

std::size_t r_rt(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    RtParts rp = rt_parts(args);
    const std::size_t n = rp.bs.size();
    // Chain from X + Y. Moves each bi yi into the left summand, then each bi xi into the right one.
    std::vector<std::pair<Symbol, Term>> left, right;
    for (std::size_t i = 0; i < n; ++i) left.push_back({rp.bs[i], rp.xs[i]});
    for (std::size_t i = 0; i < n; ++i) right.push_back({rp.bs[i], rp.ys[i]});
    Chain c(&b, t.rhs);
    auto grow = [&](std::vector<std::pair<Symbol, Term>>& into, const std::vector<std::pair<Symbol, Term>>& from,
                    const std::vector<Term>& add, const std::vector<Term>& pivot) {
        for (std::size_t i = 0; i < n; ++i) {
            // into = a(bi pivot_i + rest), from = a(bi add_i + w)
            std::vector<std::pair<Symbol, Term>> rest_into, rest_from;
            bool skipped = false;
            for (const auto& e : into) {
                if (!skipped && e.first == rp.bs[i] && e.second == pivot[i]) {
                    skipped = true;
                    continue;
                }
                rest_into.push_back(e);
            }
            skipped = false;
            for (const auto& e : from) {
                if (!skipped && e.first == rp.bs[i] && e.second == add[i]) {
                    skipped = true;
                    continue;
                }
                rest_from.push_back(e);
            }
            Substitution s{{"x", pivot[i]}, {"z", body_of(rest_into, rp.z)}, {"y", add[i]}, {"w", body_of(rest_from, rp.z)}};
            const Equation& r = axiom(b, id_of("R", {rp.a, rp.bs[i]}));
            c.ac_to(substitute(r.lhs, s));
            c.rewrite(r, s, {});
            into.push_back({rp.bs[i], add[i]});
        }
    };
    // X + Y -> L + Y
    grow(left, right, rp.ys, rp.xs);
    // L + Y -> L + L'
    grow(right, left, rp.xs, rp.ys);
    c.ac_to(t.lhs);
    return b.sym(c.proof());
}

std::size_t ft_rt(ProofBuilder& b, const Equation& t, const std::vector<Symbol>& args) {
    RtParts rp = rt_parts(args);
    const std::size_t n = rp.bs.size();
    const Term L = t.lhs;
    const Term XY = t.rhs;

    // Expansion of one summand T = a(b u + b v + rest) into T + a(b u + rest) + a(b v + rest), by RS twice.
    std::map<Term, std::size_t> expand_memo;
    auto expand = [&](const std::vector<std::pair<Symbol, Term>>& parts, std::size_t k) {
        Term T = P(rp.a, body_of(parts, rp.z));
        auto it = expand_memo.find(T);
        if (it != expand_memo.end()) return std::make_pair(it->second, b.conclusion(it->second).second);
        std::vector<std::pair<Symbol, Term>> rest;
        for (const auto& e : parts)
            if (!(e.first == rp.bs[k] && (e.second == rp.xs[k] || e.second == rp.ys[k]))) rest.push_back(e);
        Term R = body_of(rest, rp.z);
        const Equation& rs = axiom(b, id_of("RS", {rp.a, rp.bs[k]}));
        Chain c(&b, T);
        Substitution s1{{"x", rp.xs[k]}, {"y", rp.ys[k]}, {"z", R}};
        c.ac_to(substitute(rs.lhs, s1));
        c.rewrite(rs, s1, {});
        Substitution s2{{"x", rp.ys[k]}, {"y", rp.xs[k]}, {"z", R}};
        c.ac_at({0}, substitute(rs.lhs, s2));
        c.rewrite(rs, s2, {0});
        Term target = S({T, P(rp.a, Term::sum(P(rp.bs[k], rp.xs[k]), R)), P(rp.a, Term::sum(P(rp.bs[k], rp.ys[k]), R))});
        c.ac_to(target);
        std::size_t step = c.proof();
        expand_memo.emplace(T, step);
        return std::make_pair(step, target);
    };

    // E: L = L + intermediates + all 2^n combinations.
    Chain e(&b, L);
    std::vector<std::vector<std::pair<Symbol, Term>>> frontier;
    {
        std::vector<std::pair<Symbol, Term>> all;
        for (std::size_t i = 0; i < n; ++i) {
            all.push_back({rp.bs[i], rp.xs[i]});
            all.push_back({rp.bs[i], rp.ys[i]});
        }
        frontier.push_back(all);
    }
    std::vector<Term> summands_now{L};
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::vector<std::pair<Symbol, Term>>> next;
        for (const auto& parts : frontier) {
            Term T = P(rp.a, body_of(parts, rp.z));
            auto [step, expanded] = expand(parts, k);
            // Bring T to the front: T + others.
            std::vector<Term> others;
            bool dropped = false;
            for (const auto& s : summands_now) {
                if (!dropped && s == T) {
                    dropped = true;
                    continue;
                }
                others.push_back(s);
            }
            Term shape = others.empty() ? T : Term::sum(T, S(others));
            e.ac_to(shape);
            if (others.empty())
                e.then(step);
            else
                e.then(b.lift(step, e.current(), {0}));
            summands_now = others;
            summands_now.insert(summands_now.begin(), expanded);
            for (int which = 0; which < 2; ++which) {
                std::vector<std::pair<Symbol, Term>> p2;
                bool cut = false;
                for (const auto& x : parts) {
                    if (!cut && x.first == rp.bs[k] && x.second == (which == 0 ? rp.ys[k] : rp.xs[k])) {
                        cut = true;
                        continue;
                    }
                    p2.push_back(x);
                }
                next.push_back(p2);
            }
        }
        frontier = std::move(next);
    }
    std::size_t expansion = e.proof();
    Term W = e.current();

    Chain c(&b, L);
    c.then(expansion);
    c.ac_to(Term::sum(XY, W));
    c.rewrite(Equation{"expansion", L, W, ""}, {}, {1}, true, expansion);
    // X + Y + L -> X + Y by FT[a] backwards.
    const Equation& ft = axiom(b, id_of("FT", {rp.a}));
    Substitution s{{"x", XY.left().body()}, {"y", XY.right().body()}};
    c.ac_to(substitute(ft.rhs, s));
    c.rewrite(ft, s, {}, true);
    c.ac_to(XY);
    return c.proof();
}

using Deriver = std::size_t (*)(ProofBuilder&, const Equation&, const std::vector<Symbol>&);

const std::map<std::pair<std::string, std::string>, Deriver>& derivers() {
    static const std::map<std::pair<std::string, std::string>, Deriver> m = {
        {{"S", "CS"}, s_cs},  {{"S", "CSP1"}, s_csp1}, {{"S", "CSP2"}, s_csp2}, {{"F", "FT"}, f_ft},
        {{"F", "RS"}, f_rs},  {{"T", "CT"}, t_ct},     {{"T", "CTP"}, t_ctp},   {{"R", "RT"}, r_rt},
        {{"FT", "RT"}, ft_rt},
    };
    return m;
}

}  // namespace

std::string defining_family(const std::string& id) {
    std::string s = schema_of(id);
    if (s == "CS" || s == "CSP1" || s == "CSP2") return "CS";
    if (s == "RS" || s == "RSP1" || s == "RSP2") return "RS";
    if (s == "CT" || s == "CTP") return "CT";
    if (s == "T" || s == "TP") return "T";
    if (s == "S" || s == "SP1" || s == "SP2") return "S";
    if (s == "RT") return "RT";
    if (s == "FP" || s == "EL2" || s == "ELC2") return "RT";
    if (s == "FT") return "FT";
    if (s == "R") return "R";
    if (s == "F") return "F";
    if (s == "EL1" || s == "ELC1" || s == "ELC1tau") return "CT";
    return "";
}

Equation schema_instance(const std::string& id, const Alphabet& alphabet, TransitionMode mode) {
    std::string fam = defining_family(id);
    if (fam.empty()) {
        auto e1 = build_system("E1", alphabet, mode);
        if (const Equation* e = e1.find(id)) return *e;
        throw std::invalid_argument("unknown axiom instance '" + id + "'");
    }
    static std::mutex mu;
    static std::map<std::string, AxiomSystem> cache;
    const bool sync = mode == TransitionMode::CcsSync;
    std::string name = (sync ? "Ec_" : "E_") + fam;
    std::string key = name + "/" + alphabet.describe();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_system(name, alphabet, mode)).first;
    const Equation* e = it->second.find(id);
    if (!e) throw std::invalid_argument("unknown axiom instance '" + id + "'");
    return *e;
}

bool derivable(const std::string& family, const std::string& schema) {
    return derivers().count({family, schema}) > 0;
}

std::size_t derive_instance(ProofBuilder& b, const Equation& target) {
    std::string fam = system_family(b.system().name);
    auto it = derivers().find({fam, target.schema});
    if (it == derivers().end())
        throw std::invalid_argument("no derivation of " + target.schema + " in " + b.system().name);
    std::size_t step = it->second(b, target, args_of(target.id));
    const auto& c = b.conclusion(step);
    if (c.first != target.lhs || c.second != target.rhs) throw InternalError("derivation of " + target.id + " went astray");
    return step;
}

ProofScript derivation_script(const std::string& system, const std::string& id, const Alphabet& alphabet,
                              TransitionMode mode) {
    AxiomSystem sys = build_system(system, alphabet, mode);
    ProofBuilder b(sys);
    Equation target = schema_instance(id, alphabet, mode);
    std::size_t step = derive_instance(b, target);
    return b.script_for(step);
}

std::vector<std::pair<std::string, std::string>> derivation_cases(const Alphabet& alphabet, bool sync) {
    const TransitionMode mode = sync ? TransitionMode::CcsSync : TransitionMode::Interleaving;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, fn] : derivers()) {
        const auto& [fam, schema] = key;
        std::string defining = (sync ? "Ec_" : "E_") + defining_family(schema + "[");
        AxiomSystem d = build_system(defining, alphabet, mode);
        for (const auto& e : d.equations)
            if (e.schema == schema) out.emplace_back((sync ? "Ec_" : "E_") + fam, e.id);
    }
    return out;
}

}  // namespace bccsp

#include "bccsp/equivalences.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace bccsp {

// ---------------------------------------------------------------- Relation

Relation Relation::parse(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    static const std::map<std::string, RelKind> simple = {
        {"T", RelKind::T},   {"CT", RelKind::CT}, {"F", RelKind::F},   {"R", RelKind::R},
        {"FT", RelKind::FT}, {"RT", RelKind::RT}, {"S", RelKind::S},   {"CS", RelKind::CS},
        {"RS", RelKind::RS}, {"PF", RelKind::PF}, {"B", RelKind::B},
    };
    if (auto it = simple.find(s); it != simple.end()) return Relation{it->second, 0};
    auto nested = [&](const std::string& prefix, RelKind k) -> std::optional<Relation> {
        if (s.rfind(prefix, 0) != 0) return std::nullopt;
        std::string rest = s.substr(prefix.size());
        if (!rest.empty() && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::nullopt;
        return Relation{k, static_cast<unsigned>(std::stoul(rest))};
    };
    for (const auto& [p, k] : std::vector<std::pair<std::string, RelKind>>{
             {"NESTEDT", RelKind::NestedT}, {"NESTEDS", RelKind::NestedS}, {"NT", RelKind::NestedT}, {"NS", RelKind::NestedS}})
        if (auto r = nested(p, k)) return *r;
    throw std::invalid_argument("unknown relation '" + raw + "'");
}

std::string Relation::name() const {
    switch (kind) {
        case RelKind::T:
            return "T";
        case RelKind::CT:
            return "CT";
        case RelKind::F:
            return "F";
        case RelKind::R:
            return "R";
        case RelKind::FT:
            return "FT";
        case RelKind::RT:
            return "RT";
        case RelKind::S:
            return "S";
        case RelKind::CS:
            return "CS";
        case RelKind::RS:
            return "RS";
        case RelKind::PF:
            return "PF";
        case RelKind::B:
            return "B";
        case RelKind::NestedT:
            return "NT" + std::to_string(n);
        case RelKind::NestedS:
            return "NS" + std::to_string(n);
    }
    return "?";
}

// ---------------------------------------------------------------- Checker

namespace {

std::string encode_set(ActionSet s) {
    std::string out(4, '\0');
    for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((s >> (8 * i)) & 0xff);
    return out;
}

ActionSet decode_set(const std::string& s, std::size_t at) {
    ActionSet v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<ActionSet>(static_cast<unsigned char>(s[at + i])) << (8 * i);
    return v;
}

template <class E>
struct SetTable {
    std::vector<std::shared_ptr<const std::vector<E>>> sets;
    std::vector<int> cls;
    std::map<std::vector<E>, int> ids;

    void ensure(std::size_t n) {
        if (sets.size() < n) {
            sets.resize(n);
            cls.resize(n, -1);
        }
    }
    int intern(const std::vector<E>& v) { return ids.emplace(v, static_cast<int>(ids.size())).first->second; }
    void clear() {
        sets.clear();
        cls.clear();
        ids.clear();
    }
};

template <class E>
void normalise(std::vector<E>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Maximal elements of a family of sets (under inclusion).
std::vector<ActionSet> maximal(std::vector<ActionSet> xs) {
    normalise(xs);
    std::vector<ActionSet> out;
    for (ActionSet x : xs) {
        bool dominated = false;
        for (ActionSet y : xs)
            if (y != x && (x & y) == x) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(x);
    }
    return out;
}

}  // namespace

struct Checker::Impl {
    ProcessStore& st;
    SetTable<std::string> T, CT, RT;
    SetTable<std::pair<std::string, ActionSet>> R;
    SetTable<std::pair<std::string, int>> PF;
    std::vector<SetTable<std::pair<std::string, int>>> nested;  // nested[k]: level k+1
    std::vector<int> f_cls, ft_cls;
    std::map<std::vector<std::pair<std::string, ActionSet>>, int> f_ids;
    std::map<std::vector<std::pair<std::string, std::vector<ActionSet>>>, int> ft_ids;
    std::unordered_map<std::uint64_t, bool> sim[3];
    std::unordered_map<std::uint64_t, bool> fsim;
    std::vector<std::unordered_map<std::uint64_t, bool>> nsim;

    explicit Impl(ProcessStore& s) : st(s) {}

    static std::uint64_t key(NodeId a, NodeId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

    template <class E, class F>
    const std::vector<E>& compute(SetTable<E>& tab, NodeId s, F build) {
        tab.ensure(st.size());
        if (tab.sets[s]) return *tab.sets[s];
        std::vector<E> v = build(s);
        normalise(v);
        tab.sets[s] = std::make_shared<const std::vector<E>>(std::move(v));
        return *tab.sets[s];
    }

    template <class E, class F>
    int class_of(SetTable<E>& tab, NodeId s, F build) {
        const auto& v = compute(tab, s, build);
        if (tab.cls[s] < 0) tab.cls[s] = tab.intern(v);
        return tab.cls[s];
    }

    const std::vector<std::string>& traces(NodeId s) {
        return compute(T, s, [&](NodeId n) {
            std::vector<std::string> out{std::string()};
            for (const auto& e : st.edges(n))
                for (const auto& tr : traces(e.to)) out.push_back(static_cast<char>(e.action) + tr);
            return out;
        });
    }
    int t_class(NodeId s) {
        traces(s);
        return class_of(T, s, [](NodeId) { return std::vector<std::string>{}; });
    }

    const std::vector<std::string>& completed(NodeId s) {
        return compute(CT, s, [&](NodeId n) {
            std::vector<std::string> out;
            if (st.edges(n).empty()) out.emplace_back();
            for (const auto& e : st.edges(n))
                for (const auto& tr : completed(e.to)) out.push_back(static_cast<char>(e.action) + tr);
            return out;
        });
    }
    int ct_class(NodeId s) {
        completed(s);
        return class_of(CT, s, [](NodeId) { return std::vector<std::string>{}; });
    }

    const std::vector<std::pair<std::string, ActionSet>>& readies(NodeId s) {
        return compute(R, s, [&](NodeId n) {
            std::vector<std::pair<std::string, ActionSet>> out{{std::string(), st.initials(n)}};
            for (const auto& e : st.edges(n))
                for (const auto& [tr, x] : readies(e.to)) out.emplace_back(static_cast<char>(e.action) + tr, x);
            return out;
        });
    }
    int r_class(NodeId s) {
        readies(s);
        return class_of(R, s, [](NodeId) { return std::vector<std::pair<std::string, ActionSet>>{}; });
    }

    int f_class(NodeId s) {
        if (f_cls.size() < st.size()) f_cls.resize(st.size(), -1);
        if (f_cls[s] >= 0) return f_cls[s];
        const ActionSet all = st.alphabet().all();
        std::map<std::string, std::vector<ActionSet>> by_trace;
        for (const auto& [tr, x] : readies(s)) by_trace[tr].push_back(all & ~x);
        std::vector<std::pair<std::string, ActionSet>> key;
        for (auto& [tr, xs] : by_trace)
            for (ActionSet m : maximal(xs)) key.emplace_back(tr, m);
        f_cls[s] = f_ids.emplace(key, static_cast<int>(f_ids.size())).first->second;
        return f_cls[s];
    }

    // Ready trace X0 a1 X1 ... an Xn encoded as 4 bytes per set and 1 per action.
    const std::vector<std::string>& ready_traces(NodeId s) {
        return compute(RT, s, [&](NodeId n) {
            std::string here = encode_set(st.initials(n));
            std::vector<std::string> out{here};
            for (const auto& e : st.edges(n))
                for (const auto& tr : ready_traces(e.to)) out.push_back(here + static_cast<char>(e.action) + tr);
            return out;
        });
    }
    int rt_class(NodeId s) {
        ready_traces(s);
        return class_of(RT, s, [](NodeId) { return std::vector<std::string>{}; });
    }

    int ft_class(NodeId s) {
        if (ft_cls.size() < st.size()) ft_cls.resize(st.size(), -1);
        if (ft_cls[s] >= 0) return ft_cls[s];
        const ActionSet all = st.alphabet().all();
        std::map<std::string, std::vector<std::vector<ActionSet>>> by_trace;
        for (const auto& enc : ready_traces(s)) {
            std::string acts;
            std::vector<ActionSet> refusals;
            std::size_t i = 0;
            while (true) {
                refusals.push_back(all & ~decode_set(enc, i));
                i += 4;
                if (i >= enc.size()) break;
                acts += enc[i];
                i += 1;
            }
            by_trace[acts].push_back(std::move(refusals));
        }
        std::vector<std::pair<std::string, std::vector<ActionSet>>> key;
        for (auto& [acts, seqs] : by_trace) {
            normalise(seqs);
            for (const auto& x : seqs) {
                bool dominated = false;
                for (const auto& y : seqs) {
                    if (&x == &y) continue;
                    bool below = true;
                    for (std::size_t k = 0; k < x.size() && below; ++k) below = (x[k] & y[k]) == x[k];
                    if (below) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) key.emplace_back(acts, x);
            }
        }
        ft_cls[s] = ft_ids.emplace(key, static_cast<int>(ft_ids.size())).first->second;
        return ft_cls[s];
    }

    const std::vector<std::pair<std::string, int>>& futures(NodeId s) {
        return compute(PF, s, [&](NodeId n) {
            std::vector<std::pair<std::string, int>> out{{std::string(), t_class(n)}};
            for (const auto& e : st.edges(n))
                for (const auto& [tr, c] : futures(e.to)) out.emplace_back(static_cast<char>(e.action) + tr, c);
            return out;
        });
    }
    int pf_class(NodeId s) {
        futures(s);
        return class_of(PF, s, [](NodeId) { return std::vector<std::pair<std::string, int>>{}; });
    }

    // Class of s under n-nested trace equivalence.
    int nested_class(NodeId s, unsigned n) {
        if (n == 0) return 0;
        while (nested.size() < n) nested.emplace_back();
        auto& tab = nested[n - 1];
        auto derivs = [&](auto& self, NodeId m) -> const std::vector<std::pair<std::string, int>>& {
            return compute(tab, m, [&](NodeId k) {
                std::vector<std::pair<std::string, int>> out{{std::string(), nested_class(k, n - 1)}};
                for (const auto& e : st.edges(k))
                    for (const auto& [tr, c] : self(self, e.to)) out.emplace_back(static_cast<char>(e.action) + tr, c);
                return out;
            });
        };
        derivs(derivs, s);
        auto& t2 = nested[n - 1];
        if (t2.cls[s] < 0) t2.cls[s] = t2.intern(*t2.sets[s]);
        return t2.cls[s];
    }

    bool side(SimFlavor f, NodeId p, NodeId q) const {
        switch (f) {
            case SimFlavor::S:
                return true;
            case SimFlavor::CS:
                return st.initials(p) != 0 || st.initials(q) == 0;
            case SimFlavor::RS:
                return st.initials(p) == st.initials(q);
        }
        return false;
    }

    template <class Rec>
    bool step_match(NodeId p, NodeId q, Rec rec) {
        const auto& ep = st.edges(p);
        const auto& eq = st.edges(q);
        for (const auto& e : ep) {
            bool found = false;
            auto lo = std::lower_bound(eq.begin(), eq.end(), Edge{e.action, 0});
            for (auto it = lo; it != eq.end() && it->action == e.action; ++it)
                if (rec(e.to, it->to)) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    }

    bool preorder(SimFlavor f, NodeId p, NodeId q) {
        if (p == q) return true;
        auto& memo = sim[static_cast<int>(f)];
        auto k = key(p, q);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
        bool ok = side(f, p, q) && step_match(p, q, [&](NodeId a, NodeId b) { return preorder(f, a, b); });
        memo.emplace(k, ok);
        return ok;
    }

    bool failure_sim(NodeId p, NodeId q) {
        if (p == q) return true;
        auto k = key(p, q);
        if (auto it = fsim.find(k); it != fsim.end()) return it->second;
        const ActionSet all = st.alphabet().all();
        bool ok = true;
        // Every set refused by p must be refused by q.
        for (ActionSet x = all;; x = (x - 1) & all) {
            if ((st.initials(p) & x) == 0 && (st.initials(q) & x) != 0) {
                ok = false;
                break;
            }
            if (x == 0) break;
        }
        ok = ok && step_match(p, q, [&](NodeId a, NodeId b) { return failure_sim(a, b); });
        fsim.emplace(k, ok);
        return ok;
    }

    bool nested_sim(NodeId p, NodeId q, unsigned n) {
        if (n == 0 || p == q) return true;
        while (nsim.size() < n) nsim.emplace_back();
        auto k = key(p, q);
        if (auto it = nsim[n - 1].find(k); it != nsim[n - 1].end()) return it->second;
        bool ok = nested_sim(q, p, n - 1) && step_match(p, q, [&](NodeId a, NodeId b) { return nested_sim(a, b, n); });
        nsim[n - 1].emplace(k, ok);
        return ok;
    }

    void clear() {
        T.clear();
        CT.clear();
        RT.clear();
        R.clear();
        PF.clear();
        nested.clear();
        f_cls.clear();
        ft_cls.clear();
        f_ids.clear();
        ft_ids.clear();
        for (auto& m : sim) m.clear();
        fsim.clear();
        nsim.clear();
    }
};

Checker::Checker(Alphabet alphabet, TransitionMode mode)
    : store_(std::move(alphabet), mode), impl_(std::make_shared<Impl>(store_)) {}

void Checker::reset() {
    store_ = ProcessStore(store_.alphabet(), store_.mode());
    impl_ = std::make_shared<Impl>(store_);
}

bool Checker::preorder(NodeId p, NodeId q, SimFlavor f) { return impl_->preorder(f, p, q); }
bool Checker::failure_sim(NodeId p, NodeId q) { return impl_->failure_sim(p, q); }
bool Checker::nested_sim(NodeId p, NodeId q, unsigned n) { return impl_->nested_sim(p, q, n); }

int Checker::class_id(NodeId p, const Relation& rel) {
    switch (rel.kind) {
        case RelKind::T:
            return impl_->t_class(p);
        case RelKind::CT:
            return impl_->ct_class(p);
        case RelKind::F:
            return impl_->f_class(p);
        case RelKind::R:
            return impl_->r_class(p);
        case RelKind::FT:
            return impl_->ft_class(p);
        case RelKind::RT:
            return impl_->rt_class(p);
        case RelKind::PF:
            return impl_->pf_class(p);
        case RelKind::NestedT:
            return impl_->nested_class(p, rel.n);
        case RelKind::B:
            return static_cast<int>(p);
        default:
            throw std::invalid_argument("relation " + rel.name() + " has no class identifiers");
    }
}

bool Checker::equivalent(NodeId p, NodeId q, const Relation& rel) {
    if (p == q) return true;
    switch (rel.kind) {
        case RelKind::S:
            return preorder(p, q, SimFlavor::S) && preorder(q, p, SimFlavor::S);
        case RelKind::CS:
            return preorder(p, q, SimFlavor::CS) && preorder(q, p, SimFlavor::CS);
        case RelKind::RS:
            return preorder(p, q, SimFlavor::RS) && preorder(q, p, SimFlavor::RS);
        case RelKind::NestedS:
            return nested_sim(p, q, rel.n) && nested_sim(q, p, rel.n);
        case RelKind::B:
            return false;
        default:
            return class_id(p, rel) == class_id(q, rel);
    }
}

// ---------------------------------------------------------------- term API

namespace {
Relation relation_of(ObsKind k) {
    switch (k) {
        case ObsKind::F:
            return Relation::of(RelKind::F);
        case ObsKind::R:
            return Relation::of(RelKind::R);
        case ObsKind::FT:
            return Relation::of(RelKind::FT);
        case ObsKind::RT:
            return Relation::of(RelKind::RT);
        case ObsKind::PF:
            return Relation::of(RelKind::PF);
    }
    return Relation::of(RelKind::T);
}

RelKind flavor_kind(SimFlavor f) {
    switch (f) {
        case SimFlavor::S:
            return RelKind::S;
        case SimFlavor::CS:
            return RelKind::CS;
        case SimFlavor::RS:
            return RelKind::RS;
    }
    return RelKind::S;
}
}  // namespace

bool equivalent(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode) {
    require_closed(p);
    require_closed(q);
    Checker c(alphabet, mode);
    return c.equivalent(c.node(p), c.node(q), rel);
}

bool decorated_eq(const Term& p, const Term& q, ObsKind kind, const Alphabet& alphabet, TransitionMode mode) {
    return equivalent(p, q, relation_of(kind), alphabet, mode);
}

bool trace_eq(const Term& p, const Term& q, bool completed, const Alphabet& alphabet, TransitionMode mode) {
    return equivalent(p, q, Relation::of(completed ? RelKind::CT : RelKind::T), alphabet, mode);
}

bool simulation_preorder(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode) {
    require_closed(p);
    require_closed(q);
    Checker c(alphabet, mode);
    return c.preorder(c.node(p), c.node(q), f);
}

bool sim_eq(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode) {
    return equivalent(p, q, Relation::of(flavor_kind(f)), alphabet, mode);
}

bool bisimilar(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode) {
    return equivalent(p, q, Relation::of(RelKind::B), alphabet, mode);
}

bool nested_trace_eq(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode) {
    return equivalent(p, q, Relation::of(RelKind::NestedT, n), alphabet, mode);
}

bool nested_sim_preorder(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode) {
    require_closed(p);
    require_closed(q);
    Checker c(alphabet, mode);
    return c.nested_sim(c.node(p), c.node(q), n);
}

// ---------------------------------------------------------------- reference

namespace reference {

namespace {

struct Joint {
    Lts lts;
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<ActionSet> init;
};

Joint joint(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode) {
    Joint j;
    j.lts = build_joint_lts({p, q}, alphabet, mode);
    j.p = j.lts.index.at(p);
    j.q = j.lts.index.at(q);
    for (std::size_t s = 0; s < j.lts.size(); ++s) {
        ActionSet x = 0;
        for (const auto& [a, d] : j.lts.successors[s]) x |= ActionSet{1} << *alphabet.index_of(a);
        j.init.push_back(x);
    }
    return j;
}

using Matrix = std::vector<std::vector<char>>;

// Greatest relation inside `start` that is closed under the simulation step.
Matrix greatest_simulation(const Lts& lts, Matrix rel) {
    const std::size_t n = lts.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = 0; t < n; ++t) {
                if (!rel[s][t]) continue;
                for (const auto& [a, s2] : lts.successors[s]) {
                    bool matched = false;
                    for (const auto& [b, t2] : lts.successors[t])
                        if (a == b && rel[s2][t2]) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        rel[s][t] = 0;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return rel;
}

Matrix simulation_matrix(const Joint& j, const std::function<bool(std::size_t, std::size_t)>& side) {
    const std::size_t n = j.lts.size();
    Matrix rel(n, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) rel[s][t] = side(s, t) ? 1 : 0;
    return greatest_simulation(j.lts, std::move(rel));
}

Matrix nested_matrix(const Joint& j, unsigned n) {
    const std::size_t size = j.lts.size();
    Matrix m(size, std::vector<char>(size, 1));
    for (unsigned k = 1; k <= n; ++k) {
        Matrix start(size, std::vector<char>(size, 0));
        for (std::size_t s = 0; s < size; ++s)
            for (std::size_t t = 0; t < size; ++t) start[s][t] = m[t][s];
        m = greatest_simulation(j.lts, std::move(start));
    }
    return m;
}

std::vector<int> nested_classes(const Lts& lts, unsigned n) {
    std::vector<int> cls(lts.size(), 0);
    for (unsigned k = 1; k <= n; ++k) {
        using Pairs = std::set<std::pair<Trace, int>>;
        std::vector<std::optional<Pairs>> memo(lts.size());
        std::function<const Pairs&(std::size_t)> go = [&](std::size_t s) -> const Pairs& {
            if (memo[s]) return *memo[s];
            Pairs out;
            out.emplace(Trace{}, cls[s]);
            for (const auto& [a, d] : lts.successors[s])
                for (const auto& [tr, c] : go(d)) {
                    Trace x{a};
                    x.insert(x.end(), tr.begin(), tr.end());
                    out.emplace(std::move(x), c);
                }
            memo[s] = std::move(out);
            return *memo[s];
        };
        std::map<Pairs, int> ids;
        std::vector<int> next(lts.size());
        for (std::size_t s = 0; s < lts.size(); ++s) next[s] = ids.emplace(go(s), static_cast<int>(ids.size())).first->second;
        cls = std::move(next);
    }
    return cls;
}

}  // namespace

bool decorated_eq(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode) {
    switch (rel.kind) {
        case RelKind::T:
            return traces(p, alphabet, mode) == traces(q, alphabet, mode);
        case RelKind::CT:
            return completed_traces(p, alphabet, mode) == completed_traces(q, alphabet, mode);
        case RelKind::F:
            return failure_pairs(p, alphabet, mode) == failure_pairs(q, alphabet, mode);
        case RelKind::R:
            return ready_pairs(p, alphabet, mode) == ready_pairs(q, alphabet, mode);
        case RelKind::FT:
            return failure_traces(p, alphabet, mode) == failure_traces(q, alphabet, mode);
        case RelKind::RT:
            return ready_traces(p, alphabet, mode) == ready_traces(q, alphabet, mode);
        case RelKind::PF:
            return possible_futures(p, alphabet, mode) == possible_futures(q, alphabet, mode);
        default:
            throw std::invalid_argument(rel.name() + " is not a decorated-trace relation");
    }
}

bool simulation_preorder(const Term& p, const Term& q, SimFlavor f, const Alphabet& alphabet, TransitionMode mode) {
    Joint j = joint(p, q, alphabet, mode);
    Matrix m = simulation_matrix(j, [&](std::size_t s, std::size_t t) {
        switch (f) {
            case SimFlavor::S:
                return true;
            case SimFlavor::CS:
                return j.init[s] != 0 || j.init[t] == 0;
            case SimFlavor::RS:
                return j.init[s] == j.init[t];
        }
        return false;
    });
    return m[j.p][j.q];
}

bool failure_sim_preorder(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode) {
    Joint j = joint(p, q, alphabet, mode);
    const ActionSet all = alphabet.all();
    Matrix m = simulation_matrix(j, [&](std::size_t s, std::size_t t) {
        for (ActionSet x = all;; x = (x - 1) & all) {
            if ((j.init[s] & x) == 0 && (j.init[t] & x) != 0) return false;
            if (x == 0) break;
        }
        return true;
    });
    return m[j.p][j.q];
}

bool bisimilar(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode) {
    Joint j = joint(p, q, alphabet, mode);
    const std::size_t n = j.lts.size();
    std::vector<int> block(n, 0);
    std::size_t blocks = 1;
    while (true) {
        std::map<std::pair<int, std::set<std::pair<Symbol, int>>>, int> sig;
        std::vector<int> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::set<std::pair<Symbol, int>> out;
            for (const auto& [a, d] : j.lts.successors[s]) out.emplace(a, block[d]);
            next[s] = sig.emplace(std::make_pair(block[s], out), static_cast<int>(sig.size())).first->second;
        }
        block = std::move(next);
        if (sig.size() == blocks) break;
        blocks = sig.size();
    }
    return block[j.p] == block[j.q];
}

bool nested_trace_eq(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode) {
    Joint j = joint(p, q, alphabet, mode);
    auto cls = nested_classes(j.lts, n);
    return cls[j.p] == cls[j.q];
}

bool nested_sim_preorder(const Term& p, const Term& q, unsigned n, const Alphabet& alphabet, TransitionMode mode) {
    Joint j = joint(p, q, alphabet, mode);
    return nested_matrix(j, n)[j.p][j.q];
}

bool equivalent(const Term& p, const Term& q, const Relation& rel, const Alphabet& alphabet, TransitionMode mode) {
    switch (rel.kind) {
        case RelKind::S:
        case RelKind::CS:
        case RelKind::RS: {
            SimFlavor f = rel.kind == RelKind::S ? SimFlavor::S : rel.kind == RelKind::CS ? SimFlavor::CS : SimFlavor::RS;
            return reference::simulation_preorder(p, q, f, alphabet, mode) && reference::simulation_preorder(q, p, f, alphabet, mode);
        }
        case RelKind::B:
            return reference::bisimilar(p, q, alphabet, mode);
        case RelKind::NestedT:
            return reference::nested_trace_eq(p, q, rel.n, alphabet, mode);
        case RelKind::NestedS:
            return reference::nested_sim_preorder(p, q, rel.n, alphabet, mode) && reference::nested_sim_preorder(q, p, rel.n, alphabet, mode);
        default:
            return decorated_eq(p, q, rel, alphabet, mode);
    }
}

}  // namespace reference

// ---------------------------------------------------------------- spectrum

std::vector<Relation> spectrum_relations(unsigned nested_max) {
    std::vector<Relation> out;
    for (RelKind k : {RelKind::T, RelKind::CT, RelKind::F, RelKind::R, RelKind::FT, RelKind::RT, RelKind::S, RelKind::CS,
                      RelKind::RS, RelKind::PF, RelKind::B})
        out.push_back(Relation::of(k));
    for (unsigned n = 0; n <= nested_max; ++n) out.push_back(Relation::of(RelKind::NestedT, n));
    for (unsigned n = 0; n <= nested_max; ++n) out.push_back(Relation::of(RelKind::NestedS, n));
    return out;
}

std::vector<std::pair<Relation, Relation>> spectrum_arrows(unsigned nested_max) {
    auto r = [](RelKind k, unsigned n = 0) { return Relation::of(k, n); };
    std::vector<std::pair<Relation, Relation>> out = {
        {r(RelKind::RS), r(RelKind::RT)}, {r(RelKind::RS), r(RelKind::CS)}, {r(RelKind::RT), r(RelKind::FT)},
        {r(RelKind::RT), r(RelKind::R)},  {r(RelKind::FT), r(RelKind::F)},  {r(RelKind::R), r(RelKind::F)},
        {r(RelKind::F), r(RelKind::CT)},  {r(RelKind::CT), r(RelKind::T)},  {r(RelKind::CS), r(RelKind::S)},
        {r(RelKind::CS), r(RelKind::CT)}, {r(RelKind::S), r(RelKind::T)},   {r(RelKind::PF), r(RelKind::R)},
    };
    if (nested_max >= 1) {
        out.push_back({r(RelKind::NestedT, 1), r(RelKind::T)});
        out.push_back({r(RelKind::T), r(RelKind::NestedT, 1)});
        out.push_back({r(RelKind::NestedS, 1), r(RelKind::S)});
        out.push_back({r(RelKind::S), r(RelKind::NestedS, 1)});
    }
    if (nested_max >= 2) {
        out.push_back({r(RelKind::NestedT, 2), r(RelKind::PF)});
        out.push_back({r(RelKind::PF), r(RelKind::NestedT, 2)});
        out.push_back({r(RelKind::NestedS, 2), r(RelKind::RS)});
        out.push_back({r(RelKind::NestedS, 2), r(RelKind::PF)});
    } else {
        out.push_back({r(RelKind::B), r(RelKind::RS)});
        out.push_back({r(RelKind::B), r(RelKind::PF)});
    }
    out.push_back({r(RelKind::B), r(RelKind::NestedS, nested_max)});
    for (unsigned n = 0; n < nested_max; ++n) {
        out.push_back({r(RelKind::NestedS, n + 1), r(RelKind::NestedS, n)});
        out.push_back({r(RelKind::NestedT, n + 1), r(RelKind::NestedT, n)});
    }
    for (unsigned n = 0; n <= nested_max; ++n) out.push_back({r(RelKind::NestedS, n), r(RelKind::NestedT, n)});
    return out;
}

void check_spectrum_consistency(const SpectrumVector& v, unsigned nested_max) {
    for (const auto& [fine, coarse] : spectrum_arrows(nested_max)) {
        auto a = v.find(fine);
        auto b = v.find(coarse);
        if (a == v.end() || b == v.end()) continue;
        if (a->second && !b->second)
            throw InternalError("spectrum arrow violated: " + fine.name() + " holds but " + coarse.name() + " does not");
    }
}

SpectrumVector spectrum_vector(Checker& c, NodeId p, NodeId q, unsigned nested_max) {
    SpectrumVector v;
    for (const auto& rel : spectrum_relations(nested_max)) v[rel] = c.equivalent(p, q, rel);
    check_spectrum_consistency(v, nested_max);
    return v;
}

SpectrumVector spectrum_vector(const Term& p, const Term& q, const Alphabet& alphabet, TransitionMode mode,
                               unsigned nested_max) {
    require_closed(p);
    require_closed(q);
    Checker c(alphabet, mode);
    return spectrum_vector(c, c.node(p), c.node(q), nested_max);
}

// ---------------------------------------------------------------- refute_open

SubstitutionScheme default_scheme(const Alphabet& alphabet) {
    const auto& prim = alphabet.primary();
    Symbol a = alphabet.symbol(prim.at(0));
    Symbol b = prim.size() > 1 ? alphabet.symbol(prim[1])
                               : (alphabet.sync_mode() ? alphabet.symbol(alphabet.complement(prim[0])) : a);
    auto P = [](Symbol s, Term t) { return Term::prefix(s, std::move(t)); };
    Term nil = Term::nil();
    Term ab = Term::sum(P(a, nil), P(b, nil));
    SubstitutionScheme s;
    s.pool = {nil, P(a, nil), P(b, nil), P(a, P(a, nil)), ab, P(b, ab)};
    s.deep_tags = true;
    s.tag_action = a;
    return s;
}

RefuteResult refute_open(Checker& c, const Term& t, const Term& u, const Relation& rel,
                         const SubstitutionScheme& scheme) {
    std::set<std::string> vs = vars(t);
    for (const auto& v : vars(u)) vs.insert(v);
    std::vector<std::string> names(vs.begin(), vs.end());
    const std::uint32_t d = 1 + std::max(depth(t), depth(u));

    std::vector<std::vector<Term>> cand(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        cand[i] = scheme.pool;
        if (scheme.deep_tags) {
            Term tag = Term::nil();
            for (std::uint32_t k = 0; k < d + i + 1; ++k) tag = Term::prefix(scheme.tag_action, tag);
            cand[i].push_back(tag);
        }
        if (cand[i].empty()) return {};
    }

    const std::size_t reset_limit = 1u << 21;
    std::vector<std::vector<NodeId>> nodes(names.size());
    auto load = [&]() {
        for (std::size_t i = 0; i < names.size(); ++i) {
            nodes[i].clear();
            for (const auto& term : cand[i]) nodes[i].push_back(c.node(term));
        }
    };
    load();

    RefuteResult result;
    std::vector<std::size_t> idx(names.size(), 0);
    std::unordered_map<std::string, NodeId> env;
    while (true) {
        for (std::size_t i = 0; i < names.size(); ++i) env[names[i]] = nodes[i][idx[i]];
        ++result.tried;
        NodeId l = c.store().of(t, env);
        NodeId r = c.store().of(u, env);
        if (!c.equivalent(l, r, rel)) {
            Refutation w;
            for (std::size_t i = 0; i < names.size(); ++i) w.sigma[names[i]] = cand[i][idx[i]];
            w.lhs = substitute(t, w.sigma);
            w.rhs = substitute(u, w.sigma);
            result.witness = std::move(w);
            return result;
        }
        if (c.store().size() > reset_limit) {
            c.reset();
            load();
        }
        std::size_t k = names.size();
        while (k > 0) {
            --k;
            if (++idx[k] < cand[k].size()) break;
            idx[k] = 0;
            if (k == 0) return result;
        }
        if (names.empty()) return result;
    }
}

RefuteResult refute_open(const Term& t, const Term& u, const Relation& rel, const Alphabet& alphabet,
                         TransitionMode mode, const SubstitutionScheme& scheme) {
    Checker c(alphabet, mode);
    return refute_open(c, t, u, rel, scheme);
}

}  // namespace bccsp

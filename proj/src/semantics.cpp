#include "bccsp/semantics.hpp"

#include <algorithm>
#include <optional>
#include <deque>
#include <functional>

namespace bccsp {

namespace {

bool step_less(const Step& a, const Step& b) {
    if (a.action != b.action) return a.action < b.action;
    return Term::compare(a.target, b.target) < 0;
}

void derive(const Term& t, const Alphabet& alphabet, TransitionMode mode, std::vector<Step>& out) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Var:
            return;
        case Kind::Prefix:
            out.push_back({t.action(), t.body()});
            return;
        case Kind::Sum:
            derive(t.left(), alphabet, mode, out);
            derive(t.right(), alphabet, mode, out);
            return;
        case Kind::Par: {
            std::vector<Step> l;
            std::vector<Step> r;
            derive(t.left(), alphabet, mode, l);
            derive(t.right(), alphabet, mode, r);
            for (const auto& s : l) out.push_back({s.action, Term::par(s.target, t.right())});
            for (const auto& s : r) out.push_back({s.action, Term::par(t.left(), s.target)});
            if (mode == TransitionMode::CcsSync) {
                Symbol tau = alphabet.symbol(alphabet.tau());
                for (const auto& sl : l) {
                    auto li = alphabet.index_of(sl.action);
                    if (!li || alphabet.is_tau(*li)) continue;
                    Symbol co = alphabet.symbol(alphabet.complement(*li));
                    for (const auto& sr : r)
                        if (sr.action == co) out.push_back({tau, Term::par(sl.target, sr.target)});
                }
            }
            return;
        }
    }
}

}  // namespace

std::vector<Step> transitions(const Term& t, const Alphabet& alphabet, TransitionMode mode) {
    if (mode == TransitionMode::CcsSync && !alphabet.sync_mode())
        throw AlphabetError("synchronising semantics needs an alphabet with complements");
    std::vector<Step> out;
    derive(t, alphabet, mode, out);
    std::sort(out.begin(), out.end(), step_less);
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Step& a, const Step& b) { return a.action == b.action && a.target == b.target; }),
              out.end());
    return out;
}

ActionSet initials(const Term& t, const Alphabet& alphabet, TransitionMode mode) {
    ActionSet s = 0;
    for (const auto& st : transitions(t, alphabet, mode)) {
        auto i = alphabet.index_of(st.action);
        if (!i) throw AlphabetError("action '" + action_name(st.action) + "' is not in alphabet " + alphabet.describe());
        s |= ActionSet{1} << *i;
    }
    return s;
}

void require_closed(const Term& t) {
    if (!t.closed()) throw OpenTermError("term '" + render(t) + "' is not closed");
}

Lts build_joint_lts(const std::vector<Term>& roots, const Alphabet& alphabet, TransitionMode mode) {
    Lts lts;
    std::deque<std::size_t> todo;
    auto add = [&](const Term& s) {
        auto [it, inserted] = lts.index.emplace(s, lts.states.size());
        if (inserted) {
            lts.states.push_back(s);
            lts.successors.emplace_back();
            todo.push_back(it->second);
        }
        return it->second;
    };
    for (const auto& r : roots) {
        require_closed(r);
        check_actions(r, alphabet);
        add(r);
    }
    while (!todo.empty()) {
        std::size_t s = todo.front();
        todo.pop_front();
        Term st = lts.states[s];
        for (const auto& step : transitions(st, alphabet, mode)) {
            std::size_t d = add(step.target);
            lts.successors[s].emplace_back(step.action, d);
            lts.transitions.emplace_back(s, step.action, d);
        }
    }
    std::sort(lts.transitions.begin(), lts.transitions.end());
    return lts;
}

Lts build_lts(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    return build_joint_lts({p}, alphabet, mode);
}

namespace {

TraceSet collect(const Lts& lts, bool completed) {
    std::vector<std::optional<TraceSet>> memo(lts.size());
    std::function<const TraceSet&(std::size_t)> go = [&](std::size_t s) -> const TraceSet& {
        if (memo[s]) return *memo[s];
        TraceSet out;
        if (!completed || lts.successors[s].empty()) out.insert(Trace{});
        for (const auto& [a, d] : lts.successors[s]) {
            for (const auto& tr : go(d)) {
                Trace x;
                x.reserve(tr.size() + 1);
                x.push_back(a);
                x.insert(x.end(), tr.begin(), tr.end());
                out.insert(std::move(x));
            }
        }
        memo[s] = std::move(out);
        return *memo[s];
    };
    return go(lts.root);
}

}  // namespace

TraceSet traces(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    return collect(build_lts(p, alphabet, mode), false);
}

TraceSet completed_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    return collect(build_lts(p, alphabet, mode), true);
}

std::set<std::string> vars_at_distance(const Term& t, std::size_t k, const Alphabet& alphabet, TransitionMode mode) {
    std::vector<Term> frontier{t};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Term> next;
        for (const auto& s : frontier)
            for (const auto& st : transitions(s, alphabet, mode)) next.push_back(st.target);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        frontier = std::move(next);
    }
    std::set<std::string> out;
    for (const auto& s : frontier) {
        auto v = vars(s);
        out.insert(v.begin(), v.end());
    }
    return out;
}

std::string render_trace(const Trace& t) {
    if (t.empty()) return "eps";
    bool single = std::all_of(t.begin(), t.end(), [](Symbol s) { return action_name(s).size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!single && i) out += " ";
        out += action_name(t[i]);
    }
    return out;
}

std::string lts_to_dot(const Lts& lts) {
    std::string out = "digraph lts {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < lts.size(); ++i) {
        std::string label = render(lts.states[i]);
        std::string esc;
        for (char c : label) {
            if (c == '"') esc += '\\';
            esc += c;
        }
        out += "  s" + std::to_string(i) + " [label=\"" + esc + "\"" + (i == lts.root ? ", style=bold" : "") + "];\n";
    }
    for (const auto& [s, a, d] : lts.transitions)
        out += "  s" + std::to_string(s) + " -> s" + std::to_string(d) + " [label=\"" + action_name(a) + "\"];\n";
    return out + "}\n";
}

}  // namespace bccsp

#include "bccsp/observations.hpp"

#include <functional>
#include <optional>

namespace bccsp {

std::string to_string(ObsKind k) {
    switch (k) {
        case ObsKind::F:
            return "F";
        case ObsKind::R:
            return "R";
        case ObsKind::FT:
            return "FT";
        case ObsKind::RT:
            return "RT";
        case ObsKind::PF:
            return "PF";
    }
    return "?";
}

std::size_t ObservationSet::size() const { return pairs.size() + decorated.size() + futures.size(); }

namespace {

ActionSet ready_set(const Lts& lts, std::size_t s, const Alphabet& alphabet) {
    ActionSet r = 0;
    for (const auto& [a, d] : lts.successors[s]) r |= ActionSet{1} << *alphabet.index_of(a);
    return r;
}

// Every subset of `space`.
std::vector<ActionSet> subsets(ActionSet space) {
    std::vector<ActionSet> out;
    ActionSet sub = space;
    while (true) {
        out.push_back(sub);
        if (sub == 0) break;
        sub = (sub - 1) & space;
    }
    return out;
}

Trace cons(Symbol a, const Trace& t) {
    Trace x;
    x.reserve(t.size() + 1);
    x.push_back(a);
    x.insert(x.end(), t.begin(), t.end());
    return x;
}

using ReadyPairs = std::set<std::pair<Trace, ActionSet>>;
using ReadyTraces = std::set<std::pair<Trace, std::vector<ActionSet>>>;

ReadyPairs ready_pairs_of(const Lts& lts, const Alphabet& alphabet) {
    std::vector<std::optional<ReadyPairs>> memo(lts.size());
    std::function<const ReadyPairs&(std::size_t)> go = [&](std::size_t s) -> const ReadyPairs& {
        if (memo[s]) return *memo[s];
        ReadyPairs out;
        out.emplace(Trace{}, ready_set(lts, s, alphabet));
        for (const auto& [a, d] : lts.successors[s])
            for (const auto& [tr, x] : go(d)) out.emplace(cons(a, tr), x);
        memo[s] = std::move(out);
        return *memo[s];
    };
    return go(lts.root);
}

ReadyTraces ready_traces_of(const Lts& lts, const Alphabet& alphabet) {
    std::vector<std::optional<ReadyTraces>> memo(lts.size());
    std::function<const ReadyTraces&(std::size_t)> go = [&](std::size_t s) -> const ReadyTraces& {
        if (memo[s]) return *memo[s];
        ReadyTraces out;
        ActionSet here = ready_set(lts, s, alphabet);
        out.emplace(Trace{}, std::vector<ActionSet>{here});
        for (const auto& [a, d] : lts.successors[s]) {
            for (const auto& [tr, sets] : go(d)) {
                std::vector<ActionSet> xs;
                xs.reserve(sets.size() + 1);
                xs.push_back(here);
                xs.insert(xs.end(), sets.begin(), sets.end());
                out.emplace(cons(a, tr), std::move(xs));
            }
        }
        memo[s] = std::move(out);
        return *memo[s];
    };
    return go(lts.root);
}

}  // namespace

ObservationSet ready_pairs(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    ObservationSet o;
    o.kind = ObsKind::R;
    o.pairs = ready_pairs_of(build_lts(p, alphabet, mode), alphabet);
    return o;
}

ObservationSet failure_pairs(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    ObservationSet o;
    o.kind = ObsKind::F;
    for (const auto& [tr, ready] : ready_pairs_of(build_lts(p, alphabet, mode), alphabet))
        for (ActionSet x : subsets(alphabet.all() & ~ready)) o.pairs.emplace(tr, x);
    return o;
}

ObservationSet ready_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    ObservationSet o;
    o.kind = ObsKind::RT;
    o.decorated = ready_traces_of(build_lts(p, alphabet, mode), alphabet);
    return o;
}

ObservationSet failure_traces(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    ObservationSet o;
    o.kind = ObsKind::FT;
    for (const auto& [tr, readies] : ready_traces_of(build_lts(p, alphabet, mode), alphabet)) {
        std::vector<std::vector<ActionSet>> choices;
        for (ActionSet r : readies) choices.push_back(subsets(alphabet.all() & ~r));
        std::vector<ActionSet> cur(readies.size());
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == choices.size()) {
                o.decorated.emplace(tr, cur);
                return;
            }
            for (ActionSet x : choices[i]) {
                cur[i] = x;
                go(i + 1);
            }
        };
        go(0);
    }
    return o;
}

ObservationSet possible_futures(const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    Lts lts = build_lts(p, alphabet, mode);
    std::vector<std::optional<TraceSet>> tmemo(lts.size());
    std::function<const TraceSet&(std::size_t)> tr = [&](std::size_t s) -> const TraceSet& {
        if (tmemo[s]) return *tmemo[s];
        TraceSet out{Trace{}};
        for (const auto& [a, d] : lts.successors[s])
            for (const auto& t : tr(d)) out.insert(cons(a, t));
        tmemo[s] = std::move(out);
        return *tmemo[s];
    };
    using Futures = std::set<std::pair<Trace, TraceSet>>;
    std::vector<std::optional<Futures>> memo(lts.size());
    std::function<const Futures&(std::size_t)> go = [&](std::size_t s) -> const Futures& {
        if (memo[s]) return *memo[s];
        Futures out;
        out.emplace(Trace{}, tr(s));
        for (const auto& [a, d] : lts.successors[s])
            for (const auto& [t, x] : go(d)) out.emplace(cons(a, t), x);
        memo[s] = std::move(out);
        return *memo[s];
    };
    ObservationSet o;
    o.kind = ObsKind::PF;
    o.futures = go(lts.root);
    return o;
}

ObservationSet observe(ObsKind kind, const Term& p, const Alphabet& alphabet, TransitionMode mode) {
    switch (kind) {
        case ObsKind::F:
            return failure_pairs(p, alphabet, mode);
        case ObsKind::R:
            return ready_pairs(p, alphabet, mode);
        case ObsKind::FT:
            return failure_traces(p, alphabet, mode);
        case ObsKind::RT:
            return ready_traces(p, alphabet, mode);
        case ObsKind::PF:
            return possible_futures(p, alphabet, mode);
    }
    return {};
}

std::vector<std::string> render_observations(const ObservationSet& o, const Alphabet& alphabet) {
    std::vector<std::string> out;
    for (const auto& [tr, x] : o.pairs) out.push_back("(" + render_trace(tr) + ", " + alphabet.render_set(x) + ")");
    for (const auto& [tr, sets] : o.decorated) {
        std::string s = alphabet.render_set(sets[0]);
        for (std::size_t i = 0; i < tr.size(); ++i) s += " " + action_name(tr[i]) + " " + alphabet.render_set(sets[i + 1]);
        out.push_back(s);
    }
    for (const auto& [tr, fut] : o.futures) {
        std::string s = "(" + render_trace(tr) + ", {";
        bool first = true;
        for (const auto& t : fut) {
            if (!first) s += ",";
            first = false;
            s += render_trace(t);
        }
        out.push_back(s + "})");
    }
    return out;
}

}  // namespace bccsp

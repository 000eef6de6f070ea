#include "bccsp/process_store.hpp"

#include <algorithm>

namespace bccsp {

std::size_t ProcessStore::EdgesHash::operator()(const std::vector<Edge>& v) const {
    std::size_t h = v.size();
    for (const auto& e : v) h = h * 1000003u ^ (static_cast<std::size_t>(e.to) << 8 | e.action);
    return h;
}

ProcessStore::ProcessStore(Alphabet alphabet, TransitionMode mode) : alphabet_(std::move(alphabet)), mode_(mode) {
    if (mode_ == TransitionMode::CcsSync && !alphabet_.sync_mode())
        throw AlphabetError("synchronising semantics needs an alphabet with complements");
    for (ActionId a : alphabet_.all_actions()) {
        symbol_.push_back(alphabet_.symbol(a));
        local_.emplace(alphabet_.symbol(a), a);
    }
    intern({});
}

NodeId ProcessStore::intern(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    auto it = index_.find(edges);
    if (it != index_.end()) return it->second;
    auto id = static_cast<NodeId>(edges_.size());
    ActionSet init = 0;
    std::uint32_t h = 0;
    for (const auto& e : edges) {
        init |= ActionSet{1} << e.action;
        h = std::max(h, height_[e.to] + 1);
    }
    index_.emplace(edges, id);
    edges_.push_back(std::move(edges));
    initials_.push_back(init);
    height_.push_back(h);
    return id;
}

NodeId ProcessStore::prefix(ActionId a, NodeId p) { return intern({Edge{a, p}}); }

NodeId ProcessStore::sum(NodeId p, NodeId q) {
    if (p == q || q == nil()) return p;
    if (p == nil()) return q;
    std::vector<Edge> e = edges_[p];
    e.insert(e.end(), edges_[q].begin(), edges_[q].end());
    return intern(std::move(e));
}

NodeId ProcessStore::par(NodeId p, NodeId q) {
    if (q == nil()) return p;
    if (p == nil()) return q;
    std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
    auto it = par_memo_.find(key);
    if (it != par_memo_.end()) return it->second;
    std::vector<Edge> out;
    // Copies: recursive calls may grow edges_.
    std::vector<Edge> ep = edges_[p];
    std::vector<Edge> eq = edges_[q];
    for (const auto& e : ep) out.push_back({e.action, par(e.to, q)});
    for (const auto& e : eq) out.push_back({e.action, par(p, e.to)});
    if (mode_ == TransitionMode::CcsSync) {
        ActionId tau = alphabet_.tau();
        for (const auto& l : ep) {
            if (l.action == tau) continue;
            ActionId co = alphabet_.complement(l.action);
            for (const auto& r : eq)
                if (r.action == co) out.push_back({tau, par(l.to, r.to)});
        }
    }
    NodeId id = intern(std::move(out));
    par_memo_.emplace(key, id);
    return id;
}

NodeId ProcessStore::of(const Term& t) {
    require_closed(t);
    static const std::unordered_map<std::string, NodeId> empty;
    return of(t, empty);
}

NodeId ProcessStore::of(const Term& t, const std::unordered_map<std::string, NodeId>& env) {
    bool cacheable = t.closed();
    if (cacheable) {
        auto it = term_memo_.find(t);
        if (it != term_memo_.end()) return it->second;
    }
    NodeId r = 0;
    switch (t.kind()) {
        case Kind::Nil:
            r = nil();
            break;
        case Kind::Var: {
            auto it = env.find(t.var_name());
            if (it == env.end()) throw OpenTermError("unbound variable '" + t.var_name() + "'");
            r = it->second;
            break;
        }
        case Kind::Prefix: {
            auto a = local_.find(t.action());
            if (a == local_.end())
                throw AlphabetError("action '" + action_name(t.action()) + "' is not in alphabet " + alphabet_.describe());
            r = prefix(a->second, of(t.body(), env));
            break;
        }
        case Kind::Sum:
            r = sum(of(t.left(), env), of(t.right(), env));
            break;
        case Kind::Par:
            r = par(of(t.left(), env), of(t.right(), env));
            break;
    }
    if (cacheable) term_memo_.emplace(t, r);
    return r;
}

Term ProcessStore::representative(NodeId n) const {
    std::vector<Term> parts;
    for (const auto& e : edges_[n]) parts.push_back(Term::prefix(symbol_[e.action], representative(e.to)));
    return Term::sum_of(parts);
}

}  // namespace bccsp

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bccsp/semantics.hpp"

namespace bccsp {

using NodeId = std::uint32_t;

struct Edge {
    ActionId action;
    NodeId to;
    bool operator==(const Edge& o) const { return action == o.action && to == o.to; }
    bool operator<(const Edge& o) const { return action != o.action ? action < o.action : to < o.to; }
};

// Hash-consed store of finite processes. A node is identified by its set of
// outgoing (action, node) edges, so two closed terms map to the same node
// exactly when they are bisimilar. Not thread-safe: give each worker its own.
class ProcessStore {
public:
    ProcessStore(Alphabet alphabet, TransitionMode mode);

    const Alphabet& alphabet() const { return alphabet_; }
    TransitionMode mode() const { return mode_; }

    NodeId nil() const { return 0; }
    NodeId intern(std::vector<Edge> edges);
    NodeId prefix(ActionId a, NodeId p);
    NodeId sum(NodeId p, NodeId q);
    NodeId par(NodeId p, NodeId q);

    NodeId of(const Term& closed_term);
    // Evaluates an open term with its variables bound to nodes.
    NodeId of(const Term& t, const std::unordered_map<std::string, NodeId>& env);

    const std::vector<Edge>& edges(NodeId n) const { return edges_[n]; }
    ActionSet initials(NodeId n) const { return initials_[n]; }
    // Length of the longest path from n.
    std::uint32_t height(NodeId n) const { return height_[n]; }
    std::size_t size() const { return edges_.size(); }

    // A Par-free term in the node's class.
    Term representative(NodeId n) const;

private:
    struct EdgesHash {
        std::size_t operator()(const std::vector<Edge>& v) const;
    };

    Alphabet alphabet_;
    TransitionMode mode_;
    std::vector<Symbol> symbol_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<ActionSet> initials_;
    std::vector<std::uint32_t> height_;
    std::unordered_map<std::vector<Edge>, NodeId, EdgesHash> index_;
    std::unordered_map<std::uint64_t, NodeId> par_memo_;
    std::unordered_map<Term, NodeId, TermHash> term_memo_;
    std::unordered_map<Symbol, ActionId> local_;
};

}  // namespace bccsp

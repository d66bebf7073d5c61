#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slicegx/errors.hpp"
#include "slicegx/matrix.hpp"

namespace slicegx {

/// Undirected edge, stored once with u < v.
struct Edge {
    int u = 0;
    int v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, deduplicated list of node ids.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<int> ids);
    static NodeSet from_unsorted(std::vector<int> ids);

    bool contains(int id) const;
    void insert(int id);
    void erase(int id);

    int size() const { return static_cast<int>(ids_.size()); }
    bool empty() const { return ids_.empty(); }

    const std::vector<int>& ids() const { return ids_; }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    NodeSet set_union(const NodeSet& other) const;
    NodeSet set_difference(const NodeSet& other) const;
    bool is_subset_of(const NodeSet& other) const;

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<int> ids_; // strictly increasing
};

/// Immutable undirected attributed graph. Edges are stored once (u < v) and
/// iterated in both directions through a CSR index. Self loops are rejected;
/// propagation adds them analytically.
class Graph {
public:
    Graph(int node_count, std::vector<Edge> edges, Matrix features,
          std::optional<std::vector<int>> labels = std::nullopt,
          std::vector<std::string> class_names = {});

    int node_count() const { return node_count_; }
    int feature_dim() const { return features_.cols(); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const int> neighbors(int v) const;
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool has_edge(int u, int v) const;

    const Matrix& features() const { return features_; }
    bool has_labels() const { return labels_.has_value(); }
    const std::vector<int>& labels() const;
    int num_classes() const; // labels required

    const std::vector<std::string>& class_names() const { return class_names_; }
    std::string class_name(int cls) const;

    void check_node(int v) const;

private:
    int node_count_;
    std::vector<Edge> edges_;     // canonical u<v, sorted, unique
    std::vector<int> offsets_;    // CSR over both directions
    std::vector<int> adjacency_;  // sorted per node
    Matrix features_;
    std::optional<std::vector<int>> labels_;
    std::vector<std::string> class_names_;
};

/// Node-induced subgraph of a parent graph.
struct Subgraph {
    const Graph* parent = nullptr;
    NodeSet nodes;
    std::vector<Edge> edges; // induced, canonical order

    /// |V| + |E|
    int size() const { return nodes.size() + static_cast<int>(edges.size()); }
};

/// Every parent edge with both endpoints inside `nodes`.
Subgraph induce(const Graph& g, const NodeSet& nodes);

/// Standalone graph with nodes remapped to 0..m-1 following the sorted node
/// order. `to_parent[i]` gives the parent id of new node i.
Graph materialize(const Subgraph& s, std::vector<int>* to_parent = nullptr);

/// N^l(v): nodes within l hops of v, v included.
NodeSet khop_nodes(const Graph& g, int v, int l);

/// G^l(v): subgraph induced by N^l(v); always connected.
Subgraph khop_subgraph(const Graph& g, int v, int l);

/// G^l(V_s): subgraph induced by the union of N^l(v) over v in vs. May be
/// disconnected.
Subgraph khop_union(const Graph& g, const NodeSet& vs, int l);

/// G \ G_s: same nodes and features, edges of s removed.
Graph remove_explanation_edges(const Graph& g, const Subgraph& s);

/// Interior nodes (endpoints excluded) of one BFS shortest path from v_s to
/// v_t inside the subgraph induced by N^L(v_t). Ties resolved toward smaller
/// node ids: the BFS frontier is scanned in ascending order, so each node
/// keeps the smallest-id predecessor that first reaches it.
NodeSet connector_set(const Graph& g, int v_s, int v_t, int big_l);

} // namespace slicegx

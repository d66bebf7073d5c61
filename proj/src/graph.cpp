#include "slicegx/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace slicegx {

NodeSet::NodeSet(std::initializer_list<int> ids) {
    ids_.assign(ids.begin(), ids.end());
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

NodeSet NodeSet::from_unsorted(std::vector<int> ids) {
    NodeSet s;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    s.ids_ = std::move(ids);
    return s;
}

bool NodeSet::contains(int id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

void NodeSet::insert(int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

void NodeSet::erase(int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) ids_.erase(it);
}

NodeSet NodeSet::set_union(const NodeSet& other) const {
    NodeSet out;
    out.ids_.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out.ids_));
    return out;
}

NodeSet NodeSet::set_difference(const NodeSet& other) const {
    NodeSet out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
    return out;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

Graph::Graph(int node_count, std::vector<Edge> edges, Matrix features,
             std::optional<std::vector<int>> labels, std::vector<std::string> class_names)
    : node_count_(node_count), features_(std::move(features)), labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
    if (node_count < 0) throw input_error("graph: negative node count");
    if (features_.rows() != node_count)
        throw input_error("graph: feature matrix has " + std::to_string(features_.rows()) +
                          " rows, expected " + std::to_string(node_count));
    if (labels_ && static_cast<int>(labels_->size()) != node_count)
        throw input_error("graph: label vector length mismatch");

    for (auto& e : edges) {
        if (e.u == e.v) throw input_error("graph: self-loop at node " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= node_count)
            throw input_error("graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw input_error("graph: duplicate edge");
    edges_ = std::move(edges);

    std::vector<int> deg(node_count, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(node_count + 1, 0);
    for (int v = 0; v < node_count; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adjacency_.resize(offsets_[node_count]);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[cursor[e.u]++] = e.v;
        adjacency_[cursor[e.v]++] = e.u;
    }
    for (int v = 0; v < node_count; ++v)
        std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
}

std::span<const int> Graph::neighbors(int v) const {
    check_node(v);
    return {adjacency_.data() + offsets_[v], static_cast<size_t>(offsets_[v + 1] - offsets_[v])};
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

const std::vector<int>& Graph::labels() const {
    if (!labels_) throw input_error("graph: labels required but not present");
    return *labels_;
}

int Graph::num_classes() const {
    const auto& l = labels();
    int m = 0;
    for (int c : l) m = std::max(m, c + 1);
    return m;
}

std::string Graph::class_name(int cls) const {
    if (cls >= 0 && cls < static_cast<int>(class_names_.size())) return class_names_[cls];
    return std::to_string(cls);
}

void Graph::check_node(int v) const {
    if (v < 0 || v >= node_count_)
        throw input_error("graph: node id " + std::to_string(v) + " out of range [0," +
                          std::to_string(node_count_) + ")");
}

Subgraph induce(const Graph& g, const NodeSet& nodes) {
    Subgraph s;
    s.parent = &g;
    s.nodes = nodes;
    for (int v : nodes) g.check_node(v);
    // Scan each member's adjacency instead of all parent edges.
    for (int v : nodes)
        for (int u : g.neighbors(v))
            if (u > v && nodes.contains(u)) s.edges.push_back({v, u});
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

Graph materialize(const Subgraph& s, std::vector<int>* to_parent) {
    const Graph& g = *s.parent;
    const auto& ids = s.nodes.ids();
    const int m = static_cast<int>(ids.size());
    Matrix feats(m, g.feature_dim());
    std::optional<std::vector<int>> labels;
    if (g.has_labels()) labels.emplace(m);
    for (int i = 0; i < m; ++i) {
        auto src = g.features().row(ids[i]);
        std::copy(src.begin(), src.end(), feats.row(i).begin());
        if (labels) (*labels)[i] = g.labels()[ids[i]];
    }
    auto local = [&](int id) {
        return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(s.edges.size());
    for (const auto& e : s.edges) edges.push_back({local(e.u), local(e.v)});
    if (to_parent) *to_parent = ids;
    return Graph(m, std::move(edges), std::move(feats), std::move(labels),
                 g.class_names());
}

NodeSet khop_nodes(const Graph& g, int v, int l) {
    g.check_node(v);
    if (l < 0) throw input_error("khop_nodes: negative hop count");
    std::vector<int> dist(g.node_count(), -1);
    std::deque<int> queue{v};
    dist[v] = 0;
    std::vector<int> seen{v};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (dist[x] == l) continue;
        for (int y : g.neighbors(x)) {
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                seen.push_back(y);
                queue.push_back(y);
            }
        }
    }
    return NodeSet::from_unsorted(std::move(seen));
}

Subgraph khop_subgraph(const Graph& g, int v, int l) { return induce(g, khop_nodes(g, v, l)); }

Subgraph khop_union(const Graph& g, const NodeSet& vs, int l) {
    if (vs.empty()) throw input_error("khop_union: empty seed set");
    NodeSet acc;
    for (int v : vs) acc = acc.set_union(khop_nodes(g, v, l));
    return induce(g, acc);
}

Graph remove_explanation_edges(const Graph& g, const Subgraph& s) {
    for (int v : s.nodes) g.check_node(v);
    std::vector<Edge> kept;
    kept.reserve(g.edges().size());
    std::set_difference(g.edges().begin(), g.edges().end(), s.edges.begin(), s.edges.end(),
                        std::back_inserter(kept));
    std::optional<std::vector<int>> labels;
    if (g.has_labels()) labels = g.labels();
    return Graph(g.node_count(), std::move(kept), g.features(), std::move(labels),
                 g.class_names());
}

NodeSet connector_set(const Graph& g, int v_s, int v_t, int big_l) {
    g.check_node(v_s);
    g.check_node(v_t);
    NodeSet ball = khop_nodes(g, v_t, big_l);
    if (!ball.contains(v_s))
        throw connectivity_error("connector_set: source " + std::to_string(v_s) +
                                 " not within " + std::to_string(big_l) + " hops of target");
    if (v_s == v_t) return {};
    // BFS from v_s restricted to the ball; frontier processed in ascending id
    // order so the recorded predecessor is the smallest-id one per layer.
    std::vector<int> parent(g.node_count(), -2);
    parent[v_s] = -1;
    std::vector<int> frontier{v_s};
    while (!frontier.empty() && parent[v_t] == -2) {
        std::vector<int> next;
        for (int x : frontier) {
            for (int y : g.neighbors(x)) {
                if (parent[y] == -2 && ball.contains(y)) {
                    parent[y] = x;
                    next.push_back(y);
                }
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    if (parent[v_t] == -2)
        throw connectivity_error("connector_set: no path from " + std::to_string(v_s) + " to " +
                                 std::to_string(v_t) + " inside the hop ball");
    std::vector<int> interior;
    for (int x = parent[v_t]; x != v_s; x = parent[x]) interior.push_back(x);
    return NodeSet::from_unsorted(std::move(interior));
}

} // namespace slicegx

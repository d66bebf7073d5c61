#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "slicegx/model.hpp"

namespace slicegx {

struct MeasureParams {
    double gamma = 0.7; // balance between influence and diversity, in [0,1]
    double h = 0.25;    // influence threshold
    double theta = 0.15; // diversity distance threshold
    int layer = 1;

    void validate() const;
};

/// I1(v,u): entrywise L1 norm of dZ^l_v / dZ^0_u, exact chain rule with ReLU
/// gates frozen at the base forward pass over g. Zero exactly when u is
/// outside N^l(v).
double jacobian_influence(const GcnModel& m, const Graph& g, int v, int u, int layer);

/// c(v) = { u in N^l(v) : I1(v,u) > 0 and I2(v,u) >= h } where
/// I2(v,u) = I1(v,u) / sum_w I1(w,u); the sum runs over N^l(u), which carries
/// every nonzero term. A zero denominator yields I2 = 0.
NodeSet influence_set(const GcnModel& m, const Graph& g, int v, const MeasureParams& params);

/// r(v) = { u in N^l(v), u != v : ||Z^l_v - Z^l_u||_2 >= theta }, embeddings
/// taken from the whole-graph forward pass.
NodeSet diversity_set(const GcnModel& m, const Graph& g, int v, const MeasureParams& params);

/// Influence and diversity sets for every node of N^l(target), bitset-backed
/// so the greedy explainers can evaluate coverage unions quickly. Built once
/// per (target, layer) task and owned by it.
class InfluenceCache {
public:
    static InfluenceCache build(const GcnModel& m, const Graph& g, int target,
                                const MeasureParams& params);

    /// Direct construction from explicit per-candidate sets.
    static InfluenceCache from_sets(
        const std::vector<std::pair<int, std::pair<NodeSet, NodeSet>>>& entries);

    const NodeSet& candidates() const { return candidates_; }
    bool has(int v) const { return candidates_.contains(v); }

    NodeSet influence_of(int v) const;
    NodeSet diversity_of(int v) const;
    int influence_size(int v) const;

    int universe_size() const { return static_cast<int>(universe_.size()); }
    int words() const { return words_; }
    const uint64_t* influence_bits(int v) const;
    const uint64_t* diversity_bits(int v) const;

    int index_of(int v) const; // internal_error if absent

private:
    NodeSet candidates_;
    std::vector<int> universe_; // sorted ids appearing in any c/r set
    int words_ = 0;
    std::vector<uint64_t> c_bits_; // candidate-major
    std::vector<uint64_t> r_bits_;
    std::vector<int> c_sizes_;
};

/// f(V_s) = gamma |union c(v)| / total + (1-gamma) |union r(v)| / total.
double objective(const NodeSet& vs, const InfluenceCache& cache, const MeasureParams& params,
                 int total_nodes);

/// f(V_s + add) - f(V_s); add holds one or two nodes disjoint from V_s.
double marginal_gain(const NodeSet& vs, const NodeSet& add, const InfluenceCache& cache,
                     const MeasureParams& params, int total_nodes);

/// Running coverage unions for greedy selection.
class CoverageState {
public:
    explicit CoverageState(const InfluenceCache& cache);
    void add(int v);
    /// (influence, diversity) popcount deltas of adding a (and b when >= 0).
    std::pair<int, int> union_gain(int a, int b = -1) const;
    double objective_value(const MeasureParams& params, int total_nodes) const;
    double gain_value(const MeasureParams& params, int total_nodes, int a, int b = -1) const;

private:
    const InfluenceCache* cache_;
    std::vector<uint64_t> c_acc_, r_acc_;
    int c_count_ = 0, r_count_ = 0;
};

} // namespace slicegx

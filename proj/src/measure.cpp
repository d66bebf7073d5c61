#include "slicegx/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "slicegx/kernels.hpp"

namespace slicegx {

void MeasureParams::validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw input_error("measure: gamma outside [0,1]");
    if (h < 0.0) throw input_error("measure: negative influence threshold");
    if (theta < 0.0) throw input_error("measure: negative diversity threshold");
    if (layer < 1) throw input_error("measure: layer must be >= 1");
}

namespace {

// BFS ball with hop distances; nodes returned in ascending id order.
struct Ball {
    std::vector<int> nodes;
    std::vector<int> local; // node id -> local index, -1 outside

    Ball(const Graph& g, int center, int radius) : local(g.node_count(), -1) {
        NodeSet ids = khop_nodes(g, center, radius);
        nodes.assign(ids.begin(), ids.end());
        for (size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
    }
};

// I1(w, u) for every w in N^l(u): forward-mode Jacobian propagation seeded at
// u, gates frozen from the trace. Entry layout: node-major d x d blocks
// (out-feature j, in-feature f).
std::vector<double> jacobian_column(const GcnModel& m, const Graph& g,
                                    std::span<const double> isd, const ForwardTrace& trace,
                                    const Ball& ball, int u, int layer) {
    const int d = m.width();
    const size_t block = static_cast<size_t>(d) * d;
    const size_t sz = ball.nodes.size() * block;
    std::vector<double> jac(sz, 0.0), next(sz, 0.0), pre(block);

    {
        double* self = jac.data() + static_cast<size_t>(ball.local[u]) * block;
        for (int j = 0; j < d; ++j) self[j * d + j] = 1.0;
    }

    for (int t = 1; t <= layer; ++t) {
        const Matrix& w = m.layer_weight(t - 1);
        const auto& active = trace.active[t - 1];
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t wi = 0; wi < ball.nodes.size(); ++wi) {
            const int node = ball.nodes[wi];
            // P = sum_x Ahat[node,x] J_prev[x], x over the closed neighborhood
            // intersected with the ball (entries outside are zero anyway).
            std::fill(pre.begin(), pre.end(), 0.0);
            const double self_coef = isd[node] * isd[node];
            {
                const double* src = jac.data() + wi * block;
                for (size_t e = 0; e < block; ++e) pre[e] = self_coef * src[e];
            }
            for (int x : g.neighbors(node)) {
                const int xl = ball.local[x];
                if (xl < 0) continue;
                const double coef = isd[node] * isd[x];
                const double* src = jac.data() + static_cast<size_t>(xl) * block;
                for (size_t e = 0; e < block; ++e) pre[e] += coef * src[e];
            }
            // J_next[node][j][f] = gate(node,j) * sum_i w(i,j) P[i][f]
            double* dst = next.data() + wi * block;
            for (int j = 0; j < d; ++j) {
                if (!active[static_cast<size_t>(node) * d + j]) continue;
                for (int i = 0; i < d; ++i) {
                    const double wij = w(i, j);
                    if (wij == 0.0) continue;
                    const double* prow = pre.data() + static_cast<size_t>(i) * d;
                    double* drow = dst + static_cast<size_t>(j) * d;
                    for (int f = 0; f < d; ++f) drow[f] += wij * prow[f];
                }
            }
        }
        std::swap(jac, next);
    }

    std::vector<double> i1(ball.nodes.size(), 0.0);
    for (size_t wi = 0; wi < ball.nodes.size(); ++wi) {
        double s = 0.0;
        const double* src = jac.data() + wi * block;
        for (size_t e = 0; e < block; ++e) s += std::abs(src[e]);
        i1[wi] = s;
    }
    return i1;
}

} // namespace

double jacobian_influence(const GcnModel& m, const Graph& g, int v, int u, int layer) {
    g.check_node(v);
    g.check_node(u);
    if (layer < 1 || layer > m.num_layers()) throw input_error("jacobian_influence: bad layer");
    Ball ball(g, u, layer);
    if (ball.local[v] < 0) return 0.0; // locality: v unreachable in l hops
    const std::vector<double> isd = inv_sqrt_degrees(g);
    ForwardTrace trace = forward_trace(m, g, layer);
    std::vector<double> col = jacobian_column(m, g, isd, trace, ball, u, layer);
    return col[ball.local[v]];
}

NodeSet influence_set(const GcnModel& m, const Graph& g, int v, const MeasureParams& params) {
    params.validate();
    g.check_node(v);
    const std::vector<double> isd = inv_sqrt_degrees(g);
    ForwardTrace trace = forward_trace(m, g, params.layer);
    NodeSet result;
    for (int u : khop_nodes(g, v, params.layer)) {
        Ball ball(g, u, params.layer);
        std::vector<double> col = jacobian_column(m, g, isd, trace, ball, u, params.layer);
        double denom = 0.0;
        for (double x : col) denom += x;
        const double i1 = col[ball.local[v]];
        if (i1 > 0.0 && denom > 0.0 && i1 / denom >= params.h) result.insert(u);
    }
    return result;
}

NodeSet diversity_set(const GcnModel& m, const Graph& g, int v, const MeasureParams& params) {
    params.validate();
    g.check_node(v);
    Matrix z = forward(m, g, params.layer);
    NodeSet result;
    auto zv = z.row(v);
    for (int u : khop_nodes(g, v, params.layer)) {
        if (u == v) continue;
        auto zu = z.row(u);
        double sq = 0.0;
        for (int i = 0; i < z.cols(); ++i) {
            const double dlt = zv[i] - zu[i];
            sq += dlt * dlt;
        }
        if (std::sqrt(sq) >= params.theta) result.insert(u);
    }
    return result;
}

InfluenceCache InfluenceCache::build(const GcnModel& m, const Graph& g, int target,
                                     const MeasureParams& params) {
    params.validate();
    g.check_node(target);
    const int l = params.layer;
    if (l > m.num_layers()) throw input_error("influence cache: layer beyond model depth");

    InfluenceCache cache;
    cache.candidates_ = khop_nodes(g, target, l);
    const auto& cands = cache.candidates_.ids();
    const int nc = static_cast<int>(cands.size());

    // Per-candidate hop balls and the union universe of possible members.
    std::vector<NodeSet> cand_ball(nc);
    NodeSet universe;
    for (int i = 0; i < nc; ++i) {
        cand_ball[i] = khop_nodes(g, cands[i], l);
        universe = universe.set_union(cand_ball[i]);
    }
    cache.universe_.assign(universe.begin(), universe.end());
    cache.words_ = static_cast<int>((cache.universe_.size() + 63) / 64);
    cache.c_bits_.assign(static_cast<size_t>(nc) * cache.words_, 0);
    cache.r_bits_.assign(static_cast<size_t>(nc) * cache.words_, 0);
    cache.c_sizes_.assign(nc, 0);

    const std::vector<double> isd = inv_sqrt_degrees(g);
    ForwardTrace trace = forward_trace(m, g, l);

    auto universe_index = [&](int id) {
        return static_cast<int>(
            std::lower_bound(cache.universe_.begin(), cache.universe_.end(), id) -
            cache.universe_.begin());
    };

    // One Jacobian pass per potential member u; the pass yields I1(w, u) for
    // every w in N^l(u) plus the normalizer, so each candidate's membership
    // test reads one entry. Passes are independent; results are merged in u
    // order, keeping the build deterministic under OpenMP.
    const int nu = static_cast<int>(cache.universe_.size());
    std::vector<std::vector<int>> hits(nu);
#pragma omp parallel for schedule(dynamic)
    for (int ui = 0; ui < nu; ++ui) {
        const int u = cache.universe_[ui];
        Ball ball(g, u, l);
        std::vector<double> col = jacobian_column(m, g, isd, trace, ball, u, l);
        double denom = 0.0;
        for (double x : col) denom += x;
        if (denom <= 0.0) continue;
        for (int ci = 0; ci < nc; ++ci) {
            const int lv = ball.local[cands[ci]];
            if (lv < 0) continue; // u outside N^l(candidate)
            const double i1 = col[lv];
            if (i1 > 0.0 && i1 / denom >= params.h) hits[ui].push_back(ci);
        }
    }
    for (int ui = 0; ui < nu; ++ui)
        for (int ci : hits[ui]) {
            cache.c_bits_[static_cast<size_t>(ci) * cache.words_ + ui / 64] |= 1ull << (ui % 64);
            ++cache.c_sizes_[ci];
        }

    // Diversity sets from the layer-l embeddings of the whole graph.
    const Matrix& z = trace.z[l];
    for (int ci = 0; ci < nc; ++ci) {
        auto zv = z.row(cands[ci]);
        for (int u : cand_ball[ci]) {
            if (u == cands[ci]) continue;
            auto zu = z.row(u);
            double sq = 0.0;
            for (int i = 0; i < z.cols(); ++i) {
                const double dlt = zv[i] - zu[i];
                sq += dlt * dlt;
            }
            if (std::sqrt(sq) >= params.theta) {
                const int ui = universe_index(u);
                cache.r_bits_[static_cast<size_t>(ci) * cache.words_ + ui / 64] |= 1ull
                                                                                  << (ui % 64);
            }
        }
    }
    return cache;
}

InfluenceCache InfluenceCache::from_sets(
    const std::vector<std::pair<int, std::pair<NodeSet, NodeSet>>>& entries) {
    InfluenceCache cache;
    NodeSet universe;
    for (const auto& [id, sets] : entries) {
        cache.candidates_.insert(id);
        universe = universe.set_union(sets.first).set_union(sets.second);
    }
    cache.universe_.assign(universe.begin(), universe.end());
    cache.words_ = static_cast<int>((cache.universe_.size() + 63) / 64);
    const int nc = cache.candidates_.size();
    cache.c_bits_.assign(static_cast<size_t>(nc) * cache.words_, 0);
    cache.r_bits_.assign(static_cast<size_t>(nc) * cache.words_, 0);
    cache.c_sizes_.assign(nc, 0);
    auto universe_index = [&](int id) {
        return static_cast<int>(
            std::lower_bound(cache.universe_.begin(), cache.universe_.end(), id) -
            cache.universe_.begin());
    };
    for (const auto& [id, sets] : entries) {
        const int ci = cache.index_of(id);
        for (int u : sets.first) {
            const int ui = universe_index(u);
            cache.c_bits_[static_cast<size_t>(ci) * cache.words_ + ui / 64] |= 1ull << (ui % 64);
        }
        cache.c_sizes_[ci] = sets.first.size();
        for (int u : sets.second) {
            const int ui = universe_index(u);
            cache.r_bits_[static_cast<size_t>(ci) * cache.words_ + ui / 64] |= 1ull << (ui % 64);
        }
    }
    return cache;
}

int InfluenceCache::index_of(int v) const {
    const auto& ids = candidates_.ids();
    auto it = std::lower_bound(ids.begin(), ids.end(), v);
    if (it == ids.end() || *it != v)
        throw internal_error("influence cache: node " + std::to_string(v) + " not cached");
    return static_cast<int>(it - ids.begin());
}

NodeSet InfluenceCache::influence_of(int v) const {
    const int ci = index_of(v);
    NodeSet out;
    for (size_t ui = 0; ui < universe_.size(); ++ui)
        if (c_bits_[static_cast<size_t>(ci) * words_ + ui / 64] >> (ui % 64) & 1)
            out.insert(universe_[ui]);
    return out;
}

NodeSet InfluenceCache::diversity_of(int v) const {
    const int ci = index_of(v);
    NodeSet out;
    for (size_t ui = 0; ui < universe_.size(); ++ui)
        if (r_bits_[static_cast<size_t>(ci) * words_ + ui / 64] >> (ui % 64) & 1)
            out.insert(universe_[ui]);
    return out;
}

int InfluenceCache::influence_size(int v) const { return c_sizes_[index_of(v)]; }

const uint64_t* InfluenceCache::influence_bits(int v) const {
    return c_bits_.data() + static_cast<size_t>(index_of(v)) * words_;
}

const uint64_t* InfluenceCache::diversity_bits(int v) const {
    return r_bits_.data() + static_cast<size_t>(index_of(v)) * words_;
}

double objective(const NodeSet& vs, const InfluenceCache& cache, const MeasureParams& params,
                 int total_nodes) {
    if (total_nodes <= 0) throw internal_error("objective: nonpositive node total");
    CoverageState state(cache);
    for (int v : vs) state.add(v);
    return state.objective_value(params, total_nodes);
}

double marginal_gain(const NodeSet& vs, const NodeSet& add, const InfluenceCache& cache,
                     const MeasureParams& params, int total_nodes) {
    if (add.empty() || add.size() > 2)
        throw input_error("marginal_gain: expected one or two nodes to add");
    for (int v : add)
        if (vs.contains(v)) throw input_error("marginal_gain: node already selected");
    CoverageState state(cache);
    for (int v : vs) state.add(v);
    const auto& ids = add.ids();
    return state.gain_value(params, total_nodes, ids[0], ids.size() == 2 ? ids[1] : -1);
}

CoverageState::CoverageState(const InfluenceCache& cache)
    : cache_(&cache), c_acc_(cache.words(), 0), r_acc_(cache.words(), 0) {}

void CoverageState::add(int v) {
    const uint64_t* c = cache_->influence_bits(v);
    const uint64_t* r = cache_->diversity_bits(v);
    for (int w = 0; w < cache_->words(); ++w) {
        c_count_ += std::popcount(c[w] & ~c_acc_[w]);
        c_acc_[w] |= c[w];
        r_count_ += std::popcount(r[w] & ~r_acc_[w]);
        r_acc_[w] |= r[w];
    }
}

std::pair<int, int> CoverageState::union_gain(int a, int b) const {
    const uint64_t* ca = cache_->influence_bits(a);
    const uint64_t* ra = cache_->diversity_bits(a);
    const uint64_t* cb = b >= 0 ? cache_->influence_bits(b) : nullptr;
    const uint64_t* rb = b >= 0 ? cache_->diversity_bits(b) : nullptr;
    int dc = 0, dr = 0;
    for (int w = 0; w < cache_->words(); ++w) {
        uint64_t cw = ca[w];
        uint64_t rw = ra[w];
        if (cb) {
            cw |= cb[w];
            rw |= rb[w];
        }
        dc += std::popcount(cw & ~c_acc_[w]);
        dr += std::popcount(rw & ~r_acc_[w]);
    }
    return {dc, dr};
}

double CoverageState::objective_value(const MeasureParams& params, int total_nodes) const {
    return (params.gamma * c_count_ + (1.0 - params.gamma) * r_count_) / total_nodes;
}

double CoverageState::gain_value(const MeasureParams& params, int total_nodes, int a, int b) const {
    auto [dc, dr] = union_gain(a, b);
    return (params.gamma * dc + (1.0 - params.gamma) * dr) / total_nodes;
}

} // namespace slicegx

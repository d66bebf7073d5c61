#include "slicegx/generators.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace slicegx {

namespace {

struct EdgeBuilder {
    std::set<std::pair<int, int>> seen;
    std::vector<Edge> edges;

    bool add(int u, int v) {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) return false;
        edges.push_back({u, v});
        return true;
    }
};

// Preferential attachment via the repeated-endpoints trick: sampling from the
// endpoint list is proportional to degree.
void barabasi_albert(EdgeBuilder& b, int n, int m, std::mt19937_64& rng) {
    std::vector<int> endpoints;
    for (int v = 1; v < m; ++v) { // seed path so early nodes have degree
        b.add(v - 1, v);
        endpoints.push_back(v - 1);
        endpoints.push_back(v);
    }
    for (int v = m; v < n; ++v) {
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < m) {
            std::uniform_int_distribution<size_t> pick(0, endpoints.size() - 1);
            chosen.insert(endpoints[pick(rng)]);
        }
        for (int u : chosen) {
            if (b.add(u, v)) {
                endpoints.push_back(u);
                endpoints.push_back(v);
            }
        }
    }
}

Matrix all_one_features(int n, int d) {
    Matrix f(n, d, 1.0);
    return f;
}

} // namespace

Graph gen_ba_shapes(uint64_t seed) {
    const int n_base = 300;
    const int n_houses = 80;
    const int ba_m = 12;
    const int n = n_base + 5 * n_houses;
    std::mt19937_64 rng(seed);

    EdgeBuilder b;
    barabasi_albert(b, n_base, ba_m, rng);

    std::vector<int> labels(n, 0);
    std::uniform_int_distribution<int> base_pick(0, n_base - 1);
    for (int h = 0; h < n_houses; ++h) {
        const int top = n_base + 5 * h;
        const int mid1 = top + 1, mid2 = top + 2;
        const int bot1 = top + 3, bot2 = top + 4;
        b.add(top, mid1);
        b.add(top, mid2);
        b.add(mid1, mid2);
        b.add(mid1, bot1);
        b.add(mid2, bot2);
        b.add(bot1, bot2);
        b.add(bot1, base_pick(rng));
        labels[top] = 1;
        labels[mid1] = labels[mid2] = 2;
        labels[bot1] = labels[bot2] = 3;
    }

    // A few random perturbation edges, as in the usual benchmark recipe.
    std::uniform_int_distribution<int> any(0, n - 1);
    int extra = n / 10;
    while (extra > 0)
        if (b.add(any(rng), any(rng))) --extra;

    return Graph(n, std::move(b.edges), all_one_features(n, 10), std::move(labels),
                 {"base", "top", "middle", "bottom"});
}

Graph gen_tree_cycles(uint64_t seed) {
    const int depth = 8;
    const int n_tree = (1 << (depth + 1)) - 1; // 511
    const int n_cycles = 60;
    const int n = n_tree + 6 * n_cycles; // 871
    std::mt19937_64 rng(seed);

    EdgeBuilder b;
    for (int v = 1; v < n_tree; ++v) b.add((v - 1) / 2, v);

    std::vector<int> labels(n, 0);
    std::uniform_int_distribution<int> tree_pick(0, n_tree - 1);
    for (int c = 0; c < n_cycles; ++c) {
        const int first = n_tree + 6 * c;
        for (int i = 0; i < 6; ++i) {
            b.add(first + i, first + (i + 1) % 6);
            labels[first + i] = 1;
        }
        b.add(first, tree_pick(rng));
    }

    std::uniform_int_distribution<int> any(0, n - 1);
    int extra = 45;
    while (extra > 0)
        if (b.add(any(rng), any(rng))) --extra;

    return Graph(n, std::move(b.edges), all_one_features(n, 10), std::move(labels),
                 {"base", "cycle"});
}

} // namespace slicegx

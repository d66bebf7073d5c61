#pragma once

#include <cstdint>

#include "slicegx/graph.hpp"

namespace slicegx {

/// Barabasi-Albert base graph (300 nodes) augmented with 80 five-node house
/// motifs plus a handful of random extra edges. 700 nodes, 10-dim all-one
/// features, classes: 0 base, 1 motif top, 2 motif middle, 3 motif bottom.
Graph gen_ba_shapes(uint64_t seed);

/// Depth-8 balanced binary tree (511 nodes) augmented with 60 six-node cycle
/// motifs. 871 nodes, 10-dim all-one features, classes: 0 base, 1 motif.
Graph gen_tree_cycles(uint64_t seed);

} // namespace slicegx

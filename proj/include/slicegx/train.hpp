#pragma once

#include <cstdint>

#include "slicegx/model.hpp"

namespace slicegx {

/// Full-batch training of an L-layer GCN plus MLP predictor on the labeled
/// graph, minimizing cross-entropy with Adam (lr as given, beta 0.9/0.999).
/// Deterministic per seed. Width must equal the graph's feature dimension.
GcnModel train(const Graph& g, int num_layers, int width, int num_classes, int epochs, double lr,
               uint64_t seed);

/// Fraction of nodes whose argmax logit matches the stored label, using the
/// whole-graph forward pass.
double train_accuracy(const GcnModel& m, const Graph& g);

} // namespace slicegx

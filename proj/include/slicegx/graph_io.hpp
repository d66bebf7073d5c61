#pragma once

#include <string>

#include "slicegx/graph.hpp"

namespace slicegx {

/// Graph file: JSON document with fields `num_nodes`, `feature_dim`,
/// `features` (row-major array of arrays), optional `labels`, `edges`
/// (array of [src, dst] pairs with src < dst) and optional `class_names`.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

Graph graph_from_json_text(const std::string& text, const std::string& origin = "<string>");
std::string graph_to_json_text(const Graph& g);

} // namespace slicegx

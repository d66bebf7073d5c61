#include "slicegx/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace slicegx {

namespace {

nlohmann::json parse_json_file(const std::string& path, std::string* origin) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    *origin = path;
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace

Graph graph_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }

    auto require = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field)) throw parse_error(origin + ": missing field '" + field + "'");
        return j.at(field);
    };

    const int n = require("num_nodes").get<int>();
    const int d = require("feature_dim").get<int>();
    if (n < 0 || d < 0) throw parse_error(origin + ": negative num_nodes or feature_dim");

    const auto& jf = require("features");
    if (!jf.is_array() || static_cast<int>(jf.size()) != n)
        throw parse_error(origin + ": 'features' must be an array of " + std::to_string(n) + " rows");
    Matrix feats(n, d);
    for (int i = 0; i < n; ++i) {
        const auto& row = jf.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw parse_error(origin + ": features row " + std::to_string(i) + " has width " +
                              std::to_string(row.size()) + ", expected " + std::to_string(d));
        for (int c = 0; c < d; ++c) feats(i, c) = row.at(c).get<double>();
    }

    std::optional<std::vector<int>> labels;
    if (j.contains("labels") && !j.at("labels").is_null()) {
        labels = j.at("labels").get<std::vector<int>>();
        if (static_cast<int>(labels->size()) != n)
            throw parse_error(origin + ": 'labels' length " + std::to_string(labels->size()) +
                              ", expected " + std::to_string(n));
    }

    const auto& je = require("edges");
    std::vector<Edge> edges;
    edges.reserve(je.size());
    for (size_t i = 0; i < je.size(); ++i) {
        const auto& pair = je.at(i);
        if (!pair.is_array() || pair.size() != 2)
            throw parse_error(origin + ": edge entry " + std::to_string(i) + " is not a [src, dst] pair");
        edges.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
    }

    std::vector<std::string> class_names;
    if (j.contains("class_names")) class_names = j.at("class_names").get<std::vector<std::string>>();

    try {
        return Graph(n, std::move(edges), std::move(feats), std::move(labels), std::move(class_names));
    } catch (const input_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
}

std::string graph_to_json_text(const Graph& g) {
    nlohmann::json j;
    j["num_nodes"] = g.node_count();
    j["feature_dim"] = g.feature_dim();
    auto rows = nlohmann::json::array();
    for (int i = 0; i < g.node_count(); ++i) {
        auto row = nlohmann::json::array();
        for (double x : g.features().row(i)) row.push_back(x);
        rows.push_back(std::move(row));
    }
    j["features"] = std::move(rows);
    if (g.has_labels()) j["labels"] = g.labels();
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back(nlohmann::json::array({e.u, e.v}));
    j["edges"] = std::move(edges);
    if (!g.class_names().empty()) j["class_names"] = g.class_names();
    return j.dump(2) + "\n";
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return graph_from_json_text(text.str(), path);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open file for writing: " + path);
    out << graph_to_json_text(g);
    if (!out) throw input_error("failed writing file: " + path);
}

} // namespace slicegx

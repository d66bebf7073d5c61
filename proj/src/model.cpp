#include "slicegx/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slicegx/kernels.hpp"

namespace slicegx {

GcnModel::GcnModel(std::vector<Matrix> layer_weights, std::vector<std::vector<double>> layer_biases,
                   std::vector<DenseLayer> predictor)
    : layers_(std::move(layer_weights)), biases_(std::move(layer_biases)),
      predictor_(std::move(predictor)) {
    if (layers_.empty()) throw input_error("model: at least one GCN layer required");
    if (biases_.size() != layers_.size()) throw input_error("model: bias count != layer count");
    width_ = layers_[0].rows();
    for (size_t l = 0; l < layers_.size(); ++l) {
        if (layers_[l].rows() != width_ || layers_[l].cols() != width_)
            throw input_error("model: layer " + std::to_string(l + 1) + " is not " +
                              std::to_string(width_) + "x" + std::to_string(width_));
        if (static_cast<int>(biases_[l].size()) != width_)
            throw input_error("model: layer " + std::to_string(l + 1) + " bias width mismatch");
    }
    if (predictor_.empty()) throw input_error("model: predictor required");
    int in = width_;
    for (size_t p = 0; p < predictor_.size(); ++p) {
        const auto& layer = predictor_[p];
        if (layer.weight.rows() != in)
            throw input_error("model: predictor layer " + std::to_string(p) +
                              " input width mismatch");
        if (static_cast<int>(layer.bias.size()) != layer.weight.cols())
            throw input_error("model: predictor layer " + std::to_string(p) + " bias mismatch");
        in = layer.weight.cols();
    }
    num_classes_ = in;
}

namespace {

void check_compatible(const GcnModel& m, const Graph& g, int upto_layer) {
    if (g.feature_dim() != m.width())
        throw input_error("forward: graph feature width " + std::to_string(g.feature_dim()) +
                          " != model width " + std::to_string(m.width()));
    if (upto_layer < 1 || upto_layer > m.num_layers())
        throw input_error("forward: layer " + std::to_string(upto_layer) + " outside [1," +
                          std::to_string(m.num_layers()) + "]");
}

} // namespace

Matrix forward(const GcnModel& m, const Graph& g, int upto_layer) {
    check_compatible(m, g, upto_layer);
    std::vector<double> isd = inv_sqrt_degrees(g);
    Matrix z = g.features();
    Matrix next;
    for (int l = 0; l < upto_layer; ++l) {
        gcn_layer_forward(g, isd, z, m.layer_weight(l), m.layer_bias(l), next);
        std::swap(z, next);
    }
    return z;
}

ForwardTrace forward_trace(const GcnModel& m, const Graph& g, int upto_layer) {
    check_compatible(m, g, upto_layer);
    std::vector<double> isd = inv_sqrt_degrees(g);
    ForwardTrace tr;
    tr.z.reserve(upto_layer + 1);
    tr.z.push_back(g.features());
    tr.active.resize(upto_layer);
    for (int l = 0; l < upto_layer; ++l) {
        Matrix next;
        gcn_layer_forward(g, isd, tr.z.back(), m.layer_weight(l), m.layer_bias(l), next,
                          &tr.active[l]);
        tr.z.push_back(std::move(next));
    }
    return tr;
}

Prediction apply_predictor(const GcnModel& m, std::span<const double> embedding) {
    std::vector<double> cur(embedding.begin(), embedding.end());
    const auto& layers = m.predictor();
    for (size_t p = 0; p < layers.size(); ++p) {
        const auto& layer = layers[p];
        std::vector<double> next(layer.weight.cols());
        for (int j = 0; j < layer.weight.cols(); ++j) {
            double s = layer.bias[j];
            for (int i = 0; i < layer.weight.rows(); ++i) s += cur[i] * layer.weight(i, j);
            next[j] = s;
        }
        if (p + 1 < layers.size())
            for (double& x : next) x = x > 0.0 ? x : 0.0;
        cur = std::move(next);
    }

    Prediction pred;
    pred.logits = cur;
    double mx = *std::max_element(cur.begin(), cur.end());
    double sum = 0.0;
    pred.probs.resize(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) {
        pred.probs[i] = std::exp(cur[i] - mx);
        sum += pred.probs[i];
    }
    for (double& p : pred.probs) p /= sum;
    pred.label = 0;
    for (size_t i = 1; i < pred.probs.size(); ++i)
        if (pred.probs[i] > pred.probs[pred.label]) pred.label = static_cast<int>(i);
    return pred;
}

Prediction predict_sliced(const GcnModel& m, const Graph& g, int v, int layer) {
    g.check_node(v);
    check_compatible(m, g, layer);
    Subgraph ball = khop_subgraph(g, v, layer);
    std::vector<int> to_parent;
    Graph sub = materialize(ball, &to_parent);
    const int local =
        static_cast<int>(std::lower_bound(to_parent.begin(), to_parent.end(), v) - to_parent.begin());
    Matrix z = forward(m, sub, layer);
    return apply_predictor(m, z.row(local));
}

Prediction predict_full(const GcnModel& m, const Graph& g, int v) {
    return predict_sliced(m, g, v, m.num_layers());
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.data();
    return j;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& origin) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || data.size() != static_cast<size_t>(rows) * cols)
        throw parse_error(origin + ": matrix data size mismatch");
    Matrix m(rows, cols);
    m.data() = std::move(data);
    return m;
}

} // namespace

std::string model_to_json_text(const GcnModel& m) {
    nlohmann::json j;
    j["num_layers"] = m.num_layers();
    j["width"] = m.width();
    j["num_classes"] = m.num_classes();
    auto ws = nlohmann::json::array();
    auto bs = nlohmann::json::array();
    for (int l = 0; l < m.num_layers(); ++l) {
        ws.push_back(matrix_to_json(m.layer_weight(l)));
        bs.push_back(std::vector<double>(m.layer_bias(l).begin(), m.layer_bias(l).end()));
    }
    j["layer_weights"] = std::move(ws);
    j["layer_biases"] = std::move(bs);
    auto pred = nlohmann::json::array();
    for (const auto& layer : m.predictor()) {
        nlohmann::json p = matrix_to_json(layer.weight);
        p["bias"] = layer.bias;
        pred.push_back(std::move(p));
    }
    j["predictor"] = std::move(pred);
    return j.dump(2) + "\n";
}

GcnModel model_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
    try {
        const int num_layers = j.at("num_layers").get<int>();
        std::vector<Matrix> ws;
        std::vector<std::vector<double>> bs;
        for (const auto& jm : j.at("layer_weights")) ws.push_back(matrix_from_json(jm, origin));
        bs = j.at("layer_biases").get<std::vector<std::vector<double>>>();
        if (static_cast<int>(ws.size()) != num_layers)
            throw parse_error(origin + ": num_layers disagrees with layer_weights");
        std::vector<DenseLayer> pred;
        for (const auto& jp : j.at("predictor")) {
            DenseLayer layer;
            layer.weight = matrix_from_json(jp, origin);
            layer.bias = jp.at("bias").get<std::vector<double>>();
            pred.push_back(std::move(layer));
        }
        GcnModel m(std::move(ws), std::move(bs), std::move(pred));
        if (j.at("width").get<int>() != m.width())
            throw parse_error(origin + ": width disagrees with layer shapes");
        if (j.at("num_classes").get<int>() != m.num_classes())
            throw parse_error(origin + ": num_classes disagrees with predictor shapes");
        return m;
    } catch (const parse_error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(origin + ": " + e.what());
    } catch (const input_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
}

GcnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return model_from_json_text(text.str(), path);
}

void save_model(const GcnModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open file for writing: " + path);
    out << model_to_json_text(m);
    if (!out) throw input_error("failed writing file: " + path);
}

} // namespace slicegx

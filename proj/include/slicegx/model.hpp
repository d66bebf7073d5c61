#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slicegx/graph.hpp"
#include "slicegx/matrix.hpp"

namespace slicegx {

struct DenseLayer {
    Matrix weight;            // in x out
    std::vector<double> bias; // out
    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// GCN encoder (L layers, uniform width d) plus an MLP predictor mapping the
/// final embedding to class logits. Immutable once constructed.
class GcnModel {
public:
    GcnModel(std::vector<Matrix> layer_weights, std::vector<std::vector<double>> layer_biases,
             std::vector<DenseLayer> predictor);

    int num_layers() const { return static_cast<int>(layers_.size()); }
    int width() const { return width_; }
    int num_classes() const { return num_classes_; }

    const Matrix& layer_weight(int l) const { return layers_[l]; }           // 0-based
    std::span<const double> layer_bias(int l) const { return biases_[l]; }   // 0-based
    const std::vector<DenseLayer>& predictor() const { return predictor_; }

    friend bool operator==(const GcnModel&, const GcnModel&) = default;

private:
    std::vector<Matrix> layers_;
    std::vector<std::vector<double>> biases_;
    std::vector<DenseLayer> predictor_;
    int width_ = 0;
    int num_classes_ = 0;
};

struct Prediction {
    std::vector<double> logits;
    std::vector<double> probs; // softmax(logits)
    int label = 0;             // argmax, smallest index on ties
};

/// Per-layer products of a forward pass, kept for Jacobian propagation.
struct ForwardTrace {
    std::vector<Matrix> z;                    // z[0] = input features, z[t] = layer t output
    std::vector<std::vector<uint8_t>> active; // active[t-1][v*d+j]: ReLU gate open at layer t
};

/// Whole-graph embeddings Z^l via repeated z <- relu(Ahat z W + b) with
/// Ahat = D^-1/2 (A + I) D^-1/2. Deterministic for any thread count.
Matrix forward(const GcnModel& m, const Graph& g, int upto_layer);
ForwardTrace forward_trace(const GcnModel& m, const Graph& g, int upto_layer);

Prediction apply_predictor(const GcnModel& m, std::span<const double> embedding);

/// Output of the l-sliced model at node v. Inference runs on the l-hop
/// computation graph of v, so it depends exactly on the data message passing
/// can reach; the full model output is the L-sliced case.
Prediction predict_sliced(const GcnModel& m, const Graph& g, int v, int layer);
Prediction predict_full(const GcnModel& m, const Graph& g, int v);

/// Model file: JSON with num_layers, width, num_classes, layer_weights,
/// layer_biases and predictor layers. Numeric round-trip is lossless.
GcnModel load_model(const std::string& path);
void save_model(const GcnModel& m, const std::string& path);
GcnModel model_from_json_text(const std::string& text, const std::string& origin = "<string>");
std::string model_to_json_text(const GcnModel& m);

} // namespace slicegx

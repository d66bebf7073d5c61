#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slicegx/graph.hpp"
#include "slicegx/matrix.hpp"

namespace slicegx {

/// 1/sqrt(1 + deg(v)) per node; the degree matrix includes the analytic
/// self-loop.
std::vector<double> inv_sqrt_degrees(const Graph& g);

/// out = relu(Ahat z W + b). Rows are independent, so the OpenMP version is
/// bitwise identical to the serial one for any thread count. When `active`
/// is non-null it receives the ReLU gate pattern (1 = pre-activation > 0).
void gcn_layer_forward(const Graph& g, std::span<const double> inv_sqrt_deg, const Matrix& z,
                       const Matrix& w, std::span<const double> bias, Matrix& out,
                       std::vector<uint8_t>* active = nullptr);

namespace reference {

/// Dense Ahat = D^-1/2 (A + I) D^-1/2 built entrywise.
Matrix dense_normalized_adjacency(const Graph& g);

/// Serial dense-matrix layer, kept as the reference implementation for the
/// sparse OpenMP kernel.
Matrix gcn_layer_forward_dense(const Matrix& ahat, const Matrix& z, const Matrix& w,
                               std::span<const double> bias);

} // namespace reference

} // namespace slicegx

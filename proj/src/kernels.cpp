#include "slicegx/kernels.hpp"

#include <cmath>

namespace slicegx {

std::vector<double> inv_sqrt_degrees(const Graph& g) {
    std::vector<double> isd(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) isd[v] = 1.0 / std::sqrt(1.0 + g.degree(v));
    return isd;
}

void gcn_layer_forward(const Graph& g, std::span<const double> inv_sqrt_deg, const Matrix& z,
                       const Matrix& w, std::span<const double> bias, Matrix& out,
                       std::vector<uint8_t>* active) {
    const int n = g.node_count();
    const int d_in = z.cols();
    const int d_out = w.cols();
    out = Matrix(n, d_out);
    if (active) active->assign(static_cast<size_t>(n) * d_out, 0);

#pragma omp parallel for schedule(static)
    for (int v = 0; v < n; ++v) {
        std::vector<double> agg(d_in, 0.0);
        const double self = inv_sqrt_deg[v] * inv_sqrt_deg[v];
        auto zv = z.row(v);
        for (int i = 0; i < d_in; ++i) agg[i] = self * zv[i];
        for (int u : g.neighbors(v)) {
            const double coef = inv_sqrt_deg[v] * inv_sqrt_deg[u];
            auto zu = z.row(u);
            for (int i = 0; i < d_in; ++i) agg[i] += coef * zu[i];
        }
        auto o = out.row(v);
        for (int j = 0; j < d_out; ++j) {
            double pre = bias.empty() ? 0.0 : bias[j];
            for (int i = 0; i < d_in; ++i) pre += agg[i] * w(i, j);
            if (pre > 0.0) {
                o[j] = pre;
                if (active) (*active)[static_cast<size_t>(v) * d_out + j] = 1;
            }
        }
    }
}

namespace reference {

Matrix dense_normalized_adjacency(const Graph& g) {
    const int n = g.node_count();
    Matrix ahat(n, n);
    std::vector<double> isd = inv_sqrt_degrees(g);
    for (int v = 0; v < n; ++v) ahat(v, v) = isd[v] * isd[v];
    for (const auto& e : g.edges()) {
        ahat(e.u, e.v) = isd[e.u] * isd[e.v];
        ahat(e.v, e.u) = isd[e.u] * isd[e.v];
    }
    return ahat;
}

Matrix gcn_layer_forward_dense(const Matrix& ahat, const Matrix& z, const Matrix& w,
                               std::span<const double> bias) {
    const int n = ahat.rows();
    const int d_in = z.cols();
    const int d_out = w.cols();
    Matrix agg(n, d_in);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < d_in; ++i) {
            double s = 0.0;
            for (int u = 0; u < n; ++u) s += ahat(v, u) * z(u, i);
            agg(v, i) = s;
        }
    Matrix out(n, d_out);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < d_out; ++j) {
            double pre = bias.empty() ? 0.0 : bias[j];
            for (int i = 0; i < d_in; ++i) pre += agg(v, i) * w(i, j);
            out(v, j) = pre > 0.0 ? pre : 0.0;
        }
    return out;
}

} // namespace reference

} // namespace slicegx

#include "slicegx/train.hpp"

#include <cmath>
#include <random>

#include "slicegx/kernels.hpp"

namespace slicegx {

namespace {

// out = a * b
Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
    for (int r = 0; r < a.rows(); ++r)
        for (int j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (int i = 0; i < a.cols(); ++i) s += a(r, i) * b(i, j);
            out(r, j) = s;
        }
    return out;
}

// out = a^T * b  (a: n x p, b: n x q, out: p x q)
Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    Matrix out(a.cols(), b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int i = 0; i < a.cols(); ++i) {
            const double av = a(r, i);
            if (av == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += av * b(r, j);
        }
    return out;
}

// out = a * b^T  (a: n x q, b: p x q, out: n x p)
Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.rows());
#pragma omp parallel for schedule(static)
    for (int r = 0; r < a.rows(); ++r)
        for (int i = 0; i < b.rows(); ++i) {
            double s = 0.0;
            for (int j = 0; j < a.cols(); ++j) s += a(r, j) * b(i, j);
            out(r, i) = s;
        }
    return out;
}

// out = Ahat * x, sparse, row-parallel.
Matrix aggregate(const Graph& g, std::span<const double> isd, const Matrix& x) {
    Matrix out(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
    for (int v = 0; v < g.node_count(); ++v) {
        auto o = out.row(v);
        const double self = isd[v] * isd[v];
        auto xv = x.row(v);
        for (int i = 0; i < x.cols(); ++i) o[i] = self * xv[i];
        for (int u : g.neighbors(v)) {
            const double coef = isd[v] * isd[u];
            auto xu = x.row(u);
            for (int i = 0; i < x.cols(); ++i) o[i] += coef * xu[i];
        }
    }
    return out;
}

std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) s[c] += m(r, c);
    return s;
}

struct Adam {
    double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int step = 0;
    std::vector<std::vector<double>> m, v;

    explicit Adam(double lr) : lr(lr) {}

    void register_params(const std::vector<std::vector<double>*>& params) {
        m.resize(params.size());
        v.resize(params.size());
        for (size_t i = 0; i < params.size(); ++i) {
            m[i].assign(params[i]->size(), 0.0);
            v[i].assign(params[i]->size(), 0.0);
        }
    }

    void update(const std::vector<std::vector<double>*>& params,
                const std::vector<const std::vector<double>*>& grads) {
        ++step;
        const double bc1 = 1.0 - std::pow(beta1, step);
        const double bc2 = 1.0 - std::pow(beta2, step);
        for (size_t i = 0; i < params.size(); ++i) {
            auto& p = *params[i];
            const auto& gvec = *grads[i];
            for (size_t j = 0; j < p.size(); ++j) {
                m[i][j] = beta1 * m[i][j] + (1.0 - beta1) * gvec[j];
                v[i][j] = beta2 * v[i][j] + (1.0 - beta2) * gvec[j] * gvec[j];
                p[j] -= lr * (m[i][j] / bc1) / (std::sqrt(v[i][j] / bc2) + eps);
            }
        }
    }
};

Matrix glorot(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / (rows + cols)));
    Matrix m(rows, cols);
    for (double& x : m.data()) x = dist(rng);
    return m;
}

} // namespace

GcnModel train(const Graph& g, int num_layers, int width, int num_classes, int epochs, double lr,
               uint64_t seed) {
    if (!g.has_labels()) throw input_error("train: graph has no labels");
    if (g.feature_dim() != width)
        throw input_error("train: width " + std::to_string(width) + " != feature dim " +
                          std::to_string(g.feature_dim()));
    if (num_layers < 1) throw input_error("train: need at least one layer");
    const auto& labels = g.labels();
    for (int y : labels)
        if (y < 0 || y >= num_classes) throw input_error("train: label outside [0, num_classes)");

    const int n = g.node_count();
    const int hidden = width;
    std::mt19937_64 rng(seed);

    std::vector<Matrix> w(num_layers);
    std::vector<std::vector<double>> b(num_layers);
    for (int l = 0; l < num_layers; ++l) {
        w[l] = glorot(width, width, rng);
        b[l].assign(width, 0.0);
    }
    Matrix w1 = glorot(width, hidden, rng);
    std::vector<double> b1(hidden, 0.0);
    Matrix w2 = glorot(hidden, num_classes, rng);
    std::vector<double> b2(num_classes, 0.0);

    Adam adam(lr);
    std::vector<std::vector<double>*> params;
    for (int l = 0; l < num_layers; ++l) params.push_back(&w[l].data());
    for (int l = 0; l < num_layers; ++l) params.push_back(&b[l]);
    params.push_back(&w1.data());
    params.push_back(&b1);
    params.push_back(&w2.data());
    params.push_back(&b2);
    adam.register_params(params);

    const std::vector<double> isd = inv_sqrt_degrees(g);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        // Forward, keeping what the backward pass needs.
        std::vector<Matrix> z(num_layers + 1);
        std::vector<Matrix> agg(num_layers);
        z[0] = g.features();
        for (int l = 0; l < num_layers; ++l) {
            agg[l] = aggregate(g, isd, z[l]);
            Matrix pre = matmul(agg[l], w[l]);
            z[l + 1] = Matrix(n, width);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < width; ++c) {
                    const double p = pre(r, c) + b[l][c];
                    z[l + 1](r, c) = p > 0.0 ? p : 0.0;
                }
        }
        Matrix h_pre = matmul(z[num_layers], w1);
        Matrix h(n, hidden);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < hidden; ++c) {
                const double p = h_pre(r, c) + b1[c];
                h(r, c) = p > 0.0 ? p : 0.0;
            }
        Matrix logits = matmul(h, w2);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < num_classes; ++c) logits(r, c) += b2[c];

        // d(mean CE)/dlogits = (softmax - onehot) / n
        Matrix dlogits(n, num_classes);
        for (int r = 0; r < n; ++r) {
            double mx = logits(r, 0);
            for (int c = 1; c < num_classes; ++c) mx = std::max(mx, logits(r, c));
            double sum = 0.0;
            for (int c = 0; c < num_classes; ++c) {
                dlogits(r, c) = std::exp(logits(r, c) - mx);
                sum += dlogits(r, c);
            }
            for (int c = 0; c < num_classes; ++c) dlogits(r, c) /= sum;
            dlogits(r, labels[r]) -= 1.0;
            for (int c = 0; c < num_classes; ++c) dlogits(r, c) /= n;
        }

        Matrix gw2 = matmul_at_b(h, dlogits);
        std::vector<double> gb2 = column_sums(dlogits);
        Matrix dh = matmul_a_bt(dlogits, w2);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < hidden; ++c)
                if (h(r, c) == 0.0) dh(r, c) = 0.0;
        Matrix gw1 = matmul_at_b(z[num_layers], dh);
        std::vector<double> gb1 = column_sums(dh);
        Matrix dz = matmul_a_bt(dh, w1);

        std::vector<Matrix> gw(num_layers);
        std::vector<std::vector<double>> gb(num_layers);
        for (int l = num_layers - 1; l >= 0; --l) {
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < width; ++c)
                    if (z[l + 1](r, c) == 0.0) dz(r, c) = 0.0;
            gw[l] = matmul_at_b(agg[l], dz);
            gb[l] = column_sums(dz);
            if (l > 0) dz = aggregate(g, isd, matmul_a_bt(dz, w[l]));
        }

        std::vector<const std::vector<double>*> grads;
        for (int l = 0; l < num_layers; ++l) grads.push_back(&gw[l].data());
        for (int l = 0; l < num_layers; ++l) grads.push_back(&gb[l]);
        grads.push_back(&gw1.data());
        grads.push_back(&gb1);
        grads.push_back(&gw2.data());
        grads.push_back(&gb2);
        adam.update(params, grads);
    }

    std::vector<DenseLayer> predictor;
    predictor.push_back({std::move(w1), std::move(b1)});
    predictor.push_back({std::move(w2), std::move(b2)});
    return GcnModel(std::move(w), std::move(b), std::move(predictor));
}

double train_accuracy(const GcnModel& m, const Graph& g) {
    const auto& labels = g.labels();
    Matrix z = forward(m, g, m.num_layers());
    int correct = 0;
    for (int v = 0; v < g.node_count(); ++v) {
        Prediction p = apply_predictor(m, z.row(v));
        if (p.label == labels[v]) ++correct;
    }
    return static_cast<double>(correct) / g.node_count();
}

} // namespace slicegx

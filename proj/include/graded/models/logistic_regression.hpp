// Multinomial logistic regression: softmax over linear scores, mean
// cross-entropy with L2 on the weights, full-batch gradient descent until
// the gradient norm falls under tolerance or the epoch cap.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "graded/core.hpp"

namespace graded {

struct LogisticRegressionConfig {
    double l2 = 1e-4;
    double learning_rate = 0.5;
    int max_epochs = 2000;
    double grad_tol = 1e-5;
};

struct LogisticRegressionModel {
    int num_classes = 0;
    int dim = 0;
    std::vector<double> weights;  // num_classes x dim, row major
    std::vector<double> bias;     // num_classes

    std::vector<double> logits(const std::vector<double>& x) const {
        std::vector<double> z(num_classes);
        for (int c = 0; c < num_classes; ++c) {
            double s = bias[c];
            const double* w = weights.data() + static_cast<std::size_t>(c) * dim;
            for (int f = 0; f < dim; ++f) s += w[f] * x[f];
            z[c] = s;
        }
        return z;
    }

    std::vector<double> probabilities(const std::vector<double>& x) const {
        std::vector<double> z = logits(x);
        double zmax = z[0];
        for (double v : z) zmax = std::max(zmax, v);
        double sum = 0.0;
        for (double& v : z) {
            v = std::exp(v - zmax);
            sum += v;
        }
        for (double& v : z) v /= sum;
        return z;
    }

    int predict_class(const std::vector<double>& x) const {
        std::vector<double> z = logits(x);
        int best = 0;
        for (int c = 1; c < num_classes; ++c)
            if (z[c] > z[best]) best = c;
        return best;
    }
};

// Loss and gradient at the given parameters; exposed so tests can check
// the analytic gradient against central finite differences.
inline double lr_loss_and_grad(const std::vector<std::vector<double>>& X,
                               const std::vector<int>& classes, int k, double l2,
                               const std::vector<double>& weights,
                               const std::vector<double>& bias,
                               std::vector<double>& grad_w,
                               std::vector<double>& grad_b) {
    const std::size_t n = X.size();
    const int d = static_cast<int>(X.front().size());
    grad_w.assign(weights.size(), 0.0);
    grad_b.assign(bias.size(), 0.0);

    double loss = 0.0;
    std::vector<double> z(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            double s = bias[c];
            const double* w = weights.data() + static_cast<std::size_t>(c) * d;
            for (int f = 0; f < d; ++f) s += w[f] * X[i][f];
            z[c] = s;
        }
        double zmax = z[0];
        for (double v : z) zmax = std::max(zmax, v);
        double sum = 0.0;
        for (int c = 0; c < k; ++c) sum += std::exp(z[c] - zmax);
        double log_sum = std::log(sum) + zmax;
        loss += log_sum - z[classes[i]];
        for (int c = 0; c < k; ++c) {
            double p = std::exp(z[c] - log_sum);
            double g = (p - (c == classes[i] ? 1.0 : 0.0)) / static_cast<double>(n);
            grad_b[c] += g;
            double* gw = grad_w.data() + static_cast<std::size_t>(c) * d;
            for (int f = 0; f < d; ++f) gw[f] += g * X[i][f];
        }
    }
    loss /= static_cast<double>(n);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        loss += l2 * weights[i] * weights[i];
        grad_w[i] += 2.0 * l2 * weights[i];
    }
    return loss;
}

inline LogisticRegressionModel train_logistic_regression(
    const std::vector<std::vector<double>>& X, const std::vector<int>& classes, int k,
    const LogisticRegressionConfig& cfg = {}) {
    if (X.empty()) throw TrainingError("logistic regression: empty training set");
    if (k < 2) throw TrainingError("logistic regression: need at least 2 classes");
    const int d = static_cast<int>(X.front().size());

    LogisticRegressionModel m;
    m.num_classes = k;
    m.dim = d;
    m.weights.assign(static_cast<std::size_t>(k) * d, 0.0);
    m.bias.assign(k, 0.0);

    std::vector<double> grad_w, grad_b;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        double loss = lr_loss_and_grad(X, classes, k, cfg.l2, m.weights, m.bias,
                                       grad_w, grad_b);
        if (!std::isfinite(loss))
            throw TrainingError("logistic regression diverged (non-finite loss)");
        double norm_sq = 0.0;
        for (double g : grad_w) norm_sq += g * g;
        for (double g : grad_b) norm_sq += g * g;
        if (std::sqrt(norm_sq) < cfg.grad_tol) break;
        for (std::size_t i = 0; i < m.weights.size(); ++i)
            m.weights[i] -= cfg.learning_rate * grad_w[i];
        for (int c = 0; c < k; ++c) m.bias[c] -= cfg.learning_rate * grad_b[c];
    }
    return m;
}

}  // namespace graded

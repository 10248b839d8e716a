// Gaussian naive Bayes: per-class, per-feature normal densities with a
// variance floor, argmax of log-prior plus summed log-densities.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "graded/core.hpp"

namespace graded {

struct NaiveBayesConfig {
    double variance_floor = 1e-9;
};

struct NaiveBayesModel {
    std::vector<double> log_prior;             // per class
    std::vector<std::vector<double>> mean;     // class x feature
    std::vector<std::vector<double>> variance; // floored

    int predict_class(const std::vector<double>& x) const {
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < log_prior.size(); ++c) {
            double score = log_prior[c];
            for (std::size_t f = 0; f < x.size(); ++f) {
                double var = variance[c][f];
                double diff = x[f] - mean[c][f];
                score += -0.5 * std::log(2.0 * std::numbers::pi * var) -
                         diff * diff / (2.0 * var);
            }
            if (score > best_score) {  // ties keep the lower class index
                best_score = score;
                best = static_cast<int>(c);
            }
        }
        return best;
    }
};

inline NaiveBayesModel train_naive_bayes(const std::vector<std::vector<double>>& X,
                                         const std::vector<int>& classes, int k,
                                         const NaiveBayesConfig& cfg = {}) {
    const std::size_t n = X.size();
    if (n == 0) throw TrainingError("naive bayes: empty training set");
    const std::size_t d = X.front().size();

    std::vector<std::size_t> counts(k, 0);
    for (int c : classes) counts.at(static_cast<std::size_t>(c))++;
    for (int c = 0; c < k; ++c)
        if (counts[c] == 0)
            throw TrainingError("naive bayes: class " + std::to_string(c) +
                                " has no training examples");

    NaiveBayesModel m;
    m.log_prior.resize(k);
    m.mean.assign(k, std::vector<double>(d, 0.0));
    m.variance.assign(k, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < d; ++f) m.mean[classes[i]][f] += X[i][f];
    for (int c = 0; c < k; ++c) {
        m.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
        for (std::size_t f = 0; f < d; ++f) m.mean[c][f] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < d; ++f) {
            double diff = X[i][f] - m.mean[classes[i]][f];
            m.variance[classes[i]][f] += diff * diff;
        }
    for (int c = 0; c < k; ++c)
        for (std::size_t f = 0; f < d; ++f)
            m.variance[c][f] = std::max(m.variance[c][f] / static_cast<double>(counts[c]),
                                        cfg.variance_floor);
    return m;
}

}  // namespace graded

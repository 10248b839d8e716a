// GloVe embedding training: windowed co-occurrence accumulation and
// AdaGrad on the weighted least-squares objective
//   sum_ij f(X_ij) (w_i . wt_j + b_i + bt_j - ln X_ij)^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "graded/core.hpp"
#include "graded/embeddings.hpp"
#include "graded/rng.hpp"
#include "graded/tokenizer.hpp"

namespace graded {

// Sparse symmetric co-occurrence weights over a fixed vocabulary.
class CooccurrenceMatrix {
public:
    explicit CooccurrenceMatrix(std::vector<std::string> vocab)
        : vocab_(std::move(vocab)) {
        for (std::size_t i = 0; i < vocab_.size(); ++i) index_[vocab_[i]] = i;
    }

    const std::vector<std::string>& vocab() const { return vocab_; }
    std::size_t vocab_size() const { return vocab_.size(); }
    std::size_t nonzeros() const { return cells_.size(); }

    std::size_t index_of(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end())
            throw DataError("token '" + token + "' not in co-occurrence vocabulary");
        return it->second;
    }

    void add(std::size_t i, std::size_t j, double w) {
        if (w <= 0.0) return;
        cells_[key(i, j)] += w;
    }

    double at(std::size_t i, std::size_t j) const {
        auto it = cells_.find(key(i, j));
        return it == cells_.end() ? 0.0 : it->second;
    }

    // Canonical (i <= j) entries in ascending order; the deterministic
    // iteration base for training.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> entries_sorted() const {
        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
        out.reserve(cells_.size());
        for (const auto& [k, w] : cells_)
            out.emplace_back(static_cast<std::uint32_t>(k >> 32),
                             static_cast<std::uint32_t>(k & 0xFFFFFFFFu), w);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static std::uint64_t key(std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
    }

    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::uint64_t, double> cells_;
};

// Accumulates 1/distance for every token pair within `window`. The
// vocabulary is every corpus token, ordered by descending count with
// lexicographic tie-break.
inline CooccurrenceMatrix build_cooccurrence(const std::vector<TokenSequence>& corpus,
                                             int window) {
    if (window < 1) throw ConfigError("co-occurrence window must be >= 1");
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& doc : corpus)
        for (const auto& tok : doc) counts[tok]++;
    std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> vocab;
    vocab.reserve(sorted.size());
    for (auto& [tok, c] : sorted) vocab.push_back(tok);

    CooccurrenceMatrix cooc(std::move(vocab));
    for (const auto& doc : corpus) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            std::size_t a = cooc.index_of(doc[i]);
            std::size_t hi = std::min(doc.size(), i + 1 + static_cast<std::size_t>(window));
            for (std::size_t j = i + 1; j < hi; ++j) {
                std::size_t b = cooc.index_of(doc[j]);
                cooc.add(a, b, 1.0 / static_cast<double>(j - i));
            }
        }
    }
    return cooc;
}

// Weighting function f(x) = (x/x_max)^alpha, capped at 1 for x >= x_max.
inline double glove_weight(double x, double x_max, double alpha) {
    if (x < 0.0) throw DataError("co-occurrence weight must be nonnegative");
    if (x >= x_max) return 1.0;
    return std::pow(x / x_max, alpha);
}

struct GloveConfig {
    int dim = 50;
    int window = 5;
    double x_max = 100.0;
    double alpha = 0.75;
    double learning_rate = 0.05;
    int epochs = 50;
    std::uint64_t seed = 13;

    void validate() const {
        if (dim < 1) throw ConfigError("glove: dim must be >= 1");
        if (window < 1) throw ConfigError("glove: window must be >= 1");
        if (x_max <= 0.0) throw ConfigError("glove: x_max must be > 0");
        if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("glove: alpha must be in (0,1]");
        if (epochs < 1) throw ConfigError("glove: epochs must be >= 1");
        if (learning_rate <= 0.0) throw ConfigError("glove: learning rate must be > 0");
    }
};

struct GloveModel {
    EmbeddingTable table;          // w + wt summed per token
    std::vector<double> epoch_loss;  // mean weighted squared error per epoch
};

inline GloveModel train_glove(const CooccurrenceMatrix& cooc, const GloveConfig& cfg) {
    cfg.validate();
    if (cooc.nonzeros() == 0)
        throw DataError("cannot train embeddings on an empty co-occurrence matrix");

    const std::size_t v = cooc.vocab_size();
    const std::size_t d = static_cast<std::size_t>(cfg.dim);

    // Both directions of every stored pair couple main and context vectors.
    struct Record {
        std::uint32_t i, j;
        double logx, weight;
    };
    std::vector<Record> records;
    for (const auto& [i, j, x] : cooc.entries_sorted()) {
        double lx = std::log(x);
        double w = glove_weight(x, cfg.x_max, cfg.alpha);
        records.push_back({i, j, lx, w});
        if (i != j) records.push_back({j, i, lx, w});
    }

    Rng rng(cfg.seed);
    std::vector<double> w_main(v * d), w_ctx(v * d);
    std::vector<double> b_main(v), b_ctx(v);
    const double init = 0.5 / static_cast<double>(cfg.dim);
    for (auto& x : w_main) x = rng.uniform(-init, init);
    for (auto& x : w_ctx) x = rng.uniform(-init, init);
    for (auto& x : b_main) x = rng.uniform(-init, init);
    for (auto& x : b_ctx) x = rng.uniform(-init, init);

    std::vector<double> g_main(v * d, 1.0), g_ctx(v * d, 1.0);
    std::vector<double> gb_main(v, 1.0), gb_ctx(v, 1.0);

    GloveModel out;
    out.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
    const double lr = cfg.learning_rate;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(records);
        double loss = 0.0;
        for (const Record& r : records) {
            double* wi = w_main.data() + static_cast<std::size_t>(r.i) * d;
            double* wj = w_ctx.data() + static_cast<std::size_t>(r.j) * d;
            double diff = b_main[r.i] + b_ctx[r.j] - r.logx;
            for (std::size_t k = 0; k < d; ++k) diff += wi[k] * wj[k];
            double fdiff = r.weight * diff;
            loss += 0.5 * fdiff * diff;

            double* gi = g_main.data() + static_cast<std::size_t>(r.i) * d;
            double* gj = g_ctx.data() + static_cast<std::size_t>(r.j) * d;
            for (std::size_t k = 0; k < d; ++k) {
                double grad_i = fdiff * wj[k];
                double grad_j = fdiff * wi[k];
                wi[k] -= lr * grad_i / std::sqrt(gi[k]);
                wj[k] -= lr * grad_j / std::sqrt(gj[k]);
                gi[k] += grad_i * grad_i;
                gj[k] += grad_j * grad_j;
            }
            b_main[r.i] -= lr * fdiff / std::sqrt(gb_main[r.i]);
            b_ctx[r.j] -= lr * fdiff / std::sqrt(gb_ctx[r.j]);
            gb_main[r.i] += fdiff * fdiff;
            gb_ctx[r.j] += fdiff * fdiff;
        }
        loss /= static_cast<double>(records.size());
        if (!std::isfinite(loss))
            throw TrainingError("glove training diverged (non-finite loss at epoch " +
                                std::to_string(epoch + 1) + ")");
        out.epoch_loss.push_back(loss);
    }

    EmbeddingTable table(cfg.dim);
    for (std::size_t t = 0; t < v; ++t) {
        std::vector<double> vec(d);
        for (std::size_t k = 0; k < d; ++k)
            vec[k] = w_main[t * d + k] + w_ctx[t * d + k];
        table.add(cooc.vocab()[t], std::move(vec));
    }
    out.table = std::move(table);
    return out;
}

}  // namespace graded

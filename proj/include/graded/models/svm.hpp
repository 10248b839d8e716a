// RBF-kernel support vector machines trained by SMO on the dual, with
// maximal-violating-pair working-set selection, and the one-against-one
// multiclass wrapper (one binary machine per unordered class pair,
// prediction by vote).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "graded/core.hpp"

namespace graded {

inline double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y,
                         double gamma) {
    if (x.size() != y.size())
        throw DataError("rbf_kernel: dimension mismatch (" + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()) + ")");
    if (gamma < 0.0) throw ConfigError("rbf_kernel: gamma must be >= 0");
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - y[i];
        dist_sq += diff * diff;
    }
    return std::exp(-gamma * dist_sq);
}

struct SvmConfig {
    double C = 2.0;
    double gamma = 0.01;
    double tol = 1e-3;          // KKT violation tolerance
    long max_iter = 1000000;    // pair updates before giving up
    std::size_t cache_bytes = 256 << 20;

    void validate() const {
        if (C <= 0.0) throw ConfigError("svm: C must be > 0");
        if (gamma < 0.0) throw ConfigError("svm: gamma must be >= 0");
        if (tol <= 0.0) throw ConfigError("svm: tol must be > 0");
        if (max_iter < 1) throw ConfigError("svm: max_iter must be >= 1");
    }
};

struct BinarySvm {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coeffs;  // alpha_i * y_i per support vector
    double bias = 0.0;
    double gamma = 0.0;
    double C = 0.0;
    bool converged = true;  // false when the iteration cap was hit

    double decision(const std::vector<double>& x) const {
        double sum = bias;
        for (std::size_t i = 0; i < support_vectors.size(); ++i)
            sum += coeffs[i] * rbf_kernel(support_vectors[i], x, gamma);
        return sum;
    }
};

namespace detail {

// Lazily computed kernel rows with FIFO eviction under a byte budget.
class KernelCache {
public:
    KernelCache(const std::vector<std::vector<double>>& X, double gamma,
                std::size_t max_bytes)
        : X_(X), gamma_(gamma), rows_(X.size()), norms_(X.size()) {
        for (std::size_t i = 0; i < X.size(); ++i) {
            double s = 0.0;
            for (double v : X[i]) s += v * v;
            norms_[i] = s;
        }
        max_rows_ = std::max<std::size_t>(2, max_bytes / (sizeof(double) * X.size() + 1));
    }

    const std::vector<double>& row(std::size_t i) {
        if (!rows_[i].empty()) return rows_[i];
        if (order_.size() >= max_rows_) {
            rows_[order_.front()].clear();
            rows_[order_.front()].shrink_to_fit();
            order_.pop_front();
        }
        auto& r = rows_[i];
        r.resize(X_.size());
        const auto& xi = X_[i];
        for (std::size_t t = 0; t < X_.size(); ++t) {
            double dot = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k) dot += xi[k] * X_[t][k];
            r[t] = std::exp(-gamma_ * (norms_[i] + norms_[t] - 2.0 * dot));
        }
        order_.push_back(i);
        return r;
    }

private:
    const std::vector<std::vector<double>>& X_;
    double gamma_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> norms_;
    std::deque<std::size_t> order_;
    std::size_t max_rows_;
};

}  // namespace detail

// SMO on the dual: minimize 1/2 a'Qa - e'a subject to 0 <= a <= C,
// y'a = 0, with Q_ij = y_i y_j K(x_i, x_j). The working pair is the
// maximal violating pair; convergence when the violation gap drops
// below tol. Hitting the iteration cap flags the model instead of
// throwing.
inline BinarySvm train_binary_svm(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y, const SvmConfig& cfg) {
    cfg.validate();
    const std::size_t n = X.size();
    if (n == 0 || y.size() != n)
        throw DataError("svm: feature/label size mismatch");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == +1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw DataError("svm: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw TrainingError("svm: training data contains a single class");

    const double C = cfg.C;
    constexpr double kTau = 1e-12;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // grad of the dual objective
    detail::KernelCache cache(X, cfg.gamma, cfg.cache_bytes);

    bool converged = false;
    for (long iter = 0; iter < cfg.max_iter; ++iter) {
        // i: argmax -y_t grad_t over I_up, j: argmin over I_low.
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool in_up = (y[t] == +1) ? alpha[t] < C : alpha[t] > 0.0;
            bool in_low = (y[t] == +1) ? alpha[t] > 0.0 : alpha[t] < C;
            if (in_up && v > m_up) {
                m_up = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < m_low) {
                m_low = v;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i < 0 || j < 0 || m_up - m_low < cfg.tol) {
            converged = true;
            break;
        }
        const std::size_t ii = static_cast<std::size_t>(i);
        const std::size_t jj = static_cast<std::size_t>(j);
        const auto& Ki = cache.row(ii);
        const auto& Kj = cache.row(jj);

        double old_ai = alpha[ii], old_aj = alpha[jj];
        // Curvature along the feasible direction is the same in both
        // branches: ||phi(x_i) - phi(x_j)||^2.
        double quad = Ki[ii] + Kj[jj] - 2.0 * Ki[jj];
        if (quad <= 0.0) quad = kTau;
        if (y[ii] != y[jj]) {
            double delta = (-grad[ii] - grad[jj]) / quad;
            double diff = alpha[ii] - alpha[jj];
            alpha[ii] += delta;
            alpha[jj] += delta;
            if (diff > 0.0) {
                if (alpha[jj] < 0.0) {
                    alpha[jj] = 0.0;
                    alpha[ii] = diff;
                }
            } else {
                if (alpha[ii] < 0.0) {
                    alpha[ii] = 0.0;
                    alpha[jj] = -diff;
                }
            }
            if (diff > 0.0) {
                if (alpha[ii] > C) {
                    alpha[ii] = C;
                    alpha[jj] = C - diff;
                }
            } else {
                if (alpha[jj] > C) {
                    alpha[jj] = C;
                    alpha[ii] = C + diff;
                }
            }
        } else {
            double delta = (grad[ii] - grad[jj]) / quad;
            double sum = alpha[ii] + alpha[jj];
            alpha[ii] -= delta;
            alpha[jj] += delta;
            if (sum > C) {
                if (alpha[ii] > C) {
                    alpha[ii] = C;
                    alpha[jj] = sum - C;
                }
            } else {
                if (alpha[jj] < 0.0) {
                    alpha[jj] = 0.0;
                    alpha[ii] = sum;
                }
            }
            if (sum > C) {
                if (alpha[jj] > C) {
                    alpha[jj] = C;
                    alpha[ii] = sum - C;
                }
            } else {
                if (alpha[ii] < 0.0) {
                    alpha[ii] = 0.0;
                    alpha[jj] = sum;
                }
            }
        }

        double d_ai = alpha[ii] - old_ai;
        double d_aj = alpha[jj] - old_aj;
        if (d_ai == 0.0 && d_aj == 0.0) {
            converged = true;  // numerically stuck at the optimum
            break;
        }
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[ii] * Ki[t] * d_ai + y[jj] * Kj[t] * d_aj);
    }

    // Bias from free support vectors; midpoint of the violation bounds
    // when every alpha sits on the box boundary.
    double bias;
    {
        double sum_free = 0.0;
        std::size_t n_free = 0;
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool in_up = (y[t] == +1) ? alpha[t] < C : alpha[t] > 0.0;
            bool in_low = (y[t] == +1) ? alpha[t] > 0.0 : alpha[t] < C;
            if (alpha[t] > 0.0 && alpha[t] < C) {
                sum_free += v;
                n_free++;
            }
            if (in_up) lb = std::max(lb, v);
            if (in_low) ub = std::min(ub, v);
        }
        if (n_free > 0)
            bias = sum_free / static_cast<double>(n_free);
        else
            bias = (ub + lb) / 2.0;
    }

    BinarySvm model;
    model.gamma = cfg.gamma;
    model.C = C;
    model.bias = bias;
    model.converged = converged;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 1e-12) {
            model.support_vectors.push_back(X[t]);
            model.coeffs.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

// One machine per unordered class pair (a < b in label order); the first
// class of the pair is the +1 side. Vote ties break by the largest sum of
// absolute decision margins among the tied classes, then by class order.
struct OvoSvmModel {
    struct Machine {
        int class_a = 0;  // +1 side
        int class_b = 0;  // -1 side
        BinarySvm svm;
    };
    std::vector<Machine> machines;
    int num_classes = 0;

    bool fully_converged() const {
        for (const auto& m : machines)
            if (!m.svm.converged) return false;
        return true;
    }

    int predict_class(const std::vector<double>& x) const {
        std::vector<int> votes(num_classes, 0);
        std::vector<double> margin(num_classes, 0.0);
        for (const auto& m : machines) {
            double d = m.svm.decision(x);
            int winner = d >= 0.0 ? m.class_a : m.class_b;
            votes[winner]++;
            margin[winner] += std::abs(d);
        }
        int best = 0;
        for (int c = 1; c < num_classes; ++c) {
            if (votes[c] > votes[best] ||
                (votes[c] == votes[best] && margin[c] > margin[best]))
                best = c;
        }
        return best;
    }
};

// `classes` are per-sample class indices in 0..k-1.
inline OvoSvmModel train_ovo_svm(const std::vector<std::vector<double>>& X,
                                 const std::vector<int>& classes, int k,
                                 const SvmConfig& cfg) {
    if (k < 2) throw TrainingError("ovo svm: need at least 2 classes");
    OvoSvmModel model;
    model.num_classes = k;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            std::vector<std::vector<double>> sub_x;
            std::vector<int> sub_y;
            for (std::size_t i = 0; i < X.size(); ++i) {
                if (classes[i] == a) {
                    sub_x.push_back(X[i]);
                    sub_y.push_back(+1);
                } else if (classes[i] == b) {
                    sub_x.push_back(X[i]);
                    sub_y.push_back(-1);
                }
            }
            OvoSvmModel::Machine machine;
            machine.class_a = a;
            machine.class_b = b;
            machine.svm = train_binary_svm(sub_x, sub_y, cfg);
            model.machines.push_back(std::move(machine));
        }
    }
    return model;
}

}  // namespace graded

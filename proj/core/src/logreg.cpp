#include "floodsift/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "floodsift/error.hpp"
#include "floodsift/parallel.hpp"

namespace floodsift::logreg {

namespace {

constexpr std::size_t kRowBlock = 1024;
constexpr double kArmijo = 1e-4;
constexpr double kContraction = 0.5;
constexpr double kMinStep = 1e-20;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void logits_into(const Matrix& W, std::span<const double> x_aug, std::span<double> out) {
    for (std::size_t k = 0; k < W.rows(); ++k) out[k] = dot(W.row(k), x_aug);
}

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// Two-loop recursion: returns -H * g.
std::vector<double> lbfgs_direction(const std::deque<CurvaturePair>& memory, std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
        alpha[m] = memory[m].rho * dot(memory[m].s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[m] * memory[m].y[i];
    }
    if (!memory.empty()) {
        const auto& last = memory.back();
        const double scale = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= scale;
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
        const double beta = memory[m].rho * dot(memory[m].y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += memory[m].s[i] * (alpha[m] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

void Config::validate() const {
    if (!(l2_strength >= 0.0) || !std::isfinite(l2_strength))
        throw TrainingError("train", "logreg l2_strength must be a finite value >= 0");
    if (max_iter == 0) throw TrainingError("train", "logreg max_iter must be positive");
    if (!(tol > 0.0)) throw TrainingError("train", "logreg tol must be positive");
    if (history == 0) throw TrainingError("train", "logreg history must be positive");
}

Model::Model(Matrix weights, std::size_t iterations_used, double final_loss)
    : weights_(std::move(weights)), iterations_used_(iterations_used), final_loss_(final_loss) {
    if (weights_.rows() < 2 || weights_.cols() < 1)
        throw TrainingError("train", "logreg weights need K >= 2 rows and a bias column");
    for (double w : weights_.values())
        if (!std::isfinite(w)) throw TrainingError("train", "logreg weights must be finite");
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    if (logits.empty()) return p;
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        p[k] = std::exp(logits[k] - top);
        total += p[k];
    }
    for (double& v : p) v /= total;
    return p;
}

Matrix augment(const Matrix& X) {
    Matrix out(X.rows(), X.cols() + 1, 1.0);
    for (std::size_t i = 0; i < X.rows(); ++i) std::copy(X.row(i).begin(), X.row(i).end(), out.row(i).begin());
    return out;
}

LossGradient loss_and_gradient(const Matrix& W, const Matrix& X_aug, const LabelVector& y, double l2) {
    const std::size_t n = X_aug.rows();
    const std::size_t K = W.rows();
    const std::size_t p = W.cols();
    if (X_aug.cols() != p) throw DataError("train", "weight/feature shape mismatch");
    if (y.size() != n) throw DataError("train", "label count does not match row count");
    if (n == 0) throw DataError("train", "loss needs at least one row");

    const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
    std::vector<double> block_loss(blocks, 0.0);
    std::vector<Matrix> block_grad(blocks);

    parallel_for(blocks, [&](std::size_t b) {
        Matrix g(K, p);
        double loss = 0.0;
        std::vector<double> z(K);
        const std::size_t end = std::min(n, (b + 1) * kRowBlock);
        for (std::size_t i = b * kRowBlock; i < end; ++i) {
            const auto x = X_aug.row(i);
            const auto label = static_cast<std::size_t>(y[i]);
            if (label >= K) throw DataError("train", "label " + std::to_string(y[i]) + " out of range");
            logits_into(W, x, z);
            const double top = *std::max_element(z.begin(), z.end());
            double total = 0.0;
            for (double v : z) total += std::exp(v - top);
            const double log_norm = top + std::log(total);
            loss += log_norm - z[label];
            for (std::size_t k = 0; k < K; ++k) {
                const double coef = std::exp(z[k] - log_norm) - (k == label ? 1.0 : 0.0);
                auto gk = g.row(k);
                for (std::size_t j = 0; j < p; ++j) gk[j] += coef * x[j];
            }
        }
        block_loss[b] = loss;
        block_grad[b] = std::move(g);
    });

    LossGradient out{0.0, Matrix(K, p)};
    for (std::size_t b = 0; b < blocks; ++b) {
        out.loss += block_loss[b];
        const auto src = block_grad[b].values();
        auto dst = out.gradient.values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    out.loss *= inv_n;
    for (double& v : out.gradient.values()) v *= inv_n;

    // Bias column (last) is not penalized.
    double penalty = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j + 1 < p; ++j) {
            penalty += W(k, j) * W(k, j);
            out.gradient(k, j) += l2 * inv_n * W(k, j);
        }
    }
    out.loss += 0.5 * l2 * inv_n * penalty;
    return out;
}

Model fit(const Matrix& X, const LabelVector& y, const Config& config, std::size_t num_classes) {
    config.validate();
    if (X.rows() == 0) throw TrainingError("train", "logreg needs at least one training row");
    if (X.rows() != y.size()) throw TrainingError("train", "label count does not match row count");
    for (double v : X.values())
        if (!std::isfinite(v)) throw TrainingError("train", "training matrix contains non-finite values");
    for (int label : y)
        if (label < 0) throw TrainingError("train", "negative class code in labels");

    const std::size_t inferred = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
    const std::size_t K = num_classes == 0 ? inferred : num_classes;
    if (inferred > K) throw TrainingError("train", "label exceeds the requested class count");
    if (K < 2) throw TrainingError("train", "logreg needs at least two classes");
    if (X.rows() < K) throw TrainingError("train", "logreg needs at least as many rows as classes");

    const Matrix X_aug = augment(X);
    Matrix W(K, X_aug.cols());
    const std::size_t dim = W.values().size();

    auto evaluate = [&](const Matrix& weights) { return loss_and_gradient(weights, X_aug, y, config.l2_strength); };

    LossGradient current = evaluate(W);
    std::deque<CurvaturePair> memory;
    std::size_t iter = 0;

    while (iter < config.max_iter && max_abs(current.gradient.values()) >= config.tol) {
        const auto g = current.gradient.values();
        std::vector<double> direction = lbfgs_direction(memory, g);
        double slope = dot(g, direction);
        if (!(slope < 0.0)) {
            memory.clear();
            direction = lbfgs_direction(memory, g);
            slope = dot(g, direction);
        }

        // Without curvature information, start with a unit-length step.
        double step = memory.empty() ? 1.0 / std::max(1.0, std::sqrt(dot(g, g))) : 1.0;
        Matrix trial(K, X_aug.cols());
        LossGradient next;
        bool accepted = false;
        while (step >= kMinStep) {
            auto tw = trial.values();
            const auto w = W.values();
            for (std::size_t i = 0; i < dim; ++i) tw[i] = w[i] + step * direction[i];
            next = evaluate(trial);
            if (std::isfinite(next.loss) && next.loss <= current.loss + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= kContraction;
        }
        if (!accepted) {
            if (memory.empty()) break;  // steepest descent cannot make progress either
            memory.clear();
            continue;
        }

        CurvaturePair pair{std::vector<double>(dim), std::vector<double>(dim), 0.0};
        const auto gn = next.gradient.values();
        for (std::size_t i = 0; i < dim; ++i) {
            pair.s[i] = step * direction[i];
            pair.y[i] = gn[i] - g[i];
        }
        const double sy = dot(pair.s, pair.y);
        // Pairs without positive curvature are dropped; the next direction then
        // falls back toward a scaled gradient step.
        if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (memory.size() > config.history) memory.pop_front();
        }

        W = std::move(trial);
        current = std::move(next);
        ++iter;
    }

    return Model(std::move(W), iter, current.loss);
}

Matrix predict_proba(const Model& model, const Matrix& X) {
    if (!model.fitted()) throw TrainingError("predict", "logreg model is not fitted");
    if (X.cols() != model.num_features())
        throw DataError("predict", "matrix has " + std::to_string(X.cols()) + " columns, model expects " +
                                       std::to_string(model.num_features()));
    const std::size_t K = model.num_classes();
    Matrix out(X.rows(), K);
    std::vector<double> x_aug(X.cols() + 1, 1.0);
    std::vector<double> z(K);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        std::copy(X.row(i).begin(), X.row(i).end(), x_aug.begin());
        logits_into(model.weights(), x_aug, z);
        const auto p = softmax(z);
        std::copy(p.begin(), p.end(), out.row(i).begin());
    }
    return out;
}

LabelVector predict(const Model& model, const Matrix& X) {
    const Matrix proba = predict_proba(model, X);
    LabelVector out(proba.rows());
    for (std::size_t i = 0; i < proba.rows(); ++i) {
        const auto row = proba.row(i);
        // max_element returns the first maximum, i.e. the lowest code on ties.
        out[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

}  // namespace floodsift::logreg

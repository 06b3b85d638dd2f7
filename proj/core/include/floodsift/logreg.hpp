#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "floodsift/matrix.hpp"

namespace floodsift::logreg {

struct Config {
    double l2_strength = 1.0;
    std::size_t max_iter = 200;
    double tol = 1e-6;          // stop once the gradient max-norm drops below this
    std::size_t history = 10;   // curvature pairs kept by L-BFGS

    void validate() const;
};

// Multinomial logistic model. weights is K x (d + 1); the last column is the bias.
class Model {
public:
    Model() = default;
    Model(Matrix weights, std::size_t iterations_used = 0, double final_loss = 0.0);

    bool fitted() const noexcept { return weights_.rows() >= 2; }
    std::size_t num_classes() const noexcept { return weights_.rows(); }
    std::size_t num_features() const noexcept { return weights_.cols() == 0 ? 0 : weights_.cols() - 1; }
    const Matrix& weights() const noexcept { return weights_; }
    std::size_t iterations_used() const noexcept { return iterations_used_; }
    double final_loss() const noexcept { return final_loss_; }

private:
    Matrix weights_;
    std::size_t iterations_used_ = 0;
    double final_loss_ = 0.0;
};

// Max-shifted softmax; exact shift invariance up to rounding.
std::vector<double> softmax(std::span<const double> logits);

// X with a trailing column of ones.
Matrix augment(const Matrix& X);

struct LossGradient {
    double loss = 0.0;
    Matrix gradient;  // same shape as W
};

/// Mean negative log-likelihood plus (l2 / 2n) * ||W without bias column||^2,
/// with its exact gradient. Rows are reduced in fixed-size blocks whose
/// partial sums are added in block order, so the result does not depend on
/// the worker count.
LossGradient loss_and_gradient(const Matrix& W, const Matrix& X_aug, const LabelVector& y, double l2);

/// Batch L-BFGS from W = 0 with Armijo backtracking. num_classes = 0 infers
/// K as max(y) + 1.
Model fit(const Matrix& X, const LabelVector& y, const Config& config = {}, std::size_t num_classes = 0);

Matrix predict_proba(const Model& model, const Matrix& X);

// Per-row argmax of predict_proba; ties go to the lowest class code.
LabelVector predict(const Model& model, const Matrix& X);

}  // namespace floodsift::logreg

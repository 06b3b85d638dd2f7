#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "floodsift/matrix.hpp"

namespace floodsift::svm {

enum class GammaMode { Scale, Fixed };

struct Config {
    double C = 1.0;
    GammaMode gamma_mode = GammaMode::Scale;
    double gamma = 0.0;           // used when gamma_mode == Fixed
    double tol = 1e-3;            // KKT tolerance
    std::size_t max_passes = 10;  // consecutive no-progress updates before giving up
    std::size_t max_iter = 0;     // 0 means default_max_iter(n) for each binary problem

    void validate() const;
};

// Iteration cap for an n-row binary problem when Config::max_iter is 0:
// 10 * n, but never below 10000.
std::size_t default_max_iter(std::size_t n);

// Subproblems with at most this many rows cache the full Gram matrix.
inline constexpr std::size_t kDenseGramLimit = 8000;

/// 1 / (d * var), var being the population variance of all n*d entries.
double gamma_scale(const Matrix& X);

/// exp(-gamma * ||a - b||^2)
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

struct DualSolution {
    std::vector<double> alpha;  // one multiplier per training row
    double bias = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double gap = 0.0;           // final maximal KKT violation gap
};

/// Solves max sum(a) - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)
/// subject to 0 <= a_i <= C, sum(a_i y_i) = 0, by two-variable SMO steps.
/// labels are +1 / -1.
DualSolution solve_dual(const Matrix& X, std::span<const int> labels, double C, double gamma, double tol,
                        std::size_t max_iter, std::size_t max_passes);

struct BinarySvm {
    Matrix support_vectors;
    std::vector<double> dual_coefs;  // alpha_i * y_i
    double bias = 0.0;
    int neg_class = 0;
    int pos_class = 1;
    double gamma = 1.0;
    std::size_t iterations = 0;
    bool converged = true;
};

// cfg.gamma_mode must be Fixed here; fit_ovo resolves Scale before calling.
BinarySvm train_binary(const Matrix& X, std::span<const int> labels, const Config& cfg, int neg_class = 0,
                       int pos_class = 1);

double decision_value(const BinarySvm& model, std::span<const double> x);

class OvoModel {
public:
    OvoModel() = default;
    OvoModel(std::size_t num_classes, std::vector<BinarySvm> binaries);

    bool fitted() const noexcept { return num_classes_ >= 2; }
    std::size_t num_classes() const noexcept { return num_classes_; }
    const std::vector<BinarySvm>& binaries() const noexcept { return binaries_; }

private:
    std::size_t num_classes_ = 0;
    std::vector<BinarySvm> binaries_;
};

/// One binary machine per class pair (i, j), i < j, trained on the rows of
/// those two classes with i as the negative side. num_classes = 0 infers K.
OvoModel fit_ovo(const Matrix& X, const LabelVector& y, const Config& cfg = {}, std::size_t num_classes = 0);

/// Majority vote. Ties go to the class with the larger sum of |decision|
/// over the votes it won, then to the lowest class code.
LabelVector predict_ovo(const OvoModel& model, const Matrix& X);

}  // namespace floodsift::svm

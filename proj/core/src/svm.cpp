#include "floodsift/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "floodsift/error.hpp"
#include "floodsift/parallel.hpp"

namespace floodsift::svm {

namespace {

constexpr double kMinCurvature = 1e-12;
constexpr double kBoundSnap = 1e-12;  // relative to C

// Multipliers within kBoundSnap * C of a bound sit on it; otherwise rounding
// leaves them one ulp inside the box, where they block the working set.
double snap(double a, double C) {
    if (a <= kBoundSnap * C) return 0.0;
    if (a >= C - kBoundSnap * C) return C;
    return a;
}

// Kernel rows for one subproblem: a cached Gram matrix for small problems,
// computed on demand otherwise.
class KernelRows {
public:
    KernelRows(const Matrix& X, double gamma) : X_(X), gamma_(gamma), n_(X.rows()) {
        if (n_ <= kDenseGramLimit) {
            gram_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                gram_[i * n_ + i] = 1.0;
                for (std::size_t j = i + 1; j < n_; ++j)
                    gram_[i * n_ + j] = gram_[j * n_ + i] = rbf_kernel(X_.row(i), X_.row(j), gamma_);
            }
        }
    }

    // Valid until the next call with the same buffer.
    std::span<const double> row(std::size_t i, std::vector<double>& buffer) const {
        if (!gram_.empty()) return {gram_.data() + i * n_, n_};
        buffer.resize(n_);
        const auto xi = X_.row(i);
        for (std::size_t t = 0; t < n_; ++t) buffer[t] = rbf_kernel(xi, X_.row(t), gamma_);
        return buffer;
    }

private:
    const Matrix& X_;
    double gamma_;
    std::size_t n_;
    std::vector<double> gram_;
};

bool in_up(int y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0.0); }
bool in_low(int y, double a, double C) { return (y < 0 && a < C) || (y > 0 && a > 0.0); }

}  // namespace

void Config::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw TrainingError("train", "svm C must be a positive real");
    if (gamma_mode == GammaMode::Fixed && (!(gamma > 0.0) || !std::isfinite(gamma)))
        throw TrainingError("train", "svm fixed gamma must be a positive real");
    if (!(tol > 0.0)) throw TrainingError("train", "svm tol must be positive");
    if (max_passes == 0) throw TrainingError("train", "svm max_passes must be positive");
}

std::size_t default_max_iter(std::size_t n) { return std::max<std::size_t>(10 * n, 10000); }

double gamma_scale(const Matrix& X) {
    const auto values = X.values();
    if (values.empty()) throw TrainingError("train", "gamma scale needs a non-empty matrix");
    const double count = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / count;
    if (!(var > 0.0)) throw TrainingError("train", "gamma scale undefined: matrix has zero variance");
    return 1.0 / (static_cast<double>(X.cols()) * var);
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    double dist2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        dist2 += d * d;
    }
    return std::exp(-gamma * dist2);
}

DualSolution solve_dual(const Matrix& X, std::span<const int> labels, double C, double gamma, double tol,
                        std::size_t max_iter, std::size_t max_passes) {
    const std::size_t n = X.rows();
    if (labels.size() != n) throw TrainingError("train", "svm label count does not match row count");
    bool has_pos = false;
    bool has_neg = false;
    for (int y : labels) {
        if (y != 1 && y != -1) throw TrainingError("train", "svm binary labels must be +1 or -1");
        (y > 0 ? has_pos : has_neg) = true;
    }
    if (n < 2 || !has_pos || !has_neg) throw TrainingError("train", "svm binary problem needs both classes present");

    const KernelRows kernel(X, gamma);
    DualSolution sol;
    sol.alpha.assign(n, 0.0);
    // grad[t] = sum_s alpha_s y_s k(s, t) - y_t, i.e. the error without the bias.
    std::vector<double> grad(n);
    for (std::size_t t = 0; t < n; ++t) grad[t] = -static_cast<double>(labels[t]);

    std::vector<double> buf_i;
    std::vector<double> buf_j;
    std::size_t stalls = 0;
    auto& alpha = sol.alpha;

    // Maximal violating pair: i maximizes -grad over the "up" set, j minimizes
    // it over the "low" set, which maximizes |E_i - E_j| among feasible pairs.
    auto select = [&](std::size_t& i, std::size_t& j, double& up_max, double& low_min) {
        up_max = -std::numeric_limits<double>::infinity();
        low_min = std::numeric_limits<double>::infinity();
        i = j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -grad[t];
            if (in_up(labels[t], alpha[t], C) && v > up_max) {
                up_max = v;
                i = t;
            }
            if (in_low(labels[t], alpha[t], C) && v < low_min) {
                low_min = v;
                j = t;
            }
        }
    };

    std::size_t i = 0;
    std::size_t j = 0;
    double up_max = 0.0;
    double low_min = 0.0;
    while (true) {
        select(i, j, up_max, low_min);
        sol.gap = (i == n || j == n) ? 0.0 : up_max - low_min;
        if (sol.gap < tol) {
            sol.converged = true;
            break;
        }
        if (sol.iterations >= max_iter || stalls >= max_passes) break;
        ++sol.iterations;

        const auto ki = kernel.row(i, buf_i);
        const auto kj = kernel.row(j, buf_j);
        const double yi = labels[i];
        const double yj = labels[j];
        const double ai = alpha[i];
        const double aj = alpha[j];

        double lo = 0.0;
        double hi = C;
        if (labels[i] != labels[j]) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(C, C + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - C);
            hi = std::min(C, ai + aj);
        }
        const double eta = std::max(ki[i] + kj[j] - 2.0 * ki[j], kMinCurvature);
        const double aj_new = snap(std::clamp(aj + yj * (grad[i] - grad[j]) / eta, lo, hi), C);
        const double ai_new = snap(std::clamp(ai + yi * yj * (aj - aj_new), 0.0, C), C);

        const double di = ai_new - ai;
        const double dj = aj_new - aj;
        if (di == 0.0 && dj == 0.0) {
            ++stalls;
            continue;
        }
        stalls = 0;
        alpha[i] = ai_new;
        alpha[j] = aj_new;
        for (std::size_t t = 0; t < n; ++t) grad[t] += di * yi * ki[t] + dj * yj * kj[t];
    }

    // Any bias in [low_min, up_max] (or the reverse when the gap is negative)
    // keeps every KKT violation within gap / 2; take the midpoint.
    select(i, j, up_max, low_min);
    if (i == n)
        sol.bias = low_min;
    else if (j == n)
        sol.bias = up_max;
    else
        sol.bias = 0.5 * (up_max + low_min);
    return sol;
}

BinarySvm train_binary(const Matrix& X, std::span<const int> labels, const Config& cfg, int neg_class,
                       int pos_class) {
    cfg.validate();
    if (cfg.gamma_mode != GammaMode::Fixed) throw TrainingError("train", "train_binary needs a resolved gamma");
    const std::size_t max_iter = cfg.max_iter == 0 ? default_max_iter(X.rows()) : cfg.max_iter;
    const auto sol = solve_dual(X, labels, cfg.C, cfg.gamma, cfg.tol, max_iter, cfg.max_passes);

    std::vector<std::size_t> support;
    for (std::size_t t = 0; t < sol.alpha.size(); ++t)
        if (sol.alpha[t] > 0.0) support.push_back(t);

    BinarySvm out;
    out.support_vectors = X.select_rows(support);
    out.dual_coefs.reserve(support.size());
    for (auto t : support) out.dual_coefs.push_back(sol.alpha[t] * labels[t]);
    out.bias = sol.bias;
    out.neg_class = neg_class;
    out.pos_class = pos_class;
    out.gamma = cfg.gamma;
    out.iterations = sol.iterations;
    out.converged = sol.converged;
    return out;
}

double decision_value(const BinarySvm& model, std::span<const double> x) {
    double sum = model.bias;
    for (std::size_t s = 0; s < model.dual_coefs.size(); ++s)
        sum += model.dual_coefs[s] * rbf_kernel(model.support_vectors.row(s), x, model.gamma);
    return sum;
}

OvoModel::OvoModel(std::size_t num_classes, std::vector<BinarySvm> binaries)
    : num_classes_(num_classes), binaries_(std::move(binaries)) {
    if (num_classes_ < 2) throw TrainingError("train", "ovo model needs at least two classes");
    if (binaries_.size() != num_classes_ * (num_classes_ - 1) / 2)
        throw TrainingError("train", "ovo model needs exactly K(K-1)/2 binary machines");
    std::vector<bool> seen(num_classes_ * num_classes_, false);
    for (const auto& b : binaries_) {
        if (b.neg_class < 0 || b.pos_class < 0 || b.neg_class >= b.pos_class ||
            static_cast<std::size_t>(b.pos_class) >= num_classes_)
            throw TrainingError("train", "ovo binary has an invalid class pair");
        auto slot = seen[static_cast<std::size_t>(b.neg_class) * num_classes_ + static_cast<std::size_t>(b.pos_class)];
        if (slot) throw TrainingError("train", "ovo class pair appears twice");
        slot = true;
    }
}

OvoModel fit_ovo(const Matrix& X, const LabelVector& y, const Config& cfg, std::size_t num_classes) {
    cfg.validate();
    if (X.rows() == 0 || X.rows() != y.size()) throw TrainingError("train", "svm needs matching non-empty X and y");
    for (double v : X.values())
        if (!std::isfinite(v)) throw TrainingError("train", "training matrix contains non-finite values");
    for (int label : y)
        if (label < 0) throw TrainingError("train", "negative class code in labels");

    const std::size_t inferred = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
    const std::size_t K = num_classes == 0 ? inferred : num_classes;
    if (inferred > K) throw TrainingError("train", "label exceeds the requested class count");
    if (K < 2) throw TrainingError("train", "svm needs at least two classes");

    std::vector<std::vector<std::size_t>> rows_of(K);
    for (std::size_t r = 0; r < y.size(); ++r) rows_of[static_cast<std::size_t>(y[r])].push_back(r);
    for (std::size_t k = 0; k < K; ++k)
        if (rows_of[k].empty()) throw TrainingError("train", "class " + std::to_string(k) + " has no training rows");

    Config resolved = cfg;
    if (cfg.gamma_mode == GammaMode::Scale) {
        resolved.gamma_mode = GammaMode::Fixed;
        resolved.gamma = gamma_scale(X);
    }

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = a + 1; b < K; ++b) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));

    std::vector<BinarySvm> binaries(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
        const auto [neg, pos] = pairs[p];
        std::vector<std::size_t> rows;
        const auto& rn = rows_of[static_cast<std::size_t>(neg)];
        const auto& rp = rows_of[static_cast<std::size_t>(pos)];
        std::merge(rn.begin(), rn.end(), rp.begin(), rp.end(), std::back_inserter(rows));
        std::vector<int> labels;
        labels.reserve(rows.size());
        for (auto r : rows) labels.push_back(y[r] == pos ? 1 : -1);
        binaries[p] = train_binary(X.select_rows(rows), labels, resolved, neg, pos);
    });
    return OvoModel(K, std::move(binaries));
}

LabelVector predict_ovo(const OvoModel& model, const Matrix& X) {
    if (!model.fitted()) throw TrainingError("predict", "svm model is not fitted");
    const std::size_t K = model.num_classes();

    // Visit binaries in canonical pair order so floating-point sums do not
    // depend on storage order.
    std::vector<const BinarySvm*> ordered;
    for (const auto& b : model.binaries()) ordered.push_back(&b);
    std::sort(ordered.begin(), ordered.end(), [](const BinarySvm* a, const BinarySvm* b) {
        return std::pair(a->neg_class, a->pos_class) < std::pair(b->neg_class, b->pos_class);
    });
    for (const auto* b : ordered)
        if (b->support_vectors.rows() > 0 && b->support_vectors.cols() != X.cols())
            throw DataError("predict", "matrix has " + std::to_string(X.cols()) + " columns, model expects " +
                                           std::to_string(b->support_vectors.cols()));

    LabelVector out(X.rows());
    std::vector<std::size_t> votes(K);
    std::vector<double> confidence(K);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        std::fill(votes.begin(), votes.end(), 0);
        std::fill(confidence.begin(), confidence.end(), 0.0);
        const auto x = X.row(r);
        for (const auto* b : ordered) {
            const double v = decision_value(*b, x);
            const auto winner = static_cast<std::size_t>(v > 0.0 ? b->pos_class : b->neg_class);
            ++votes[winner];
            confidence[winner] += std::abs(v);
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < K; ++k) {
            if (votes[k] > votes[best] || (votes[k] == votes[best] && confidence[k] > confidence[best])) best = k;
        }
        out[r] = static_cast<int>(best);
    }
    return out;
}

}  // namespace floodsift::svm

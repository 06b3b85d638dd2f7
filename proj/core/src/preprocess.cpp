#include "floodsift/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "floodsift/error.hpp"
#include "floodsift/random.hpp"

namespace floodsift {

Scaler::Scaler(std::vector<double> mins, std::vector<double> maxs, double new_min, double new_max)
    : mins_(std::move(mins)), maxs_(std::move(maxs)), new_min_(new_min), new_max_(new_max) {
    if (mins_.size() != maxs_.size()) throw DataError("scale", "scaler min/max length mismatch");
    if (!(new_min_ < new_max_)) throw DataError("scale", "scaler target range needs new_min < new_max");
    for (std::size_t j = 0; j < mins_.size(); ++j)
        if (!(mins_[j] <= maxs_[j]) || !std::isfinite(mins_[j]) || !std::isfinite(maxs_[j]))
            throw DataError("scale", "scaler feature " + std::to_string(j) + " has invalid extrema");
}

double Scaler::apply(std::size_t feature, double x) const {
    const double lo = mins_[feature];
    const double hi = maxs_[feature];
    if (hi == lo) return new_min_;
    return (x - lo) / (hi - lo) * (new_max_ - new_min_) + new_min_;
}

Scaler fit_scaler(const Matrix& X, double new_min, double new_max) {
    if (X.empty() || X.cols() == 0) throw DataError("scale", "cannot fit a scaler on an empty matrix");
    std::vector<double> mins(X.cols());
    std::vector<double> maxs(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j) mins[j] = maxs[j] = X(0, j);
    for (std::size_t i = 1; i < X.rows(); ++i) {
        for (std::size_t j = 0; j < X.cols(); ++j) {
            mins[j] = std::min(mins[j], X(i, j));
            maxs[j] = std::max(maxs[j], X(i, j));
        }
    }
    return Scaler(std::move(mins), std::move(maxs), new_min, new_max);
}

Matrix transform(const Matrix& X, const Scaler& scaler) {
    if (!scaler.fitted()) throw DataError("scale", "scaler is not fitted");
    if (X.cols() != scaler.features())
        throw DataError("scale", "matrix has " + std::to_string(X.cols()) + " columns, scaler expects " +
                                     std::to_string(scaler.features()));
    Matrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) out(i, j) = scaler.apply(j, X(i, j));
    return out;
}

std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span(order));
    return order;
}

std::size_t train_size(std::size_t n, double train_fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
}

Split train_test_split(const Matrix& X, const LabelVector& y, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw DataError("split", "train fraction must lie strictly between 0 and 1");
    if (X.rows() != y.size())
        throw DataError("split", "feature matrix has " + std::to_string(X.rows()) + " rows but " +
                                     std::to_string(y.size()) + " labels");
    const std::size_t n = X.rows();
    if (n < 2) throw DataError("split", "need at least 2 rows to split");

    const std::size_t n_train = train_size(n, spec.train_fraction);
    if (n_train == 0 || n_train == n)
        throw DataError("split", "train fraction leaves an empty train or test partition");

    const auto order = split_permutation(n, spec.seed);
    Split s;
    s.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    s.X_train = X.select_rows(s.train_rows);
    s.y_train = select_labels(y, s.train_rows);
    s.X_test = X.select_rows(s.test_rows);
    s.y_test = select_labels(y, s.test_rows);
    return s;
}

}  // namespace floodsift

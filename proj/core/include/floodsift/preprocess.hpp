#pragma once

#include <cstdint>
#include <vector>

#include "floodsift/matrix.hpp"

namespace floodsift {

/// Fitted min-max state. Maps x to
///   (x - min) / (max - min) * (new_max - new_min) + new_min
/// per column. Columns with max == min are degenerate and map to new_min.
/// Values outside the fitted range extrapolate linearly.
class Scaler {
public:
    Scaler() = default;
    Scaler(std::vector<double> mins, std::vector<double> maxs, double new_min = 0.0, double new_max = 1.0);

    bool fitted() const noexcept { return !mins_.empty(); }
    std::size_t features() const noexcept { return mins_.size(); }

    const std::vector<double>& mins() const noexcept { return mins_; }
    const std::vector<double>& maxs() const noexcept { return maxs_; }
    double new_min() const noexcept { return new_min_; }
    double new_max() const noexcept { return new_max_; }

    bool degenerate(std::size_t feature) const { return mins_.at(feature) == maxs_.at(feature); }

    double apply(std::size_t feature, double x) const;

    bool operator==(const Scaler&) const = default;

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
    double new_min_ = 0.0;
    double new_max_ = 1.0;
};

Scaler fit_scaler(const Matrix& X, double new_min = 0.0, double new_max = 1.0);
Matrix transform(const Matrix& X, const Scaler& scaler);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
};

struct Split {
    Matrix X_train;
    LabelVector y_train;
    Matrix X_test;
    LabelVector y_test;
    std::vector<std::size_t> train_rows;  // indices into the input, shuffled order
    std::vector<std::size_t> test_rows;
};

// Seeded Fisher-Yates permutation of row indices; the first
// floor(n * train_fraction) go to train, the rest to test.
std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed);
std::size_t train_size(std::size_t n, double train_fraction);

Split train_test_split(const Matrix& X, const LabelVector& y, const SplitSpec& spec = {});

}  // namespace floodsift

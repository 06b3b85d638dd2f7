#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "floodsift/error.hpp"
#include "floodsift/preprocess.hpp"

using namespace floodsift;

namespace {

Matrix column(std::initializer_list<double> values) {
    Matrix m(values.size(), 1);
    std::size_t i = 0;
    for (double v : values) m(i++, 0) = v;
    return m;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.01, 1e6);
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const double s = scale(rng);
        const double shift = noise(rng) * s;
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = shift + s * noise(rng);
    }
    return m;
}

}  // namespace

TEST(Scaler, FitsExactColumnExtrema) {
    const auto s = fit_scaler(column({2, 7, 12}));
    EXPECT_EQ(s.mins()[0], 2.0);
    EXPECT_EQ(s.maxs()[0], 12.0);
    EXPECT_FALSE(s.degenerate(0));
}

TEST(Scaler, ConstantColumnIsDegenerateAndMapsToNewMin) {
    const auto s = fit_scaler(column({5, 5, 5}));
    EXPECT_EQ(s.mins()[0], 5.0);
    EXPECT_EQ(s.maxs()[0], 5.0);
    EXPECT_TRUE(s.degenerate(0));
    const auto t = transform(column({5, 5, 5}), s);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t(i, 0), 0.0);
    EXPECT_EQ(fit_scaler(column({5, 5}), -1.0, 1.0).apply(0, 9.0), -1.0);
}

TEST(Scaler, SingleRow) {
    Matrix m(1, 3);
    m(0, 0) = 1;
    m(0, 1) = -4;
    m(0, 2) = 9;
    const auto s = fit_scaler(m);
    EXPECT_EQ(s.mins(), s.maxs());
    EXPECT_EQ(s.mins(), (std::vector<double>{1, -4, 9}));
}

TEST(Scaler, EmptyMatrixIsAnError) { EXPECT_THROW(fit_scaler(Matrix{}), DataError); }

TEST(Scaler, RejectsInvertedTargetRange) { EXPECT_THROW(fit_scaler(column({1, 2}), 1.0, 0.0), DataError); }

TEST(Transform, FormulaExamples) {
    const auto unit = fit_scaler(column({2, 12}));
    EXPECT_EQ(unit.apply(0, 7.0), 0.5);
    EXPECT_EQ(unit.apply(0, 2.0), 0.0);
    EXPECT_EQ(unit.apply(0, 12.0), 1.0);
    // (7 - 2) / (12 - 2) * (10 - 0) + 0 = 5
    const auto wide = fit_scaler(column({2, 12}), 0.0, 10.0);
    EXPECT_EQ(wide.apply(0, 7.0), 5.0);
}

TEST(Transform, ExtrapolatesOutsideFittedRange) {
    const auto s = fit_scaler(column({0, 10}));
    EXPECT_DOUBLE_EQ(s.apply(0, 15.0), 1.5);
    EXPECT_DOUBLE_EQ(s.apply(0, -5.0), -0.5);
}

TEST(Transform, ColumnCountMismatchIsAnError) {
    const auto s = fit_scaler(Matrix(3, 2, 1.0));
    EXPECT_THROW(transform(Matrix(3, 3), s), DataError);
    EXPECT_THROW(transform(Matrix(3, 2), Scaler{}), DataError);
}

TEST(TransformProperty, FittedDataSpansUnitIntervalAndStaysFinite) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng() % 60;
        const std::size_t cols = 1 + rng() % 30;
        const auto X = random_matrix(rows, cols, rng);
        const auto s = fit_scaler(X);
        const auto T = transform(X, s);
        for (std::size_t j = 0; j < cols; ++j) {
            double lo = INFINITY, hi = -INFINITY;
            for (std::size_t i = 0; i < rows; ++i) {
                ASSERT_TRUE(std::isfinite(T(i, j)));
                lo = std::min(lo, T(i, j));
                hi = std::max(hi, T(i, j));
            }
            if (s.degenerate(j)) {
                EXPECT_EQ(lo, 0.0);
                EXPECT_EQ(hi, 0.0);
            } else {
                EXPECT_NEAR(lo, 0.0, 1e-12);
                EXPECT_NEAR(hi, 1.0, 1e-12);
            }
        }
    }
}

TEST(TransformProperty, PreservesOrderWithinColumns) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto X = random_matrix(40, 5, rng);
        const auto T = transform(X, fit_scaler(X));
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t a = 0; a < 40; ++a)
                for (std::size_t b = 0; b < 40; ++b)
                    if (X(a, j) < X(b, j)) EXPECT_LE(T(a, j), T(b, j));
    }
}

TEST(Split, SizesFollowFloor) {
    EXPECT_EQ(train_size(10, 0.8), 8u);
    EXPECT_EQ(train_size(5, 0.8), 4u);
    EXPECT_EQ(train_size(1000, 0.8), 800u);

    const Matrix X(10, 2);
    const LabelVector y(10, 0);
    const auto s = train_test_split(X, y);
    EXPECT_EQ(s.y_train.size(), 8u);
    EXPECT_EQ(s.y_test.size(), 2u);
}

TEST(Split, PartitionIsDisjointExhaustiveAndKeepsPairs) {
    Matrix X(37, 2);
    LabelVector y(37);
    for (std::size_t i = 0; i < 37; ++i) {
        X(i, 0) = static_cast<double>(i);
        X(i, 1) = -static_cast<double>(i);
        y[i] = static_cast<int>(i % 5);
    }
    const auto s = train_test_split(X, y, {0.8, 123});
    std::set<std::size_t> seen(s.train_rows.begin(), s.train_rows.end());
    for (auto r : s.test_rows) EXPECT_TRUE(seen.insert(r).second);
    EXPECT_EQ(seen.size(), 37u);
    for (std::size_t i = 0; i < s.train_rows.size(); ++i) {
        EXPECT_EQ(s.X_train(i, 0), static_cast<double>(s.train_rows[i]));
        EXPECT_EQ(s.y_train[i], static_cast<int>(s.train_rows[i] % 5));
    }
}

TEST(Split, SeedDeterminesPartition) {
    const Matrix X(100, 1);
    const LabelVector y(100, 0);
    const auto a = train_test_split(X, y, {0.8, 9});
    const auto b = train_test_split(X, y, {0.8, 9});
    const auto c = train_test_split(X, y, {0.8, 10});
    EXPECT_EQ(a.train_rows, b.train_rows);
    EXPECT_EQ(a.test_rows, b.test_rows);
    EXPECT_NE(a.train_rows, c.train_rows);
}

TEST(Split, Errors) {
    EXPECT_THROW(train_test_split(Matrix(1, 2), LabelVector{0}), DataError);
    EXPECT_THROW(train_test_split(Matrix(3, 2), LabelVector{0, 1}), DataError);
    EXPECT_THROW(train_test_split(Matrix(3, 2), LabelVector{0, 1, 1}, {1.0, 1}), DataError);
    EXPECT_THROW(train_test_split(Matrix(3, 2), LabelVector{0, 1, 1}, {0.2, 1}), DataError);  // empty train
}

TEST(Split, PermutationIsStableAcrossBuilds) {
    // Seed-42 permutation of 10 rows, computed by a separate Python
    // mt19937_64 with the same rejection sampling and Fisher-Yates walk.
    EXPECT_EQ(split_permutation(10, 42), (std::vector<std::size_t>{1, 7, 9, 0, 3, 8, 4, 2, 5, 6}));
}

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "floodsift/error.hpp"
#include "floodsift/metrics.hpp"

using namespace floodsift;
using metrics::ConfusionMatrix;

namespace {

// Reference five-class confusion matrix (rows actual, columns predicted).
ConfusionMatrix reference_table() {
    return ConfusionMatrix({{359, 0, 21, 0, 0},
                            {5, 187820, 23, 0, 0},
                            {0, 40, 567, 0, 0},
                            {6, 800, 33, 404, 0},
                            {0, 1899, 0, 0, 17738}});
}

ConfusionMatrix random_table(std::mt19937_64& rng, std::size_t K) {
    ConfusionMatrix cm(K);
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t p = 0; p < K; ++p) cm.at(a, p) = rng() % (a == p ? 500 : 40);
    return cm;
}

}  // namespace

TEST(Confusion, CountsActualByPredicted) {
    const auto cm = metrics::confusion_matrix({0, 0, 1}, {0, 1, 1}, 2);
    EXPECT_EQ(cm.at(0, 0), 1u);
    EXPECT_EQ(cm.at(0, 1), 1u);
    EXPECT_EQ(cm.at(1, 0), 0u);
    EXPECT_EQ(cm.at(1, 1), 1u);
    EXPECT_EQ(cm.total(), 3u);
    EXPECT_EQ(cm.trace(), 2u);
}

TEST(Confusion, InvalidInputIsAnError) {
    EXPECT_THROW(metrics::confusion_matrix({0, 1}, {0}, 2), DataError);
    EXPECT_THROW(metrics::confusion_matrix({0, 2}, {0, 1}, 2), DataError);
    EXPECT_THROW(metrics::confusion_matrix({0, -1}, {0, 1}, 2), DataError);
    EXPECT_THROW(ConfusionMatrix({{1, 2}, {3}}), DataError);
}

TEST(Metrics, HandExample) {
    const ConfusionMatrix cm({{1, 1}, {0, 1}});
    EXPECT_DOUBLE_EQ(metrics::accuracy(cm), 2.0 / 3.0);
    const auto m = metrics::per_class_metrics(cm);
    EXPECT_DOUBLE_EQ(m[0].precision, 1.0);
    EXPECT_DOUBLE_EQ(m[0].recall, 0.5);
    EXPECT_DOUBLE_EQ(m[0].f1, 2.0 / 3.0);
    EXPECT_EQ(m[0].support, 2u);
    EXPECT_DOUBLE_EQ(m[1].precision, 0.5);
    EXPECT_DOUBLE_EQ(m[1].recall, 1.0);
    EXPECT_EQ(m[1].support, 1u);
}

TEST(Metrics, PerfectClassifier) {
    const auto cm = metrics::confusion_matrix({0, 1, 2, 2}, {0, 1, 2, 2}, 3);
    EXPECT_EQ(metrics::accuracy(cm), 1.0);
    for (const auto& m : metrics::per_class_metrics(cm)) {
        EXPECT_EQ(m.precision, 1.0);
        EXPECT_EQ(m.recall, 1.0);
        EXPECT_EQ(m.f1, 1.0);
    }
}

TEST(Metrics, EmptyRowsAndColumnsGiveZero) {
    const ConfusionMatrix cm({{3, 0, 0}, {1, 0, 0}, {0, 0, 0}});
    const auto m = metrics::per_class_metrics(cm);
    EXPECT_EQ(m[1].precision, 0.0);
    EXPECT_EQ(m[1].recall, 0.0);
    EXPECT_EQ(m[1].f1, 0.0);
    EXPECT_EQ(m[2].support, 0u);
    EXPECT_THROW(metrics::accuracy(ConfusionMatrix(3)), DataError);
}

TEST(Metrics, ReferenceConfusionMatrixReproducesReferenceReport) {
    const auto cm = reference_table();
    EXPECT_EQ(cm.trace(), 206888u);
    EXPECT_EQ(cm.total(), 209715u);
    EXPECT_NEAR(metrics::accuracy(cm), 0.98652, 1e-4);

    const auto m = metrics::per_class_metrics(cm);
    // precision, recall, f1 as printed with two decimals
    const double printed[5][3] = {
        {0.97, 0.94, 0.96}, {0.99, 1.00, 0.99}, {0.88, 0.93, 0.91}, {1.00, 0.33, 0.49}, {1.00, 0.90, 0.95}};
    const std::uint64_t supports[5] = {380, 187848, 607, 1243, 19637};
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_NEAR(m[k].precision, printed[k][0], 0.005) << k;
        EXPECT_NEAR(m[k].recall, printed[k][1], 0.005) << k;
        EXPECT_NEAR(m[k].f1, printed[k][2], 0.005) << k;
        EXPECT_EQ(m[k].support, supports[k]);
    }
    EXPECT_DOUBLE_EQ(m[0].precision, 359.0 / 370.0);
    EXPECT_DOUBLE_EQ(m[3].recall, 404.0 / 1243.0);
}

TEST(Format, HalfUpRounding) {
    EXPECT_EQ(metrics::format_fixed_half_up(0.125, 2), "0.13");
    EXPECT_EQ(metrics::format_fixed_half_up(0.005, 2), "0.01");
    EXPECT_EQ(metrics::format_fixed_half_up(0.98652, 4), "0.9865");
    EXPECT_EQ(metrics::format_fixed_half_up(1.0, 2), "1.00");
    EXPECT_EQ(metrics::format_fixed_half_up(0.0, 4), "0.0000");
    EXPECT_EQ(metrics::format_fixed_half_up(2.0 / 3.0, 2), "0.67");
}

TEST(Format, GoldenReport) {
    const auto report = metrics::make_report(ConfusionMatrix({{1, 1}, {0, 1}}), {"a", "b"});
    const std::string expected =
        "              precision     recall   f1-score    support\n"
        "\n"
        "           a       1.00       0.50       0.67          2\n"
        "           b       0.50       1.00       0.67          1\n"
        "\n"
        "    accuracy                           0.6667          3\n";
    EXPECT_EQ(metrics::format_report(report), expected);
}

TEST(Format, ReferenceReportText) {
    const auto text = metrics::format_report(metrics::make_report(reference_table()));
    EXPECT_NE(text.find("      Normal       0.97       0.94       0.96        380\n"), std::string::npos) << text;
    EXPECT_NE(text.find("      SIDDOS       1.00       0.33       0.49       1243\n"), std::string::npos) << text;
    EXPECT_NE(text.find("  HTTP-Flood       1.00       0.90       0.95      19637\n"), std::string::npos) << text;
    EXPECT_NE(text.find("    accuracy                           0.9865     209715\n"), std::string::npos) << text;
}

TEST(Report, DefaultNames) {
    EXPECT_EQ(metrics::make_report(reference_table()).class_names,
              (std::vector<std::string>{"Normal", "UDP-Flood", "Smurf", "SIDDOS", "HTTP-Flood"}));
    EXPECT_EQ(metrics::make_report(ConfusionMatrix({{1, 0}, {0, 1}})).class_names,
              (std::vector<std::string>{"0", "1"}));
}

TEST(MetricsProperty, WeightedRecallEqualsAccuracy) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cm = random_table(rng, 2 + rng() % 6);
        if (cm.total() == 0) continue;
        const auto report = metrics::make_report(cm);
        double weighted = 0.0;
        for (const auto& m : report.classes) weighted += m.recall * static_cast<double>(m.support);
        EXPECT_NEAR(report.accuracy, weighted / static_cast<double>(report.total_support), 1e-9);
    }
}

TEST(MetricsProperty, BoundsAndHarmonicMean) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cm = random_table(rng, 2 + rng() % 6);
        for (const auto& m : metrics::per_class_metrics(cm)) {
            EXPECT_GE(m.precision, 0.0);
            EXPECT_LE(m.precision, 1.0);
            EXPECT_GE(m.recall, 0.0);
            EXPECT_LE(m.recall, 1.0);
            EXPECT_LE(m.f1, std::max(m.precision, m.recall) + 1e-15);
            EXPECT_GE(m.f1, std::min(m.precision, m.recall) - 1e-15);
        }
    }
}

TEST(MetricsProperty, InvariantUnderSamplePermutation) {
    std::mt19937_64 rng(33);
    LabelVector actual(300), predicted(300);
    for (std::size_t i = 0; i < 300; ++i) {
        actual[i] = static_cast<int>(rng() % 5);
        predicted[i] = rng() % 4 == 0 ? static_cast<int>(rng() % 5) : actual[i];
    }
    const auto base = metrics::confusion_matrix(actual, predicted, 5);
    std::vector<std::size_t> order(300);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    LabelVector a2, p2;
    for (auto i : order) {
        a2.push_back(actual[i]);
        p2.push_back(predicted[i]);
    }
    EXPECT_EQ(metrics::confusion_matrix(a2, p2, 5), base);
}

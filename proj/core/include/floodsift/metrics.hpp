#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "floodsift/matrix.hpp"

namespace floodsift::metrics {

// K x K counts. Rows are actual classes, columns predicted classes.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_classes = 0)
        : k_(num_classes), counts_(num_classes * num_classes, 0) {}
    explicit ConfusionMatrix(const std::vector<std::vector<std::uint64_t>>& table);

    std::size_t num_classes() const noexcept { return k_; }
    std::uint64_t& at(std::size_t actual, std::size_t predicted) { return counts_.at(actual * k_ + predicted); }
    std::uint64_t at(std::size_t actual, std::size_t predicted) const { return counts_.at(actual * k_ + predicted); }

    std::uint64_t row_sum(std::size_t actual) const;
    std::uint64_t col_sum(std::size_t predicted) const;
    std::uint64_t trace() const;
    std::uint64_t total() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t k_;
    std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_matrix(const LabelVector& actual, const LabelVector& predicted, std::size_t num_classes);

double accuracy(const ConfusionMatrix& cm);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

// Empty rows or columns give 0 for the affected ratios.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

struct ClassificationReport {
    std::vector<std::string> class_names;
    std::vector<ClassMetrics> classes;
    double accuracy = 0.0;
    std::uint64_t total_support = 0;
};

// class_names defaults to the canonical flow class names when K == 5 and to
// the numeric codes otherwise.
ClassificationReport make_report(const ConfusionMatrix& cm, std::vector<std::string> class_names = {});

// Round half-up at `decimals` places, tolerating representation error of
// values that are exact ties as rationals.
std::int64_t scaled_half_up(double value, int decimals);
std::string format_fixed_half_up(double value, int decimals);

// Fixed-width text table: one row per class in code order, two-decimal
// metrics, then an accuracy line with four decimals.
std::string format_report(const ClassificationReport& report);

}  // namespace floodsift::metrics

#include "floodsift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "floodsift/error.hpp"
#include "floodsift/schema.hpp"

namespace floodsift::metrics {

ConfusionMatrix::ConfusionMatrix(const std::vector<std::vector<std::uint64_t>>& table)
    : k_(table.size()), counts_(table.size() * table.size(), 0) {
    for (std::size_t i = 0; i < k_; ++i) {
        if (table[i].size() != k_) throw DataError("metrics", "confusion table must be square");
        std::copy(table[i].begin(), table[i].end(), counts_.begin() + static_cast<std::ptrdiff_t>(i * k_));
    }
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < k_; ++j) s += at(actual, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += at(i, predicted);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += at(i, i);
    return s;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
}

ConfusionMatrix confusion_matrix(const LabelVector& actual, const LabelVector& predicted, std::size_t num_classes) {
    if (actual.size() != predicted.size())
        throw DataError("metrics", "actual and predicted label vectors differ in length");
    ConfusionMatrix cm(num_classes);
    for (std::size_t r = 0; r < actual.size(); ++r) {
        const int a = actual[r];
        const int p = predicted[r];
        if (a < 0 || p < 0 || static_cast<std::size_t>(a) >= num_classes || static_cast<std::size_t>(p) >= num_classes)
            throw DataError("metrics", "class code out of range at row " + std::to_string(r));
        ++cm.at(static_cast<std::size_t>(a), static_cast<std::size_t>(p));
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw DataError("metrics", "accuracy of an empty confusion matrix is undefined");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DataError("metrics", "metrics of an empty confusion matrix are undefined");
    std::vector<ClassMetrics> out(cm.num_classes());
    for (std::size_t k = 0; k < cm.num_classes(); ++k) {
        const auto hit = static_cast<double>(cm.at(k, k));
        const auto row = cm.row_sum(k);
        const auto col = cm.col_sum(k);
        auto& m = out[k];
        m.support = row;
        m.precision = col == 0 ? 0.0 : hit / static_cast<double>(col);
        m.recall = row == 0 ? 0.0 : hit / static_cast<double>(row);
        m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    }
    return out;
}

ClassificationReport make_report(const ConfusionMatrix& cm, std::vector<std::string> class_names) {
    if (class_names.empty()) {
        for (std::size_t k = 0; k < cm.num_classes(); ++k)
            class_names.emplace_back(cm.num_classes() == static_cast<std::size_t>(kNumClasses)
                                         ? std::string(class_name(static_cast<int>(k)))
                                         : std::to_string(k));
    }
    if (class_names.size() != cm.num_classes()) throw DataError("metrics", "class name count does not match K");
    ClassificationReport r;
    r.class_names = std::move(class_names);
    r.classes = per_class_metrics(cm);
    r.accuracy = accuracy(cm);
    r.total_support = cm.total();
    return r;
}

std::int64_t scaled_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return static_cast<std::int64_t>(std::floor(value * scale + 0.5 + 1e-9));
}

std::string format_fixed_half_up(double value, int decimals) {
    const auto scaled = scaled_half_up(value, decimals);
    const bool negative = scaled < 0;
    const auto magnitude = static_cast<std::uint64_t>(negative ? -scaled : scaled);
    std::uint64_t divisor = 1;
    for (int i = 0; i < decimals; ++i) divisor *= 10;
    std::string frac = std::to_string(magnitude % divisor);
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    std::string out = (negative ? "-" : "") + std::to_string(magnitude / divisor);
    if (decimals > 0) out += "." + frac;
    return out;
}

std::string format_report(const ClassificationReport& report) {
    std::size_t name_width = 12;
    for (const auto& n : report.class_names) name_width = std::max(name_width, n.size() + 2);

    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%*s %10s %10s %10s %10s\n", static_cast<int>(name_width), "", "precision",
                  "recall", "f1-score", "support");
    out << line << '\n';
    for (std::size_t k = 0; k < report.classes.size(); ++k) {
        const auto& m = report.classes[k];
        std::snprintf(line, sizeof(line), "%*s %10s %10s %10s %10llu\n", static_cast<int>(name_width),
                      report.class_names[k].c_str(), format_fixed_half_up(m.precision, 2).c_str(),
                      format_fixed_half_up(m.recall, 2).c_str(), format_fixed_half_up(m.f1, 2).c_str(),
                      static_cast<unsigned long long>(m.support));
        out << line;
    }
    std::snprintf(line, sizeof(line), "\n%*s %10s %10s %10s %10llu\n", static_cast<int>(name_width), "accuracy", "",
                  "", format_fixed_half_up(report.accuracy, 4).c_str(),
                  static_cast<unsigned long long>(report.total_support));
    out << line;
    return out.str();
}

}  // namespace floodsift::metrics

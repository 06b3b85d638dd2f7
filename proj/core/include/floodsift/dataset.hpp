#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "floodsift/matrix.hpp"
#include "floodsift/schema.hpp"

namespace floodsift {

// A continuous cell holds a finite double, a symbolic cell its raw string.
using Cell = std::variant<double, std::string>;

struct FlowRecord {
    std::vector<Cell> values;
    // Absent only for rows loaded without a class column (prediction input).
    std::optional<ClassLabel> label;

    auto operator<=>(const FlowRecord&) const = default;
    bool operator==(const FlowRecord&) const = default;
};

class Dataset {
public:
    explicit Dataset(FeatureSchema schema = FeatureSchema::standard()) : schema_(std::move(schema)) {}

    const FeatureSchema& schema() const noexcept { return schema_; }
    const std::vector<FlowRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    // Validates cell count, cell kinds and finiteness before appending.
    void add(FlowRecord record);

    bool operator==(const Dataset&) const = default;

private:
    FeatureSchema schema_;
    std::vector<FlowRecord> records_;
};

struct LoadOptions {
    // When false the class column may be absent; if present it is still parsed.
    bool require_label = true;
};

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema = FeatureSchema::standard(),
                 const LoadOptions& options = {});
Dataset read_csv(std::istream& in, const FeatureSchema& schema = FeatureSchema::standard(),
                 const LoadOptions& options = {});

// Header in schema order plus a trailing PKT_CLASS column when every record
// is labelled. Doubles are written in shortest round-trip form.
void write_csv(std::ostream& out, const Dataset& ds);
void save_csv(const std::filesystem::path& path, const Dataset& ds);

// Number of records identical (all cells and label) to some earlier record.
std::size_t check_duplicates(const Dataset& ds);

class LabelEncoder {
public:
    LabelEncoder() = default;
    LabelEncoder(const FeatureSchema& schema, std::map<std::size_t, std::vector<std::string>> categories);

    bool fitted() const noexcept { return fitted_; }

    // Sorted categories per symbolic column index; code = position.
    const std::map<std::size_t, std::vector<std::string>>& categories() const noexcept { return categories_; }

    int encode(std::size_t column, const std::string& category) const;
    const std::string& decode(std::size_t column, int code) const;

    bool operator==(const LabelEncoder&) const = default;

private:
    std::map<std::size_t, std::vector<std::string>> categories_;
    std::vector<std::string> column_names_;
    bool fitted_ = false;
};

LabelEncoder fit_encoder(const Dataset& ds);

struct EncodedData {
    Matrix X;
    LabelVector y;  // empty when the dataset carries no labels
};

EncodedData encode(const Dataset& ds, const LabelEncoder& encoder);

struct ClassDistribution {
    std::array<std::size_t, kNumClasses> counts{};
    std::array<double, kNumClasses> fractions{};
    std::size_t total = 0;
};

ClassDistribution class_distribution(const LabelVector& y);

// Per-class record counts of the original flow corpus, in class-code order.
inline constexpr std::array<std::uint64_t, kNumClasses> kReferenceClassCounts{
    939648, 97521, 6211, 3198, 1997};

std::array<double, kNumClasses> reference_class_proportions();

struct SyntheticSpec {
    std::size_t n = 1000;
    std::array<double, kNumClasses> proportions = reference_class_proportions();
    double separation = 6.0;
    std::uint64_t seed = 42;
};

// round(n * fraction) records for each attack class; Normal takes the rest.
std::array<std::size_t, kNumClasses> synthetic_class_counts(std::size_t n,
                                                            const std::array<double, kNumClasses>& proportions);

Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace floodsift

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace floodsift {

enum class FeatureKind { Continuous, Symbolic };

struct FeatureDescriptor {
    std::string name;
    FeatureKind kind;

    bool operator==(const FeatureDescriptor&) const = default;
};

// Ordered list of flow attributes. The standard schema is the 27-column
// flow-record layout; other schemas exist only for tests and bundles.
class FeatureSchema {
public:
    explicit FeatureSchema(std::vector<FeatureDescriptor> features);

    static const FeatureSchema& standard();

    std::size_t size() const noexcept { return features_.size(); }
    const FeatureDescriptor& operator[](std::size_t i) const { return features_[i]; }
    std::span<const FeatureDescriptor> features() const noexcept { return features_; }

    // Case-insensitive lookup.
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::size_t> symbolic_columns() const;

    bool operator==(const FeatureSchema&) const = default;

private:
    std::vector<FeatureDescriptor> features_;
};

inline constexpr std::size_t kNumFeatures = 27;
inline constexpr int kNumClasses = 5;

enum class ClassLabel : int {
    Normal = 0,
    UdpFlood = 1,
    Smurf = 2,
    Siddos = 3,
    HttpFlood = 4,
};

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses{
    ClassLabel::Normal, ClassLabel::UdpFlood, ClassLabel::Smurf, ClassLabel::Siddos,
    ClassLabel::HttpFlood};

constexpr int code_of(ClassLabel label) noexcept { return static_cast<int>(label); }

// Canonical names: Normal, UDP-Flood, Smurf, SIDDOS, HTTP-Flood.
std::string_view class_name(ClassLabel label) noexcept;
std::string_view class_name(int code);

// Case-insensitive; nullopt for anything outside the five names.
std::optional<ClassLabel> parse_class_label(std::string_view text) noexcept;
ClassLabel class_from_code(int code);

// Header names accepted for the class column.
bool is_class_column_name(std::string_view name) noexcept;

bool iequals(std::string_view a, std::string_view b) noexcept;

}  // namespace floodsift

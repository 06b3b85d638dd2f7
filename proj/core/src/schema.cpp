#include "floodsift/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "floodsift/error.hpp"

namespace floodsift {

namespace {

constexpr std::array<std::string_view, kNumClasses> kClassNames{
    "Normal", "UDP-Flood", "Smurf", "SIDDOS", "HTTP-Flood"};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

}  // namespace

bool iequals(std::string_view a, std::string_view b) noexcept {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

FeatureSchema::FeatureSchema(std::vector<FeatureDescriptor> features)
    : features_(std::move(features)) {
    std::set<std::string> seen;
    for (const auto& f : features_) {
        if (f.name.empty()) throw SchemaError("", "schema contains an empty column name");
        if (!seen.insert(upper(f.name)).second)
            throw SchemaError(f.name, "duplicate schema column " + f.name);
    }
}

const FeatureSchema& FeatureSchema::standard() {
    using K = FeatureKind;
    static const FeatureSchema schema({
        {"SRC_ADD", K::Continuous},
        {"DES_ADD", K::Continuous},
        {"PKT_ID", K::Continuous},
        {"FROM_NODE", K::Continuous},
        {"TO_NODE", K::Continuous},
        {"PKT_TYPE", K::Continuous},
        {"PKT_SIZE", K::Continuous},
        {"FLAGS", K::Symbolic},
        {"FID", K::Continuous},
        {"SEQ_NUMBER", K::Continuous},
        {"NUMBER_OF_PKT", K::Continuous},
        {"NUMBER_OF_BYTE", K::Continuous},
        {"NODE_NAME_FROM", K::Symbolic},
        {"NODE_NAME_TO", K::Symbolic},
        {"PKT_IN", K::Continuous},
        {"PKT_OUT", K::Continuous},
        {"PKTR", K::Continuous},
        {"PKT_DELAY_NODE", K::Continuous},
        {"PKT_RATE", K::Continuous},
        {"BYTE_RATE", K::Continuous},
        {"PKT_AVG_SIZE", K::Continuous},
        {"UTILIZATION", K::Continuous},
        {"PKT_DELAY", K::Continuous},
        {"PKT_SEND_TIME", K::Continuous},
        {"PKT_RESERVED_TIME", K::Continuous},
        {"FIRST_PKT_SENT", K::Continuous},
        {"LAST_PKT_RESERVED", K::Continuous},
    });
    return schema;
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (iequals(features_[i].name, name)) return i;
    return std::nullopt;
}

std::vector<std::size_t> FeatureSchema::symbolic_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (features_[i].kind == FeatureKind::Symbolic) out.push_back(i);
    return out;
}

std::string_view class_name(ClassLabel label) noexcept {
    return kClassNames[static_cast<std::size_t>(code_of(label))];
}

std::string_view class_name(int code) { return class_name(class_from_code(code)); }

std::optional<ClassLabel> parse_class_label(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kClassNames.size(); ++i)
        if (iequals(kClassNames[i], text)) return static_cast<ClassLabel>(i);
    return std::nullopt;
}

ClassLabel class_from_code(int code) {
    if (code < 0 || code >= kNumClasses)
        throw LabelError("label", "class code out of range: " + std::to_string(code));
    return static_cast<ClassLabel>(code);
}

bool is_class_column_name(std::string_view name) noexcept {
    return iequals(name, "PKT_CLASS") || iequals(name, "class") || iequals(name, "label");
}

}  // namespace floodsift

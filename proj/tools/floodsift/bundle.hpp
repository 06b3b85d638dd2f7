#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "floodsift/dataset.hpp"
#include "floodsift/logreg.hpp"
#include "floodsift/preprocess.hpp"
#include "floodsift/schema.hpp"
#include "floodsift/svm.hpp"

namespace floodsift::app {

inline constexpr int kBundleFormatVersion = 1;

enum class ModelKind { LogReg, SvmOvo };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct TrainingMetadata {
    std::uint64_t seed = 42;
    double split_fraction = 0.8;
    std::string timestamp;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t model_rows = 0;  // rows the classifier actually saw (after any SVM subsampling)
    bool subsampled = false;
    nlohmann::json config = nlohmann::json::object();
};

// Everything needed to score raw flow records: schema, fitted encoder and
// scaler, and the classifier parameters.
struct ModelBundle {
    int format_version = kBundleFormatVersion;
    ModelKind kind = ModelKind::LogReg;
    FeatureSchema schema = FeatureSchema::standard();
    LabelEncoder encoder;
    Scaler scaler;
    std::variant<logreg::Model, svm::OvoModel> model;
    TrainingMetadata metadata;
};

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& doc);

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& path);

// Applies the bundle's scaler and model to an already label-encoded matrix.
LabelVector predict_encoded(const ModelBundle& bundle, const Matrix& X_encoded);

// Encodes, scales and predicts; the dataset must use the bundle's schema.
LabelVector predict_dataset(const ModelBundle& bundle, const Dataset& ds);

}  // namespace floodsift::app

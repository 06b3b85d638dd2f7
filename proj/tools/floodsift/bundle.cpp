#include "floodsift/bundle.hpp"

#include <fstream>

#include "floodsift/error.hpp"

namespace floodsift::app {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    return rows;
}

Matrix matrix_from_json(const json& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto values = rows[i].get<std::vector<double>>();
        if (values.size() != cols) throw DataError("bundle", "ragged matrix in bundle");
        std::copy(values.begin(), values.end(), m.row(i).begin());
    }
    return m;
}

json schema_to_json(const FeatureSchema& schema) {
    json out = json::array();
    for (const auto& f : schema.features())
        out.push_back({{"name", f.name}, {"kind", f.kind == FeatureKind::Symbolic ? "symbolic" : "continuous"}});
    return out;
}

FeatureSchema schema_from_json(const json& doc) {
    std::vector<FeatureDescriptor> features;
    for (const auto& f : doc) {
        const auto kind = f.at("kind").get<std::string>();
        if (kind != "symbolic" && kind != "continuous") throw DataError("bundle", "unknown feature kind " + kind);
        features.push_back({f.at("name").get<std::string>(),
                            kind == "symbolic" ? FeatureKind::Symbolic : FeatureKind::Continuous});
    }
    return FeatureSchema(std::move(features));
}

json logreg_to_json(const logreg::Model& m) {
    return {{"classes", m.num_classes()},
            {"features", m.num_features()},
            {"weights", matrix_to_json(m.weights())},
            {"iterations_used", m.iterations_used()},
            {"final_loss", m.final_loss()}};
}

logreg::Model logreg_from_json(const json& doc) {
    const auto features = doc.at("features").get<std::size_t>();
    Matrix w = matrix_from_json(doc.at("weights"), features + 1);
    if (w.rows() != doc.at("classes").get<std::size_t>()) throw DataError("bundle", "logreg class count mismatch");
    return logreg::Model(std::move(w), doc.at("iterations_used").get<std::size_t>(),
                         doc.at("final_loss").get<double>());
}

json svm_to_json(const svm::OvoModel& m) {
    json binaries = json::array();
    std::size_t features = 0;
    for (const auto& b : m.binaries()) {
        features = std::max(features, b.support_vectors.cols());
        binaries.push_back({{"neg_class", b.neg_class},
                            {"pos_class", b.pos_class},
                            {"gamma", b.gamma},
                            {"bias", b.bias},
                            {"dual_coefs", b.dual_coefs},
                            {"support_vectors", matrix_to_json(b.support_vectors)},
                            {"iterations", b.iterations},
                            {"converged", b.converged}});
    }
    return {{"classes", m.num_classes()}, {"features", features}, {"binaries", binaries}};
}

svm::OvoModel svm_from_json(const json& doc) {
    const auto features = doc.at("features").get<std::size_t>();
    std::vector<svm::BinarySvm> binaries;
    for (const auto& b : doc.at("binaries")) {
        svm::BinarySvm bin;
        bin.neg_class = b.at("neg_class").get<int>();
        bin.pos_class = b.at("pos_class").get<int>();
        bin.gamma = b.at("gamma").get<double>();
        bin.bias = b.at("bias").get<double>();
        bin.dual_coefs = b.at("dual_coefs").get<std::vector<double>>();
        bin.support_vectors = matrix_from_json(b.at("support_vectors"), features);
        bin.iterations = b.at("iterations").get<std::size_t>();
        bin.converged = b.at("converged").get<bool>();
        if (bin.dual_coefs.size() != bin.support_vectors.rows())
            throw DataError("bundle", "support vector and coefficient counts differ");
        binaries.push_back(std::move(bin));
    }
    return svm::OvoModel(doc.at("classes").get<std::size_t>(), std::move(binaries));
}

}  // namespace

std::string to_string(ModelKind kind) { return kind == ModelKind::LogReg ? "logreg" : "svm"; }

ModelKind parse_model_kind(const std::string& text) {
    if (text == "logreg") return ModelKind::LogReg;
    if (text == "svm") return ModelKind::SvmOvo;
    throw DataError("bundle", "unknown model kind '" + text + "' (expected logreg or svm)");
}

json bundle_to_json(const ModelBundle& bundle) {
    json encoder = json::array();
    for (const auto& [column, cats] : bundle.encoder.categories())
        encoder.push_back({{"column", column}, {"name", bundle.schema[column].name}, {"categories", cats}});

    json doc;
    doc["format_version"] = bundle.format_version;
    doc["model_kind"] = bundle.kind == ModelKind::LogReg ? "logreg" : "svm_ovo";
    doc["schema"] = schema_to_json(bundle.schema);
    doc["encoder"] = encoder;
    doc["scaler"] = {{"min", bundle.scaler.mins()},
                     {"max", bundle.scaler.maxs()},
                     {"new_min", bundle.scaler.new_min()},
                     {"new_max", bundle.scaler.new_max()}};
    doc["model"] = std::visit(
        [](const auto& m) -> json {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, logreg::Model>)
                return logreg_to_json(m);
            else
                return svm_to_json(m);
        },
        bundle.model);
    const auto& meta = bundle.metadata;
    doc["metadata"] = {{"seed", meta.seed},
                       {"split_fraction", meta.split_fraction},
                       {"timestamp", meta.timestamp},
                       {"train_rows", meta.train_rows},
                       {"test_rows", meta.test_rows},
                       {"model_rows", meta.model_rows},
                       {"subsampled", meta.subsampled},
                       {"config", meta.config}};
    return doc;
}

ModelBundle bundle_from_json(const json& doc) {
    try {
        ModelBundle b;
        b.format_version = doc.at("format_version").get<int>();
        if (b.format_version != kBundleFormatVersion)
            throw DataError("bundle", "unsupported bundle format_version " + std::to_string(b.format_version));
        const auto kind = doc.at("model_kind").get<std::string>();
        if (kind == "logreg")
            b.kind = ModelKind::LogReg;
        else if (kind == "svm_ovo")
            b.kind = ModelKind::SvmOvo;
        else
            throw DataError("bundle", "unknown model_kind " + kind);

        b.schema = schema_from_json(doc.at("schema"));
        std::map<std::size_t, std::vector<std::string>> categories;
        for (const auto& e : doc.at("encoder"))
            categories[e.at("column").get<std::size_t>()] = e.at("categories").get<std::vector<std::string>>();
        b.encoder = LabelEncoder(b.schema, std::move(categories));

        const auto& sc = doc.at("scaler");
        b.scaler = Scaler(sc.at("min").get<std::vector<double>>(), sc.at("max").get<std::vector<double>>(),
                          sc.at("new_min").get<double>(), sc.at("new_max").get<double>());
        if (b.scaler.features() != b.schema.size()) throw DataError("bundle", "scaler width does not match schema");

        if (b.kind == ModelKind::LogReg)
            b.model = logreg_from_json(doc.at("model"));
        else
            b.model = svm_from_json(doc.at("model"));

        const auto& meta = doc.at("metadata");
        b.metadata.seed = meta.at("seed").get<std::uint64_t>();
        b.metadata.split_fraction = meta.at("split_fraction").get<double>();
        b.metadata.timestamp = meta.at("timestamp").get<std::string>();
        b.metadata.train_rows = meta.at("train_rows").get<std::size_t>();
        b.metadata.test_rows = meta.at("test_rows").get<std::size_t>();
        b.metadata.model_rows = meta.at("model_rows").get<std::size_t>();
        b.metadata.subsampled = meta.at("subsampled").get<bool>();
        b.metadata.config = meta.at("config");
        return b;
    } catch (const json::exception& e) {
        throw DataError("bundle", std::string("malformed bundle: ") + e.what());
    } catch (const TrainingError& e) {
        throw DataError("bundle", std::string("invalid model in bundle: ") + e.what());
    }
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle) {
    std::ofstream out(path);
    if (!out) throw DataError("bundle", "cannot open " + path.string() + " for writing");
    out << bundle_to_json(bundle).dump(1) << '\n';
    if (!out) throw DataError("bundle", "failed writing " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("bundle", "cannot open bundle " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("bundle", "bundle " + path.string() + " is not valid JSON: " + e.what());
    }
    return bundle_from_json(doc);
}

LabelVector predict_encoded(const ModelBundle& bundle, const Matrix& X_encoded) {
    const Matrix X = transform(X_encoded, bundle.scaler);
    return std::visit(
        [&](const auto& m) -> LabelVector {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, logreg::Model>)
                return logreg::predict(m, X);
            else
                return svm::predict_ovo(m, X);
        },
        bundle.model);
}

LabelVector predict_dataset(const ModelBundle& bundle, const Dataset& ds) {
    if (!(ds.schema() == bundle.schema)) throw SchemaError("", "dataset schema does not match the bundle schema");
    if (ds.empty()) return {};
    return predict_encoded(bundle, encode(ds, bundle.encoder).X);
}

}  // namespace floodsift::app

#include "floodsift/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "floodsift/error.hpp"
#include "floodsift/preprocess.hpp"
#include "floodsift/random.hpp"

namespace floodsift::app {

using nlohmann::json;

void RunConfig::validate() const {
    if (input.empty()) throw UsageError("an input CSV is required");
    if (out.empty()) throw UsageError("an output bundle path is required");
    if (!(split > 0.0 && split < 1.0)) throw UsageError("--split must lie strictly between 0 and 1");
    if (svm_cap < 2) throw UsageError("--svm-cap must be at least 2");
    try {
        logreg.validate();
        svm.validate();
    } catch (const TrainingError& e) {
        throw UsageError(e.what());
    }
}

json report_to_json(const Evaluation& eval) {
    const auto& r = eval.report;
    json classes = json::array();
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
        const auto& m = r.classes[k];
        classes.push_back({{"class", r.class_names[k]},
                           {"code", k},
                           {"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"support", m.support}});
    }
    json matrix = json::array();
    for (std::size_t i = 0; i < eval.confusion.num_classes(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < eval.confusion.num_classes(); ++j) row.push_back(eval.confusion.at(i, j));
        matrix.push_back(row);
    }
    return {{"accuracy", r.accuracy},
            {"total_support", r.total_support},
            {"classes", classes},
            {"confusion_matrix", matrix}};
}

void write_report_json(const std::filesystem::path& path, const Evaluation& eval) {
    std::ofstream out(path);
    if (!out) throw DataError("report", "cannot open " + path.string() + " for writing");
    out << report_to_json(eval).dump(2) << '\n';
    if (!out) throw DataError("report", "failed writing " + path.string());
}

Evaluation evaluate_labels(const LabelVector& actual, const LabelVector& predicted) {
    auto cm = metrics::confusion_matrix(actual, predicted, kNumClasses);
    auto report = metrics::make_report(cm);
    return {std::move(cm), std::move(report)};
}

std::vector<std::size_t> stratified_subsample(const LabelVector& y, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> all(y.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (y.size() <= cap) return all;

    std::vector<std::vector<std::size_t>> by_class(kNumClasses);
    for (std::size_t i = 0; i < y.size(); ++i) by_class.at(static_cast<std::size_t>(y[i])).push_back(i);

    Rng rng(seed);
    std::vector<std::size_t> picked;
    for (auto& rows : by_class) {
        if (rows.empty()) continue;
        const double share = static_cast<double>(cap) * static_cast<double>(rows.size()) / static_cast<double>(y.size());
        const auto quota = std::min(rows.size(), std::max<std::size_t>(1, static_cast<std::size_t>(std::round(share))));
        rng.shuffle(std::span(rows));
        picked.insert(picked.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(quota));
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::string build_timestamp() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

json config_echo(const RunConfig& cfg) {
    json c = {{"model", to_string(cfg.kind)}, {"split", cfg.split}, {"seed", cfg.seed}};
    if (cfg.kind == ModelKind::LogReg) {
        c["l2_strength"] = cfg.logreg.l2_strength;
        c["max_iter"] = cfg.logreg.max_iter;
        c["tol"] = cfg.logreg.tol;
        c["history"] = cfg.logreg.history;
    } else {
        c["C"] = cfg.svm.C;
        c["gamma"] = cfg.svm.gamma_mode == svm::GammaMode::Scale ? json("scale") : json(cfg.svm.gamma);
        c["tol"] = cfg.svm.tol;
        c["max_passes"] = cfg.svm.max_passes;
        c["max_iter"] = cfg.svm.max_iter;
        c["svm_cap"] = cfg.svm_cap;
    }
    return c;
}

}  // namespace

TrainResult cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    cfg.validate();
    const Dataset ds = load_csv(cfg.input);
    if (ds.size() < 2) throw DataError("load", "training needs at least 2 records");

    TrainResult result;
    result.duplicates = check_duplicates(ds);
    log << "loaded " << ds.size() << " records, " << result.duplicates << " exact duplicates\n";

    auto& bundle = result.bundle;
    bundle.kind = cfg.kind;
    bundle.schema = ds.schema();
    bundle.encoder = fit_encoder(ds);
    const EncodedData encoded = encode(ds, bundle.encoder);

    // Scaling precedes the split, so the extrema come from the full corpus.
    bundle.scaler = fit_scaler(encoded.X);
    const Matrix scaled = transform(encoded.X, bundle.scaler);
    const Split split = train_test_split(scaled, encoded.y, {cfg.split, cfg.seed});

    auto& meta = bundle.metadata;
    meta.seed = cfg.seed;
    meta.split_fraction = cfg.split;
    meta.timestamp = build_timestamp();
    meta.train_rows = split.y_train.size();
    meta.test_rows = split.y_test.size();
    meta.config = config_echo(cfg);

    LabelVector predicted;
    if (cfg.kind == ModelKind::LogReg) {
        auto model = logreg::fit(split.X_train, split.y_train, cfg.logreg, kNumClasses);
        meta.model_rows = split.y_train.size();
        predicted = logreg::predict(model, split.X_test);
        bundle.model = std::move(model);
    } else {
        const auto rows = stratified_subsample(split.y_train, cfg.svm_cap, cfg.seed);
        meta.model_rows = rows.size();
        meta.subsampled = rows.size() < split.y_train.size();
        if (meta.subsampled)
            log << "warning: svm training subsampled from " << split.y_train.size() << " to " << rows.size()
                << " rows (cap " << cfg.svm_cap << ")\n";
        auto model = svm::fit_ovo(split.X_train.select_rows(rows), select_labels(split.y_train, rows), cfg.svm,
                                  kNumClasses);
        for (const auto& b : model.binaries())
            if (!b.converged)
                log << "warning: svm pair (" << class_name(b.neg_class) << ", " << class_name(b.pos_class)
                    << ") stopped at the iteration cap before reaching the KKT tolerance\n";
        predicted = svm::predict_ovo(model, split.X_test);
        bundle.model = std::move(model);
    }

    result.held_out = evaluate_labels(split.y_test, predicted);
    out << metrics::format_report(result.held_out.report);

    save_bundle(cfg.out, bundle);
    if (cfg.report) write_report_json(*cfg.report, result.held_out);
    return result;
}

Evaluation cmd_evaluate(const std::filesystem::path& bundle_path, const std::filesystem::path& csv_path,
                        const std::optional<std::filesystem::path>& report_path, std::ostream& out) {
    const ModelBundle bundle = load_bundle(bundle_path);
    const Dataset ds = load_csv(csv_path, bundle.schema);
    if (ds.empty()) throw DataError("evaluate", "evaluation CSV has no data rows");
    const EncodedData encoded = encode(ds, bundle.encoder);
    const LabelVector predicted = predict_encoded(bundle, encoded.X);

    Evaluation eval = evaluate_labels(encoded.y, predicted);
    out << metrics::format_report(eval.report);
    if (report_path) write_report_json(*report_path, eval);
    return eval;
}

metrics::ConfusionMatrix read_confusion_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("fixture", "cannot open confusion fixture " + path.string());
    std::vector<std::vector<std::uint64_t>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream cells(line);
        std::vector<std::uint64_t> row;
        std::string cell;
        while (cells >> cell) {
            if (cell.find_first_not_of("0123456789") != std::string::npos)
                throw DataError("fixture", "confusion fixture cell '" + cell + "' is not a non-negative integer");
            row.push_back(std::stoull(cell));
        }
        if (!row.empty()) table.push_back(std::move(row));
    }
    if (table.empty()) throw DataError("fixture", "confusion fixture is empty");
    return metrics::ConfusionMatrix(table);
}

Evaluation cmd_evaluate_fixture(const std::filesystem::path& fixture_path,
                                const std::optional<std::filesystem::path>& report_path, std::ostream& out) {
    auto cm = read_confusion_fixture(fixture_path);
    auto report = metrics::make_report(cm);
    Evaluation eval{std::move(cm), std::move(report)};
    out << metrics::format_report(eval.report);
    if (report_path) write_report_json(*report_path, eval);
    return eval;
}

std::size_t cmd_predict(const std::filesystem::path& bundle_path, const std::filesystem::path& csv_path,
                        const std::filesystem::path& out_path) {
    const ModelBundle bundle = load_bundle(bundle_path);
    const Dataset ds = load_csv(csv_path, bundle.schema, {.require_label = false});
    const LabelVector predicted = predict_dataset(bundle, ds);

    std::ofstream out(out_path);
    if (!out) throw DataError("predict", "cannot open " + out_path.string() + " for writing");
    for (int code : predicted) out << class_name(code) << '\n';
    if (!out) throw DataError("predict", "failed writing " + out_path.string());
    return predicted.size();
}

void cmd_gensynth(const SyntheticSpec& spec, const std::filesystem::path& out_path) {
    save_csv(out_path, generate_synthetic(spec));
}

}  // namespace floodsift::app

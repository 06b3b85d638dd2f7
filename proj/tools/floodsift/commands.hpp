#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"

#include "floodsift/bundle.hpp"
#include "floodsift/dataset.hpp"
#include "floodsift/error.hpp"
#include "floodsift/logreg.hpp"
#include "floodsift/metrics.hpp"
#include "floodsift/svm.hpp"

namespace floodsift::app {

// Bad flags or flag combinations; maps to exit code 1.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error("usage", message) {}
};

struct RunConfig {
    std::filesystem::path input;
    ModelKind kind = ModelKind::LogReg;
    double split = 0.8;
    std::uint64_t seed = 42;
    std::size_t svm_cap = 20000;
    std::filesystem::path out;                    // bundle destination
    std::optional<std::filesystem::path> report;  // structured report destination
    logreg::Config logreg;
    svm::Config svm;

    void validate() const;
};

struct Evaluation {
    metrics::ConfusionMatrix confusion;
    metrics::ClassificationReport report;
};

struct TrainResult {
    ModelBundle bundle;
    Evaluation held_out;
    std::size_t duplicates = 0;
};

// Key-value mirror of the formatted report plus the confusion matrix.
nlohmann::json report_to_json(const Evaluation& eval);
void write_report_json(const std::filesystem::path& path, const Evaluation& eval);

Evaluation evaluate_labels(const LabelVector& actual, const LabelVector& predicted);

// Stratified, seeded row subset of at most about `cap` rows, returned in
// ascending index order. Every class present keeps at least one row.
std::vector<std::size_t> stratified_subsample(const LabelVector& y, std::size_t cap, std::uint64_t seed);

// load -> duplicate check -> encode -> scale -> split -> fit -> evaluate -> save.
// The formatted held-out report goes to `out`, notes and warnings to `log`.
TrainResult cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& log);

Evaluation cmd_evaluate(const std::filesystem::path& bundle_path, const std::filesystem::path& csv_path,
                        const std::optional<std::filesystem::path>& report_path, std::ostream& out);

// Report computed straight from a K x K count table (whitespace or comma
// separated integers, '#' comments allowed).
metrics::ConfusionMatrix read_confusion_fixture(const std::filesystem::path& path);
Evaluation cmd_evaluate_fixture(const std::filesystem::path& fixture_path,
                                const std::optional<std::filesystem::path>& report_path, std::ostream& out);

// One predicted class name per input row.
std::size_t cmd_predict(const std::filesystem::path& bundle_path, const std::filesystem::path& csv_path,
                        const std::filesystem::path& out_path);

void cmd_gensynth(const SyntheticSpec& spec, const std::filesystem::path& out_path);

// ISO-8601 UTC; honours SOURCE_DATE_EPOCH for reproducible bundles.
std::string build_timestamp();

}  // namespace floodsift::app

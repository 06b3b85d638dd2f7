#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "floodsift/commands.hpp"

using namespace floodsift;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("floodsift-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string err;
};

Run run_cli(const std::string& args, const TempDir& dir) {
    const auto err_path = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + FLOODSIFT_EXE + "\" " + args + " > \"" + (dir / "stdout.txt").string() +
                            "\" 2> \"" + err_path.string() + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err_path)};
}

app::RunConfig small_config(const TempDir& dir, app::ModelKind kind) {
    app::cmd_gensynth({.n = 600, .seed = 3}, dir / "data.csv");
    app::RunConfig cfg;
    cfg.input = dir / "data.csv";
    cfg.kind = kind;
    cfg.out = dir / "model.json";
    return cfg;
}

}  // namespace

TEST(Bundle, RoundTripGivesBitIdenticalPredictions) {
    for (auto kind : {app::ModelKind::LogReg, app::ModelKind::SvmOvo}) {
        TempDir dir;
        std::ostringstream out, log;
        const auto cfg = small_config(dir, kind);
        const auto trained = app::cmd_train(cfg, out, log);
        const auto loaded = app::load_bundle(cfg.out);
        EXPECT_EQ(loaded.kind, kind);
        EXPECT_EQ(app::bundle_to_json(loaded), app::bundle_to_json(trained.bundle));

        const auto ds = load_csv(cfg.input);
        EXPECT_EQ(app::predict_dataset(loaded, ds), app::predict_dataset(trained.bundle, ds));
        if (kind == app::ModelKind::LogReg) {
            const auto& a = std::get<logreg::Model>(trained.bundle.model).weights();
            const auto& b = std::get<logreg::Model>(loaded.model).weights();
            EXPECT_EQ(a, b);
        }
    }
}

TEST(Bundle, CorruptDocumentIsADataError) {
    TempDir dir;
    std::ofstream(dir / "bad.json") << "{\"format_version\": 1, \"kind\": \"logreg\"";
    EXPECT_THROW(app::load_bundle(dir / "bad.json"), DataError);
    std::ofstream(dir / "future.json") << "{\"format_version\": 99}";
    EXPECT_THROW(app::load_bundle(dir / "future.json"), DataError);
    EXPECT_THROW(app::load_bundle(dir / "missing.json"), DataError);
}

TEST(Train, ReportsAreDeterministic) {
    TempDir dir;
    auto cfg = small_config(dir, app::ModelKind::LogReg);
    cfg.report = dir / "r1.json";
    std::ostringstream out1, out2, log;
    app::cmd_train(cfg, out1, log);
    cfg.report = dir / "r2.json";
    app::cmd_train(cfg, out2, log);
    EXPECT_EQ(out1.str(), out2.str());
    EXPECT_EQ(slurp(dir / "r1.json"), slurp(dir / "r2.json"));
    const auto doc = nlohmann::json::parse(slurp(dir / "r1.json"));
    EXPECT_EQ(doc.at("confusion_matrix").size(), 5u);
    EXPECT_EQ(doc.at("classes").size(), 5u);
}

TEST(Train, InvalidConfigurationIsAUsageError) {
    app::RunConfig cfg;
    cfg.input = "x.csv";
    cfg.out = "y.json";
    cfg.split = 1.5;
    EXPECT_THROW(cfg.validate(), app::UsageError);
}

TEST(Subsample, StratifiedAndSeeded) {
    LabelVector y;
    for (int c = 0; c < 5; ++c) y.insert(y.end(), static_cast<std::size_t>(c == 0 ? 9000 : c == 4 ? 3 : 300), c);
    const auto rows = app::stratified_subsample(y, 1000, 5);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    std::map<int, std::size_t> per_class;
    for (auto r : rows) ++per_class[y[r]];
    EXPECT_EQ(per_class.size(), 5u);
    EXPECT_NEAR(static_cast<double>(rows.size()), 1000.0, 5.0);
    EXPECT_EQ(per_class[4], 1u);  // round(1000 * 3 / 9903) = 0, lifted to 1
    EXPECT_EQ(rows, app::stratified_subsample(y, 1000, 5));
    EXPECT_NE(rows, app::stratified_subsample(y, 1000, 6));
}

TEST(Subsample, BelowCapKeepsEverything) {
    const LabelVector y{0, 1, 1, 2};
    EXPECT_EQ(app::stratified_subsample(y, 10, 1), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Fixture, ReadsReferenceTable) {
    const auto cm = app::read_confusion_fixture(FLOODSIFT_FIXTURES "/reference_confusion.txt");
    EXPECT_EQ(cm.num_classes(), 5u);
    EXPECT_EQ(cm.at(3, 1), 800u);
    EXPECT_EQ(cm.total(), 209715u);
}

TEST(Fixture, MalformedTableIsADataError) {
    TempDir dir;
    std::ofstream(dir / "ragged.txt") << "1 2 3\n4 5\n";
    EXPECT_THROW(app::read_confusion_fixture(dir / "ragged.txt"), DataError);
    std::ofstream(dir / "word.txt") << "1 x\n2 3\n";
    EXPECT_THROW(app::read_confusion_fixture(dir / "word.txt"), DataError);
}

TEST(Executable, EndToEndAndExitCodes) {
    TempDir dir;
    const auto data = (dir / "data.csv").string();
    const auto model = (dir / "model.json").string();
    EXPECT_EQ(run_cli("gensynth --n 600 --seed 4 --out \"" + data + "\"", dir).code, 0);
    EXPECT_EQ(run_cli("train --model logreg --input \"" + data + "\" --out \"" + model + "\"", dir).code, 0);
    EXPECT_NE(slurp(dir / "stdout.txt").find("accuracy"), std::string::npos);
    EXPECT_EQ(run_cli("evaluate --bundle \"" + model + "\" --input \"" + data + "\"", dir).code, 0);
    EXPECT_EQ(run_cli("predict --bundle \"" + model + "\" --input \"" + data + "\" --out \"" +
                          (dir / "pred.txt").string() + "\"",
                      dir)
                  .code,
              0);
    const auto predictions = slurp(dir / "pred.txt");
    EXPECT_EQ(std::count(predictions.begin(), predictions.end(), '\n'), 600);

    const auto fixture = run_cli("evaluate --confusion-fixture \"" FLOODSIFT_FIXTURES "/reference_confusion.txt\"", dir);
    EXPECT_EQ(fixture.code, 0);
    EXPECT_NE(slurp(dir / "stdout.txt").find("0.9865"), std::string::npos);

    const auto usage = run_cli("train --model forest --input a --out b", dir);
    EXPECT_EQ(usage.code, 1);
    EXPECT_EQ(run_cli("", dir).code, 1);

    const auto missing = run_cli("train --model logreg --input \"" + (dir / "none.csv").string() + "\" --out x", dir);
    EXPECT_EQ(missing.code, 2);
    EXPECT_EQ(missing.err.rfind("floodsift[", 0), 0u) << missing.err;
    EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

    std::ofstream(dir / "bad.csv") << slurp(data).substr(0, slurp(data).find('\n') + 1) << "1,2,3\n";
    EXPECT_EQ(run_cli("evaluate --bundle \"" + model + "\" --input \"" + (dir / "bad.csv").string() + "\"", dir).code,
              2);

    // Constant features make the gamma heuristic undefined: a training failure.
    std::ofstream single(dir / "constant.csv");
    const auto header = slurp(data).substr(0, slurp(data).find('\n') + 1);
    single << header;
    const auto ds = load_csv(data);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        for (int rep = 0; rep < 3; ++rep) {
            FlowRecord r = ds.records().front();
            r.label = kAllClasses[c];
            Dataset one;
            one.add(r);
            std::ostringstream row;
            write_csv(row, one);
            const auto text = row.str();
            single << text.substr(text.find('\n') + 1);
        }
    }
    single.close();
    const auto training = run_cli("train --model svm --input \"" + (dir / "constant.csv").string() + "\" --out \"" +
                                      (dir / "m2.json").string() + "\"",
                                  dir);
    EXPECT_EQ(training.code, 3) << training.err;
    // Progress notes precede the diagnostic; the diagnostic is the final line.
    const auto last = training.err.substr(training.err.rfind('\n', training.err.size() - 2) + 1);
    EXPECT_EQ(last.rfind("floodsift[train]: ", 0), 0u) << training.err;
}

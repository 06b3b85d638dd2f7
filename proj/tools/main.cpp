#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "floodsift/commands.hpp"
#include "floodsift/error.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kTraining = 3 };

// One line, prefixed with the failing stage.
int fail(const std::string& stage, const std::string& message, int code) {
    std::string flat = message;
    for (auto& c : flat)
        if (c == '\n' || c == '\r') c = ' ';
    std::cerr << "floodsift[" << stage << "]: " << flat << '\n';
    return code;
}

std::array<double, floodsift::kNumClasses> parse_proportions(const std::string& text) {
    std::array<double, floodsift::kNumClasses> out{};
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= out.size()) throw floodsift::app::UsageError("--proportions takes exactly 5 comma-separated values");
        try {
            out[i++] = std::stod(item);
        } catch (const std::exception&) {
            throw floodsift::app::UsageError("--proportions value '" + item + "' is not a number");
        }
    }
    if (i != out.size()) throw floodsift::app::UsageError("--proportions takes exactly 5 comma-separated values");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    namespace app = floodsift::app;

    CLI::App cli{"floodsift: flow-record DDoS classification (logistic regression, one-vs-one RBF SVM)"};
    cli.require_subcommand(1);

    // train
    app::RunConfig run;
    std::string model_name;
    std::string gamma_text = "scale";
    std::string report_path;
    auto* train = cli.add_subcommand("train", "Fit a classifier and report on the held-out split");
    train->add_option("--model", model_name, "Classifier")->required()->check(CLI::IsMember({"logreg", "svm"}));
    train->add_option("--input", run.input, "Labelled flow CSV")->required();
    train->add_option("--split", run.split, "Train fraction")->capture_default_str();
    train->add_option("--seed", run.seed, "Split and subsample seed")->capture_default_str();
    train->add_option("--svm-cap", run.svm_cap, "Max SVM training rows (stratified subsample)")->capture_default_str();
    train->add_option("--out", run.out, "Bundle output path")->required();
    train->add_option("--report", report_path, "Structured (JSON) report output path");
    train->add_option("--l2", run.logreg.l2_strength, "Logreg L2 strength")->capture_default_str();
    train->add_option("--max-iter", run.logreg.max_iter, "Logreg iteration cap")->capture_default_str();
    train->add_option("--C", run.svm.C, "SVM box constraint")->capture_default_str();
    train->add_option("--gamma", gamma_text, "SVM RBF gamma: 'scale' or a positive number")->capture_default_str();

    // evaluate
    std::string bundle_path;
    std::string input_path;
    std::string eval_report;
    std::string fixture_path;
    auto* evaluate = cli.add_subcommand("evaluate", "Score a labelled CSV with a saved bundle");
    evaluate->add_option("--bundle", bundle_path, "Model bundle");
    evaluate->add_option("--input", input_path, "Labelled flow CSV");
    evaluate->add_option("--report", eval_report, "Structured (JSON) report output path");
    evaluate->add_option("--confusion-fixture", fixture_path)->group("");  // hidden: report from a K x K table

    // predict
    std::string predict_bundle;
    std::string predict_input;
    std::string predict_out;
    auto* predict = cli.add_subcommand("predict", "Write one predicted class name per input row");
    predict->add_option("--bundle", predict_bundle, "Model bundle")->required();
    predict->add_option("--input", predict_input, "Flow CSV (class column optional)")->required();
    predict->add_option("--out", predict_out, "Output path")->required();

    // gensynth
    floodsift::SyntheticSpec synth;
    std::string synth_out;
    std::string proportions;
    auto* gensynth = cli.add_subcommand("gensynth", "Write a seeded synthetic flow corpus");
    gensynth->add_option("--n", synth.n, "Record count")->required();
    gensynth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    gensynth->add_option("--separation", synth.separation, "Distance between class means")->capture_default_str();
    gensynth->add_option("--proportions", proportions, "Five class fractions, comma separated");
    gensynth->add_option("--out", synth_out, "CSV output path")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*train) {
            run.kind = app::parse_model_kind(model_name);
            if (!report_path.empty()) run.report = report_path;
            if (gamma_text != "scale") {
                try {
                    run.svm.gamma = std::stod(gamma_text);
                } catch (const std::exception&) {
                    throw app::UsageError("--gamma must be 'scale' or a positive number");
                }
                run.svm.gamma_mode = floodsift::svm::GammaMode::Fixed;
            }
            app::cmd_train(run, std::cout, std::cerr);
        } else if (*evaluate) {
            std::optional<std::filesystem::path> report;
            if (!eval_report.empty()) report = eval_report;
            if (!fixture_path.empty()) {
                app::cmd_evaluate_fixture(fixture_path, report, std::cout);
            } else {
                if (bundle_path.empty() || input_path.empty())
                    throw app::UsageError("evaluate needs --bundle and --input");
                app::cmd_evaluate(bundle_path, input_path, report, std::cout);
            }
        } else if (*predict) {
            app::cmd_predict(predict_bundle, predict_input, predict_out);
        } else if (*gensynth) {
            if (!proportions.empty()) synth.proportions = parse_proportions(proportions);
            app::cmd_gensynth(synth, synth_out);
        }
    } catch (const app::UsageError& e) {
        return fail(e.stage(), e.what(), kUsage);
    } catch (const floodsift::TrainingError& e) {
        return fail(e.stage(), e.what(), kTraining);
    } catch (const floodsift::Error& e) {
        return fail(e.stage(), e.what(), kData);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kData);
    }
    return kOk;
}

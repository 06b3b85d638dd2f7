#include <benchmark/benchmark.h>

#include <random>

#include "floodsift/dataset.hpp"
#include "floodsift/logreg.hpp"
#include "floodsift/preprocess.hpp"
#include "floodsift/svm.hpp"

using namespace floodsift;

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (double& v : m.values()) v = g(rng);
    return m;
}

EncodedData synthetic(std::size_t n) {
    const auto ds = generate_synthetic({.n = n, .seed = 7});
    auto enc = encode(ds, fit_encoder(ds));
    enc.X = transform(enc.X, fit_scaler(enc.X));
    return enc;
}

void BM_LogregLossGradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto Xa = logreg::augment(gaussian(n, 27, 1));
    LabelVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 5);
    const auto W = gaussian(5, 28, 2);
    for (auto _ : state) benchmark::DoNotOptimize(logreg::loss_and_gradient(W, Xa, y, 1.0));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_LogregLossGradient)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_LogregFit(benchmark::State& state) {
    const auto data = synthetic(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(logreg::fit(data.X, data.y, {}, kNumClasses));
}
BENCHMARK(BM_LogregFit)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SmoBinary(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto X = gaussian(n, 27, 3);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i % 2 == 0 ? 1 : -1;
        X(i, 0) += labels[i];
    }
    const svm::Config cfg{.gamma_mode = svm::GammaMode::Fixed, .gamma = svm::gamma_scale(X)};
    for (auto _ : state) benchmark::DoNotOptimize(svm::train_binary(X, labels, cfg));
}
BENCHMARK(BM_SmoBinary)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_OvoFitPredict(benchmark::State& state) {
    const auto data = synthetic(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto model = svm::fit_ovo(data.X, data.y, {}, kNumClasses);
        benchmark::DoNotOptimize(svm::predict_ovo(model, data.X));
    }
}
BENCHMARK(BM_OvoFitPredict)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_MinMaxTransform(benchmark::State& state) {
    const auto X = gaussian(static_cast<std::size_t>(state.range(0)), 27, 4);
    const auto scaler = fit_scaler(X);
    for (auto _ : state) benchmark::DoNotOptimize(transform(X, scaler));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0) * 27 * 8);
}
BENCHMARK(BM_MinMaxTransform)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "rumor/credibility.hpp"
#include "rumor/epifit.hpp"
#include "rumor/forest.hpp"
#include "rumor/pipeline.hpp"
#include "rumor/synth.hpp"

using namespace rumor;

namespace {

const std::vector<Event>& events() {
    static const auto corpus = generate_synthetic_corpus(3, 40);
    return corpus;
}

const Dataset& dataset() {
    static const Dataset data = [] {
        PipelineConfig config;
        config.features = {false, true, false, false};
        std::vector<std::string> ids;
        for (const auto& e : events()) ids.push_back(e.event_id);
        return build_dataset(events(), ids, 24.0, config, FeatureContext::from_config(config), nullptr);
    }();
    return data;
}

const CredibilityModel& credit_model() {
    static const CredibilityModel model = [] {
        CredibilityHyper h;
        h.epochs = 1;
        auto texts = labeled_tweets(std::span(events()).first(6));
        texts.resize(std::min<std::size_t>(texts.size(), 200));
        return train_credibility(texts, h);
    }();
    return model;
}

ForestConfig forest_config() {
    ForestConfig c;
    c.n_trees = 64;
    c.seed = 1;
    return c;
}

EpiFitConfig epi_config() {
    EpiFitConfig c;
    c.starts = 4;
    c.max_evaluations = 600;
    c.restarts = 1;
    return c;
}

void BM_ForestParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(train_forest(dataset(), forest_config()));
}
void BM_ForestSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::train_forest(dataset(), forest_config()));
}

void BM_EpiFitParallel(benchmark::State& state) {
    const auto series = volume_series(events()[0], 48);
    for (auto _ : state) benchmark::DoNotOptimize(fit_model(series, EpiModel::seiz, epi_config()));
}
void BM_EpiFitSerial(benchmark::State& state) {
    const auto series = volume_series(events()[0], 48);
    for (auto _ : state) benchmark::DoNotOptimize(reference::fit_model(series, EpiModel::seiz, epi_config()));
}

void BM_CreditParallel(benchmark::State& state) {
    const auto buckets = bucket_intervals(events()[1], 48);
    for (auto _ : state) benchmark::DoNotOptimize(credit_score(credit_model(), buckets));
}
void BM_CreditSerial(benchmark::State& state) {
    const auto buckets = bucket_intervals(events()[1], 48);
    for (auto _ : state) benchmark::DoNotOptimize(reference::credit_score(credit_model(), buckets));
}

}  // namespace

BENCHMARK(BM_ForestParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpiFitParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpiFitSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CreditParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CreditSerial)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    dataset();
    credit_model();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}

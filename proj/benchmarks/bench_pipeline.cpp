#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "csiaug/model.hpp"
#include "csiaug/spectro.hpp"
#include "csiaug/spectrogram_file.hpp"

using namespace csiaug;

namespace {

void BM_Segment(benchmark::State& state) {
  const auto packets = static_cast<std::size_t>(state.range(0));
  RandomStream rng(2);
  AmplitudeSeries series(kDefaultHeight);
  std::vector<double> row(kDefaultHeight);
  for (std::size_t i = 0; i < packets; ++i) {
    for (auto& v : row) v = rng.uniform(0.0, 40.0);
    series.push_back(row);
  }
  for (auto _ : state) benchmark::DoNotOptimize(segment(series));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * packets));
}
BENCHMARK(BM_Segment)->Arg(4000)->Arg(40000);

void BM_EncodeDecode(benchmark::State& state) {
  const auto x = bench::noise();
  for (auto _ : state) benchmark::DoNotOptimize(decode_spectrogram(encode_spectrogram({x, 1})));
}
BENCHMARK(BM_EncodeDecode);

void BM_ModelForward(benchmark::State& state) {
  const ConvClassifier model(ClassifierConfig{}, kDefaultWidth, kDefaultHeight, 4);
  const auto x = bench::noise();
  for (auto _ : state) benchmark::DoNotOptimize(model.scores(x));
}
BENCHMARK(BM_ModelForward)->Unit(benchmark::kMillisecond);

void BM_ModelBackward(benchmark::State& state) {
  ConvClassifier model(ClassifierConfig{}, kDefaultWidth, kDefaultHeight, 4);
  const auto x = bench::noise();
  for (auto _ : state) benchmark::DoNotOptimize(model.accumulate_gradient(x, 1));
}
BENCHMARK(BM_ModelBackward)->Unit(benchmark::kMillisecond);

}  // namespace

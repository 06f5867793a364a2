#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "csiaug/augment.hpp"

using namespace csiaug;

namespace {

void BM_CircularRotate(benchmark::State& state) {
  const auto x = bench::noise();
  std::size_t shift = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(circular_rotate(x, shift));
    shift = shift % x.width() + 1;
  }
}
BENCHMARK(BM_CircularRotate);

void BM_ResizedCrop(benchmark::State& state) {
  const auto mode = static_cast<ResizeMode>(state.range(0));
  const auto x = bench::noise();
  for (auto _ : state) benchmark::DoNotOptimize(resized_crop(x, mode, 287, 41));
}
BENCHMARK(BM_ResizedCrop)
    ->Arg(static_cast<int>(ResizeMode::crop_stretch))
    ->Arg(static_cast<int>(ResizeMode::compress_tile))
    ->Arg(static_cast<int>(ResizeMode::compress_stretch));

void BM_AmplitudeScale(benchmark::State& state) {
  const auto x = bench::noise();
  const std::vector<double> f(x.height(), 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(amplitude_scale(x, f));
}
BENCHMARK(BM_AmplitudeScale);

void BM_ContrastScale(benchmark::State& state) {
  const auto x = bench::noise();
  const std::vector<double> f(x.height(), 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(contrast_scale(x, f));
}
BENCHMARK(BM_ContrastScale);

void BM_DrawOperator(benchmark::State& state) {
  const auto spec = PipelineSpec::of({AugmentKind::circular_rotation, AugmentKind::resized_crop, AugmentKind::amplitude, AugmentKind::contrast}, 3);
  std::uint64_t i = 0;
  for (auto _ : state) {
    const auto seed = sample_seed(spec.global_seed, {0, i++});
    for (const auto& op : spec.operators) {
      benchmark::DoNotOptimize(draw_operator(op, spec, kDefaultWidth, kDefaultHeight, seed));
    }
  }
}
BENCHMARK(BM_DrawOperator);

void BM_FullPipeline(benchmark::State& state) {
  const auto spec = PipelineSpec::of({AugmentKind::circular_rotation, AugmentKind::resized_crop, AugmentKind::amplitude, AugmentKind::contrast}, 3);
  const auto x = bench::noise();
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(apply_pipeline(x, spec, {0, i++}));
}
BENCHMARK(BM_FullPipeline);

}  // namespace

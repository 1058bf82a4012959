#include "fan_io.hpp"

#include <stackheight/counting.hpp>
#include <stackheight/raised_heights.hpp>
#include <stackheight/zeta_local.hpp>

#include <benchmark/benchmark.h>

#include <string>

namespace {

using namespace stackheight;

Fan bundled(const std::string& name) { return Fan(cli::load_fan(std::string(STACKHEIGHT_FANS_DIR) + "/" + name + ".json")); }

void BM_CountSkeleton(benchmark::State& state, const char* name) {
  const Fan fan = bundled(name);
  const RaisedVector s = anticanonical(fan);
  const Rational bound(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_points(fan, s, bound).points);
}

void BM_CountNaive(benchmark::State& state, const char* name) {
  const Fan fan = bundled(name);
  const RaisedVector s = anticanonical(fan);
  const Rational bound(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_points_naive(fan, s, bound).points);
}

void BM_GammaEuler(benchmark::State& state, const char* name) {
  const Fan fan = bundled(name);
  const RaisedVector s = anticanonical(fan);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_euler(fan, s, static_cast<std::uint64_t>(state.range(0))));
}

BENCHMARK_CAPTURE(BM_CountSkeleton, p1, "p1")->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CountSkeleton, p12, "p12")->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CountSkeleton, p2, "p2")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CountNaive, p12, "p12")->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GammaEuler, p1xbmu2, "p1xbmu2")->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

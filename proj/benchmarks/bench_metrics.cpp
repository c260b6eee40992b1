#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "simt/bleu.hpp"
#include "simt/metrics.hpp"

namespace {

void BM_LatencyMetrics(benchmark::State& state) {
  simt::DelaySequence d;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t t = 0; t < n; ++t) d.g.push_back(static_cast<double>(std::min(t + 3, n)));
  d.sourceLen = static_cast<double>(n);
  d.refLen = n;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simt::averageLagging(d));
    benchmark::DoNotOptimize(simt::lengthAdaptiveAverageLagging(d));
    benchmark::DoNotOptimize(simt::averageProportion(d));
    benchmark::DoNotOptimize(simt::differentiableAverageLagging(d));
  }
}
BENCHMARK(BM_LatencyMetrics)->Arg(30)->Arg(3000);

void BM_CorpusBleu(benchmark::State& state) {
  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  for (int i = 0; i < state.range(0); ++i) {
    hyps.push_back("the quick brown fox jumps over the lazy dog number " + std::to_string(i) + ".");
    refs.push_back("the quick brown fox jumped over a lazy dog, number " + std::to_string(i) + ".");
  }
  for (auto _ : state) benchmark::DoNotOptimize(simt::corpusBleu(hyps, refs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorpusBleu)->Arg(100)->Arg(1000);

}  // namespace

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "simt/engine.hpp"
#include "simt/mock_backends.hpp"

namespace {

void BM_DictionarySession(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  simt::Dictionary dict;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) {
    words.push_back("w" + std::to_string(i));
    dict[words.back()] = {"v" + std::to_string(i), 0};
  }
  simt::DictionaryBackend backend(dict);
  simt::SessionConfig config;
  config.k = 3;
  for (auto _ : state) {
    simt::TextStream source(words);
    benchmark::DoNotOptimize(simt::runSession(source, backend, config));
  }
}
BENCHMARK(BM_DictionarySession)->Arg(10)->Arg(40);

}  // namespace

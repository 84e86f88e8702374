#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "temponym/engine.hpp"
#include "temponym/eval.hpp"
#include "temponym/io.hpp"
#include "temponym/rulepack.hpp"

using namespace temponym;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TEMPONYM_DATA_DIR;

const std::vector<Document>& corpus() {
  static const auto docs = [] {
    const std::vector<fs::path> in = {kData / "corpus" / "mini"};
    return load_corpus(in, InputFormat::Plain);
  }();
  return docs;
}

const RulePack& pack(const char* name) {
  static const RulePack base = load_rulepack(kData / "packs" / "german-base");
  static const RulePack ext = load_rulepack(kData / "packs" / "german-ext");
  return std::string_view(name) == "german-base" ? base : ext;
}

void BM_LoadPack(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_rulepack(kData / "packs" / "german-ext"));
}
BENCHMARK(BM_LoadPack)->Unit(benchmark::kMillisecond);

void BM_TagCorpus(benchmark::State& state, const char* name) {
  const RulePack& p = pack(name);
  std::size_t bytes = 0;
  for (const auto& d : corpus()) bytes += d.text.size();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tag_corpus(p, corpus(), {}, unsigned(state.range(0))));
  }
  state.SetBytesProcessed(std::int64_t(state.iterations() * bytes));
}
BENCHMARK_CAPTURE(BM_TagCorpus, base, "german-base")->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TagCorpus, ext, "german-ext")->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ClassifyPair(benchmark::State& state) {
  std::mt19937_64 rng(1);
  auto spans = [&] {
    std::vector<Span> out;
    std::size_t pos = 0;
    for (int i = 0; i < state.range(0); ++i) {
      const std::size_t b = pos + rng() % 5;
      out.push_back({b, b + 1 + rng() % 8});
      pos = out.back().end;
    }
    return out;
  };
  const auto a = spans();
  const auto b = spans();
  for (auto _ : state) benchmark::DoNotOptimize(classify_pair(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassifyPair)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();

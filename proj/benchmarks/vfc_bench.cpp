#include <benchmark/benchmark.h>

#include "synth.hpp"
#include "vfc/budget.hpp"
#include "vfc/diff.hpp"
#include "vfc/enrich.hpp"
#include "vfc/split.hpp"
#include "vfc/tokenizer.hpp"

namespace {

using namespace vfc;

const testing::SynthCorpus& commits() {
  static const auto c = testing::generate_commit_corpus(200, 42);
  return c;
}

void BM_ParseRender(benchmark::State& state) {
  const auto& recs = commits().records;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& r = recs[i++ % recs.size()];
    benchmark::DoNotOptimize(diff::render_unified_diff(diff::parse_unified_diff(r.diff)));
  }
}
BENCHMARK(BM_ParseRender);

void BM_Enrich(benchmark::State& state) {
  const auto& c = commits();
  enrich::EnrichOptions opts;
  opts.level = static_cast<enrich::Level>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(enrich::enrich_commit(c.records[i++ % c.records.size()], c.snapshots, opts));
}
BENCHMARK(BM_Enrich)->Arg(0)->Arg(1)->Arg(2);

void BM_Truncate(benchmark::State& state) {
  static const auto docs = testing::generate_adversarial_documents(50, 1);
  const auto tok = Tokenizer::builtin();
  const bool naive = state.range(1) != 0;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& d = docs[i++ % docs.size()];
    const auto limit = static_cast<std::size_t>(state.range(0));
    benchmark::DoNotOptimize(naive ? budget::truncate_naive(d, limit, tok) : budget::truncate_context_aware(d, limit, tok));
  }
}
BENCHMARK(BM_Truncate)->Args({512, 0})->Args({4096, 0})->Args({512, 1})->Args({4096, 1});

void BM_GroupSplit(benchmark::State& state) {
  testing::RecordCorpusOptions o;
  o.records = static_cast<std::size_t>(state.range(0));
  o.groups = o.records / 15;
  const auto recs = testing::generate_records(o, 7);
  for (auto _ : state) benchmark::DoNotOptimize(corpus::split_group_stratified(recs, {}));
}
BENCHMARK(BM_GroupSplit)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Batch matching: OpenMP kernel vs the serial reference on one synthetic corpus.

#include <benchmark/benchmark.h>

#include "synth.hpp"
#include "zblinks/kernels.hpp"

using namespace zblinks;

namespace {

struct Setup {
    testing::SynthCorpus corpus;
    ArxivCatalog arxiv;
    DecisionTree tree;
    std::vector<const ZbRecord*> records;

    Setup()
        : corpus(testing::make_corpus({.zb_records = 4000, .derived = 3200, .distractors = 800, .seed = 3})),
          arxiv(corpus.arxiv),
          tree({TreeNode{false, false, 0, 0.5, 1, 4}, TreeNode{false, false, 1, 0.6, 2, 3}, TreeNode::leaf(true),
                TreeNode::leaf(false), TreeNode::leaf(false)},
               TreeParams{}),
          records(record_pointers(corpus.zb)) {}
};

const Setup& setup() {
    static const Setup s;
    return s;
}

void BM_MatchSerial(benchmark::State& state) {
    const auto& s = setup();
    for (auto _ : state) benchmark::DoNotOptimize(match_all_serial(s.records, s.arxiv, s.tree, 3));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.records.size()));
}

void BM_MatchParallel(benchmark::State& state) {
    const auto& s = setup();
    set_match_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(match_all(s.records, s.arxiv, s.tree, 3));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.records.size()));
    set_match_threads(0);
}

}  // namespace

BENCHMARK(BM_MatchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MatchParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

// Microbenchmarks for the hot paths: forest training, metric computation,
// and the subgroup scan. Run with --benchmark_filter=... to pick one.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/encode.hpp"
#include "fairaudit/forest.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/scan.hpp"

namespace {

using namespace fairaudit;

static void BM_ForestFit(benchmark::State& state) {
  Dataset ds = synth_biased(std::size_t(state.range(0)), 0.3, 5);
  Encoder enc = Encoder::fit(ds);
  Matrix x = enc.transform(ds);
  ForestOptions opts;
  opts.n_trees = 20;
  opts.seed = 5;
  for (auto _ : state) {
    RandomForest f = RandomForest::fit(x, ds.y, opts);
    benchmark::DoNotOptimize(f.oob_scores().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestFit)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_FairnessReport(benchmark::State& state) {
  std::size_t n = std::size_t(state.range(0));
  Rng rng(9);
  std::vector<std::uint8_t> y(n), pred(n), priv(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::uint8_t(rng.next_below(2));
    pred[i] = std::uint8_t(rng.next_below(2));
    priv[i] = std::uint8_t(rng.next_below(2));
  }
  for (auto _ : state) {
    FairnessReport rep = fairness_report(y, pred, priv);
    benchmark::DoNotOptimize(rep.accuracy);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FairnessReport)->Arg(10000)->Arg(100000);

static void BM_SubgroupScan(benchmark::State& state) {
  Dataset ds = synth_biased(std::size_t(state.range(0)), 0.3, 5);
  double mean_y = 0.0;
  for (auto v : ds.y) mean_y += v;
  mean_y /= double(ds.n());
  std::vector<double> expectations(ds.n(), mean_y);
  ScanOptions opts;
  opts.penalty = 1.0;
  opts.restarts = 5;
  opts.seed = 5;
  for (auto _ : state) {
    ScanResult r = scan(ds, expectations, opts);
    benchmark::DoNotOptimize(r.score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SubgroupScan)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
